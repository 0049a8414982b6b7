#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "nrmsym/errors.hpp"
#include "nrmsym/jobspec.hpp"
#include "nrmsym/runner.hpp"

using namespace nrmsym;
namespace fs = std::filesystem;

namespace {

std::string spec_path(const char* name) {
  return std::string(NRMSYM_SPEC_DIR) + "/" + name;
}

nlohmann::json minimal_doc() {
  return nlohmann::json::parse(R"json({
    "schema_version": 1,
    "frame": {
      "classes": [
        {"label": "H", "count": 3, "spin": "1/2", "statistics": "fermion"}
      ],
      "allow_inversion": true
    },
    "point_group": ["(1 2 3)", "(1 2)*"],
    "feasible": ["E*"],
    "irrep": {"label": "irrep_0"},
    "e0": 1.0,
    "seed_blocks": [{"coset": "E*", "block": [[0.01]]}]
  })json");
}

int run_cli(const std::string& args, std::string* output = nullptr) {
  const fs::path out = fs::temp_directory_path() / "nrmsym_cli_out.txt";
  const std::string cmd =
      std::string(NRMSYM_CLI_PATH) + " " + args + " > " + out.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  if (output) {
    std::ifstream in(out);
    std::ostringstream buf;
    buf << in.rdbuf();
    *output = buf.str();
  }
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("cycle-notation words parse and validate") {
  const FramePtr f = testing::pf5_frame();
  CHECK(parse_word("(1 2 3)", f).to_word() == "(1 2 3)");
  CHECK(parse_word("(1 2)*", f).star());
  CHECK(parse_word("E", f).is_identity());
  CHECK(parse_word("E*", f) == PermInv::inversion(f));
  CHECK(parse_word("(1 2)(3 4)", f).map(2) == 3);
  CHECK(parse_word(" ( 1 2 ) * ", f).star());
  CHECK(parse_word("(1,2,3)", f).to_word() == "(1 2 3)");

  // Cross-class permutation: slot 6 is the P nucleus.
  CHECK_THROWS_AS(parse_word("(1 6)", f), ValidationError);
  CHECK_THROWS_AS(parse_word("(1 2", f), ParseError);
  CHECK_THROWS_AS(parse_word("(1 9)", f), ParseError);
  CHECK_THROWS_AS(parse_word("(1 1)", f), ValidationError);
  CHECK_THROWS_AS(parse_word("(1)", f), ParseError);
  CHECK_THROWS_AS(parse_word("bogus", f), ParseError);
  CHECK_THROWS_AS(parse_word("(1 2)**", f), ParseError);

  const FramePtr no_inv = testing::h3_frame(false);
  CHECK_THROWS_AS(parse_word("(1 2)*", no_inv), ValidationError);
}

TEST_CASE("spec documents validate field by field") {
  CHECK_NOTHROW(parse_spec_json(minimal_doc()));

  auto doc = minimal_doc();
  doc.erase("schema_version");
  CHECK_THROWS_AS(parse_spec_json(doc), ValidationError);

  doc = minimal_doc();
  doc["schema_version"] = 2;
  CHECK_THROWS_AS(parse_spec_json(doc), ValidationError);

  doc = minimal_doc();
  doc["frame"]["classes"][0]["statistics"] = "fermions";
  CHECK_THROWS_AS(parse_spec_json(doc), ValidationError);

  doc = minimal_doc();
  doc["frame"]["classes"][0]["spin"] = "1/3";
  CHECK_THROWS_AS(parse_spec_json(doc), ValidationError);

  doc = minimal_doc();
  doc["frame"]["classes"][0]["spin"] = 0.5;
  CHECK_NOTHROW(parse_spec_json(doc));

  doc = minimal_doc();
  doc["point_group"] = nlohmann::json::array();
  CHECK_THROWS_AS(parse_spec_json(doc), ValidationError);

  doc = minimal_doc();
  doc["seed_blocks"][0]["block"] = {{0.01, 0.0}};  // 1x2, not square
  CHECK_THROWS_AS(parse_spec_json(doc), ValidationError);

  doc = minimal_doc();
  doc["options"]["relabel"] = {{"irrep_0", "A1'"}};
  const JobSpec spec = parse_spec_json(doc);
  CHECK(spec.relabel.at("irrep_0") == "A1'");
}

TEST_CASE("group command reproduces the PF5 arithmetic") {
  const JobSpec spec = parse_spec(spec_path("pf5.json"));
  const CommandResult res = run_command("group", spec);
  CHECK(res.json["orders"]["R"] == 12);
  CHECK(res.json["orders"]["Q"] == 240);
  CHECK(res.json["orders"]["P"] == 240);
  CHECK(res.json["case"] == "B");
  CHECK(res.json["cosets_R_in_Q"] == 20);
  CHECK(res.json["irrep"]["dim"] == 2);
  CHECK(res.json["irrep"]["display"] == "E'");
  CHECK(res.json["induced_dim"] == 40);
  CHECK(res.json["bound"]["required_order"] == 1600);
  CHECK(res.json["bound"]["exceeds_p"] == true);
  CHECK(res.text.find("1600") != std::string::npos);
  CHECK(res.text.find("case              : B") != std::string::npos);
}

TEST_CASE("group command works without an irrep; split demands one") {
  auto doc = minimal_doc();
  doc.erase("irrep");
  const JobSpec spec = parse_spec_json(doc);
  const CommandResult res = run_command("group", spec);
  CHECK(res.json["orders"]["Q"] == 12);
  CHECK(!res.json.contains("bound"));
  CHECK_THROWS_AS(run_command("split", spec), ValidationError);

  // A bad label is reported even where the irrep is optional.
  doc["irrep"] = {{"label", "irrep_99"}};
  CHECK_THROWS_AS(run_command("group", parse_spec_json(doc)), ValidationError);
}

TEST_CASE("split command reports the inversion doubling") {
  const JobSpec spec = parse_spec(spec_path("nh3.json"));
  const CommandResult res = run_command("split", spec);
  CHECK(res.json["induced_dim"] == 2);
  int levels = 0, with_m = 0;
  for (const auto& row : res.json["multiplicities"]) {
    levels += row["m"].get<int>();
    if (row["m"].get<int>() > 0) {
      ++with_m;
      CHECK(row["dim"] == 1);
      CHECK(row["m"] == 1);
    }
  }
  CHECK(levels == 2);
  CHECK(with_m == 2);
  CHECK(res.json["total_levels"] == 2);
}

TEST_CASE("spectrum command: ammonia clusters at E0 +- beta") {
  const JobSpec spec = parse_spec(spec_path("nh3.json"));
  const CommandResult res = run_command("spectrum", spec);
  REQUIRE(res.json["clusters"].size() == 2);
  CHECK(std::abs(res.json["clusters"][0]["mean_energy"].get<double>() - 0.99) < 1e-10);
  CHECK(std::abs(res.json["clusters"][1]["mean_energy"].get<double>() - 1.01) < 1e-10);
  CHECK(res.json["clusters"][0]["degeneracy"] == 1);
  CHECK(res.json["clusters"][1]["degeneracy"] == 1);
  CHECK(res.json["match"] == true);
  CHECK(res.json["multiset_match"] == true);
}

TEST_CASE("spectrum on PF5 covers all forty states") {
  const JobSpec spec = parse_spec(spec_path("pf5.json"));
  const CommandResult res = run_command("spectrum", spec);
  CHECK(res.json["dimension"] == 40);
  int total = 0;
  for (const auto& c : res.json["clusters"]) total += c["degeneracy"].get<int>();
  CHECK(total == 40);
  CHECK(res.json["match"] == true);
  CHECK(res.json["residuals"]["cross_sector"].get<double>() < 1e-9);
}

TEST_CASE("weights command respects the spectator flag") {
  JobSpec spec = parse_spec(spec_path("nh3.json"));
  const CommandResult with = run_command("weights", spec);
  CHECK(with.json["case"] == "B");
  CHECK(with.json["spin_dim"] == 16);
  CHECK(with.json["sum_rule"]["plus"] == 16);
  CHECK(with.json["sum_rule"]["minus"] == 16);

  spec.include_spectator_spins = false;
  const CommandResult without = run_command("weights", spec);
  CHECK(without.json["spin_dim"] == 8);
  CHECK(without.json["sum_rule"]["plus"] == 8);
  CHECK(without.json["sum_rule"]["minus"] == 8);
}

TEST_CASE("empty feasible list: a single unsplit level") {
  auto doc = minimal_doc();
  doc.erase("feasible");
  doc.erase("seed_blocks");
  const JobSpec spec = parse_spec_json(doc);
  const CommandResult res = run_command("split", spec);
  CHECK(res.json["total_levels"] == 1);
  CHECK(res.json["num_cosets"] == 1);
  const CommandResult spectrum = run_command("spectrum", spec);
  REQUIRE(spectrum.json["clusters"].size() == 1);
  CHECK(spectrum.json["clusters"][0]["degeneracy"] == 1);
}

TEST_CASE("irrep selection by explicit character row") {
  auto doc = minimal_doc();
  doc["irrep"] = {{"characters", {1.0, 1.0, 1.0}}};
  const JobSpec spec = parse_spec_json(doc);
  const CommandResult res = run_command("split", spec);
  CHECK(res.json["irrep"]["label"] == "irrep_0");

  doc["irrep"] = {{"characters", {7.0, 1.0, 1.0}}};
  CHECK_THROWS_AS(run_command("split", parse_spec_json(doc)), ValidationError);
}

TEST_CASE("duplicate seed cosets are rejected") {
  // The starred 3-cycle shares its coset with E*, which is already seeded.
  auto doc = minimal_doc();
  doc["seed_blocks"].push_back({{"coset", "(1 2 3)*"}, {"block", {{0.02}}}});
  CHECK_THROWS_AS(run_command("spectrum", parse_spec_json(doc)), ValidationError);

  // A seed inside the point group itself pins the diagonal block, which must
  // then equal E0 times the identity.
  auto doc2 = minimal_doc();
  doc2["seed_blocks"].push_back({{"coset", "(1 3)*"}, {"block", {{0.02}}}});
  CHECK_THROWS_AS(run_command("spectrum", parse_spec_json(doc2)), ValidationError);
}

TEST_CASE("weights on a Case A rotor") {
  const JobSpec spec = parse_spec(spec_path("ch3_rotor.json"));
  const CommandResult res = run_command("weights", spec);
  CHECK(res.json["case"] == "A");
  CHECK(res.json["spin_dim"] == 8);
  CHECK(res.json["sum_rule"]["plus"] == 8);
  for (const auto& row : res.json["rows"])
    CHECK(row["weight"].get<int>() == row["m_plus"].get<int>() + row["m_minus"].get<int>());
}

TEST_CASE("verify command runs both configurations") {
  const JobSpec spec = parse_spec(spec_path("ch3_rotor.json"));
  const CommandResult res = run_command("verify", spec);
  REQUIRE(res.json["configurations"].size() == 2);
  CHECK(res.json["configurations"][0]["name"] == "non-rigid");
  CHECK(res.json["configurations"][1]["name"] == "rigid");
  bool saw_ok = false;
  for (const auto& config : res.json["configurations"]) {
    for (const auto& row : config["results"]) {
      if (row["status"] == "ok") {
        saw_ok = true;
        for (const char* side : {"splus", "sminus"}) {
          if (row[side]["status"] == "ok")
            CHECK(row[side]["residual"].get<double>() < 1e-9);
        }
      }
    }
  }
  CHECK(saw_ok);
}

TEST_CASE("reports are deterministic byte for byte") {
  const JobSpec spec = parse_spec(spec_path("nh3.json"));
  for (const char* cmd : {"group", "split", "spectrum", "weights"}) {
    const CommandResult a = run_command(cmd, spec);
    const CommandResult b = run_command(cmd, spec);
    CHECK(a.text == b.text);
    CHECK(a.json.dump() == b.json.dump());
  }
}

TEST_CASE("structured output round-trips exactly") {
  const JobSpec spec = parse_spec(spec_path("nh3.json"));
  const CommandResult res = run_command("spectrum", spec);
  const std::string dumped = res.json.dump();
  const auto reparsed = nlohmann::ordered_json::parse(dumped);
  CHECK(reparsed.dump() == dumped);
  CHECK(reparsed["clusters"][0]["degeneracy"].get<int>() ==
        res.json["clusters"][0]["degeneracy"].get<int>());
  CHECK(reparsed["clusters"][0]["mean_energy"].get<double>() ==
        res.json["clusters"][0]["mean_energy"].get<double>());
  CHECK(reparsed["residuals"]["commutant"].get<double>() ==
        res.json["residuals"]["commutant"].get<double>());
}

TEST_CASE("unknown command is a validation error") {
  const JobSpec spec = parse_spec(spec_path("nh3.json"));
  CHECK_THROWS_AS(run_command("banana", spec), ValidationError);
}

TEST_CASE("binary: exit codes and JSON output") {
  std::string out;
  CHECK(run_cli("group --spec " + spec_path("pf5.json"), &out) == 0);
  CHECK(out.find("|Q| (feasible)    : 240") != std::string::npos);

  // Usage error: missing subcommand.
  CHECK(run_cli("", &out) == 1);
  // Usage error: missing required --spec.
  CHECK(run_cli("group", &out) == 1);
  // Missing file is a validation error.
  CHECK(run_cli("group --spec /nonexistent.json", &out) == 2);

  // Invalid spec content: cross-class word.
  const fs::path bad = fs::temp_directory_path() / "nrmsym_bad_spec.json";
  {
    auto doc = nlohmann::json::parse(R"json({
      "schema_version": 1,
      "frame": {"classes": [
        {"label": "F", "count": 5, "spin": "1/2", "statistics": "fermion"},
        {"label": "P", "count": 1, "spin": "1/2", "statistics": "fermion"}],
        "allow_inversion": true},
      "point_group": ["(1 6)"]
    })json");
    std::ofstream f(bad);
    f << doc.dump(2);
  }
  CHECK(run_cli("group --spec " + bad.string(), &out) == 2);
  CHECK(out.find("validation error") != std::string::npos);

  // Malformed JSON reports line/column.
  const fs::path broken = fs::temp_directory_path() / "nrmsym_broken_spec.json";
  {
    std::ofstream f(broken);
    f << "{\n  \"schema_version\": 1,\n  oops\n}\n";
  }
  CHECK(run_cli("group --spec " + broken.string(), &out) == 2);
  CHECK(out.find("line 3") != std::string::npos);

  // --json writes a parseable structured report.
  const fs::path jout = fs::temp_directory_path() / "nrmsym_report.json";
  fs::remove(jout);
  CHECK(run_cli("split --spec " + spec_path("nh3.json") + " --json " + jout.string(), &out) ==
        0);
  std::ifstream jin(jout);
  REQUIRE(jin.good());
  const auto doc = nlohmann::json::parse(jin);
  CHECK(doc["command"] == "split");
  CHECK(doc["total_levels"] == 2);

  // Option overrides pass through.
  CHECK(run_cli("weights --spec " + spec_path("nh3.json") +
                    " --include-spectator-spins false --json " + jout.string(),
                &out) == 0);
  std::ifstream jin2(jout);
  const auto doc2 = nlohmann::json::parse(jin2);
  CHECK(doc2["spin_dim"] == 8);

  // A huge cluster tolerance merges the doublet; the match survives because
  // both predicted levels are assigned to the single cluster.
  CHECK(run_cli("spectrum --spec " + spec_path("nh3.json") + " --tol 1.0 --json " +
                    jout.string(),
                &out) == 0);
  std::ifstream jin3(jout);
  const auto doc3 = nlohmann::json::parse(jin3);
  CHECK(doc3["clusters"].size() == 1);
  CHECK(doc3["clusters"][0]["degeneracy"] == 2);
  CHECK(doc3["match"] == true);
  CHECK(doc3["multiset_match"] == false);
}
