#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nrmsym/errors.hpp"
#include "nrmsym/jobspec.hpp"
#include "nrmsym/runner.hpp"

namespace {

struct Options {
  std::string spec_path;
  std::string json_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  double tol = 0.0;
  bool tol_set = false;
  bool spectators = true;
  bool spectators_set = false;
};

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--spec", opt.spec_path, "path to the job spec JSON file")->required();
  cmd->add_option("--json", opt.json_path, "write the structured report to this file");
  cmd->add_option("--seed", opt.seed, "override the random seed")
      ->each([&](const std::string&) { opt.seed_set = true; });
  cmd->add_option("--tol", opt.tol, "override the cluster tolerance")
      ->each([&](const std::string&) { opt.tol_set = true; });
  cmd->add_option("--include-spectator-spins", opt.spectators,
                  "include single-nucleus classes in the spin space (true/false)")
      ->each([&](const std::string&) { opt.spectators_set = true; });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nrmsym: permutation-inversion symmetry analysis for non-rigid molecules"};
  app.require_subcommand(1);

  Options opt;
  const char* commands[] = {"group", "split", "spectrum", "weights", "verify"};
  const char* blurbs[] = {
      "group orders, case, cosets and conjugacy classes",
      "splitting multiplicities of a rigid level over the feasible group",
      "build and diagonalize the tunneling Hamiltonian",
      "nuclear spin statistical weights",
      "construct and check fully symmetrized states",
  };
  for (int i = 0; i < 5; ++i) add_common(app.add_subcommand(commands[i], blurbs[i]), opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    nrmsym::JobSpec spec = nrmsym::parse_spec(opt.spec_path);
    if (opt.seed_set) spec.seed = opt.seed;
    if (opt.tol_set) spec.cluster_tol = opt.tol;
    if (opt.spectators_set) spec.include_spectator_spins = opt.spectators;

    const std::string command = app.get_subcommands().front()->get_name();
    const nrmsym::CommandResult result = nrmsym::run_command(command, spec);
    std::cout << result.text;
    if (!opt.json_path.empty()) {
      std::ofstream out(opt.json_path, std::ios::binary);
      if (!out) {
        std::cerr << "error: cannot write '" << opt.json_path << "'\n";
        return 1;
      }
      out << result.json.dump(2) << "\n";
    }
    return 0;
  } catch (const nrmsym::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const nrmsym::NumericalError& e) {
    std::cerr << "numerical assertion failed: " << e.what() << "\n";
    return 3;
  } catch (const nrmsym::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
