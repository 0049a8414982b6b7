#include "nrmsym/jobspec.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nrmsym/errors.hpp"

namespace nrmsym {

namespace {

int parse_twice_spin(const nlohmann::json& v, const std::string& label) {
  double spin = -1.0;
  if (v.is_number()) {
    spin = v.get<double>();
  } else if (v.is_string()) {
    // "1/2", "3/2", "0", "1"
    const std::string s = v.get<std::string>();
    const auto slash = s.find('/');
    try {
      if (slash == std::string::npos) {
        spin = std::stod(s);
      } else {
        spin = std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
      }
    } catch (const std::exception&) {
      throw ValidationError("frame: cannot parse spin '" + s + "' for class " + label);
    }
  } else {
    throw ValidationError("frame: spin must be a number or a string for class " + label);
  }
  const double twice = 2.0 * spin;
  if (twice < 0 || std::abs(twice - std::round(twice)) > 1e-9)
    throw ValidationError("frame: spin must be a nonnegative half-integer for class " + label);
  return static_cast<int>(std::llround(twice));
}

cplx parse_complex(const nlohmann::json& v, const char* what) {
  if (v.is_number()) return cplx(v.get<double>(), 0.0);
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return cplx(v[0].get<double>(), v[1].get<double>());
  throw ValidationError(std::string(what) + ": complex values must be numbers or [re, im]");
}

Matrix parse_block(const nlohmann::json& v) {
  if (!v.is_array() || v.empty())
    throw ValidationError("seed_blocks: block must be a non-empty matrix");
  const int rows = static_cast<int>(v.size());
  Matrix m;
  for (int i = 0; i < rows; ++i) {
    const auto& row = v[i];
    if (!row.is_array() || static_cast<int>(row.size()) != rows)
      throw ValidationError("seed_blocks: block must be square");
    if (i == 0) m = Matrix(rows, rows);
    for (int j = 0; j < rows; ++j) m(i, j) = parse_complex(row[j], "seed_blocks");
  }
  return m;
}

}  // namespace

PermInv parse_word(const std::string& word, const FramePtr& frame) {
  size_t pos = 0;
  const auto skip_spaces = [&] {
    while (pos < word.size() && std::isspace(static_cast<unsigned char>(word[pos]))) ++pos;
  };
  const auto fail = [&](const std::string& msg) -> ParseError {
    return ParseError("word '" + word + "': " + msg, 1, static_cast<int>(pos) + 1);
  };

  std::vector<std::vector<int>> cycles;
  bool star = false;
  skip_spaces();
  if (pos < word.size() && (word[pos] == 'E' || word[pos] == 'e')) ++pos;
  while (true) {
    skip_spaces();
    if (pos >= word.size()) break;
    if (word[pos] == '*') {
      if (star) throw fail("duplicate '*'");
      star = true;
      ++pos;
      continue;
    }
    if (word[pos] != '(') throw fail("expected '(' or '*'");
    ++pos;
    std::vector<int> cycle;
    while (true) {
      skip_spaces();
      if (pos >= word.size()) throw fail("unterminated cycle");
      if (word[pos] == ')') {
        ++pos;
        break;
      }
      if (word[pos] == ',') {
        ++pos;
        continue;
      }
      if (!std::isdigit(static_cast<unsigned char>(word[pos]))) throw fail("expected a slot number");
      int value = 0;
      while (pos < word.size() && std::isdigit(static_cast<unsigned char>(word[pos]))) {
        value = value * 10 + (word[pos] - '0');
        ++pos;
      }
      if (value < 1 || value > frame->total_slots())
        throw fail("slot " + std::to_string(value) + " out of range 1.." +
                   std::to_string(frame->total_slots()));
      cycle.push_back(value - 1);  // to 0-based
    }
    if (cycle.size() < 2) throw fail("cycles need at least two slots");
    cycles.push_back(std::move(cycle));
  }
  skip_spaces();
  if (pos != word.size()) throw fail("trailing characters");
  try {
    return PermInv::from_cycles(frame, cycles, star);
  } catch (const ValidationError& e) {
    throw ValidationError("word '" + word + "': " + e.what());
  }
}

JobSpec parse_spec_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ValidationError("spec: top level must be an object");
  if (!doc.contains("schema_version") || !doc["schema_version"].is_number_integer() ||
      doc["schema_version"].get<int>() != 1)
    throw ValidationError("spec: schema_version must be the integer 1");
  if (!doc.contains("frame") || !doc["frame"].is_object())
    throw ValidationError("spec: missing frame object");

  const auto& jframe = doc["frame"];
  if (!jframe.contains("classes") || !jframe["classes"].is_array() || jframe["classes"].empty())
    throw ValidationError("frame: classes must be a non-empty array");
  std::vector<NucleusClass> classes;
  for (const auto& jc : jframe["classes"]) {
    NucleusClass c;
    c.label = jc.value("label", std::string("?"));
    if (!jc.contains("count") || !jc["count"].is_number_integer())
      throw ValidationError("frame: class '" + c.label + "' needs an integer count");
    c.count = jc["count"].get<int>();
    if (!jc.contains("spin")) throw ValidationError("frame: class '" + c.label + "' needs a spin");
    c.twice_spin = parse_twice_spin(jc["spin"], c.label);
    const std::string stats = jc.value("statistics", std::string());
    if (stats == "fermion")
      c.statistics = Statistics::Fermion;
    else if (stats == "boson")
      c.statistics = Statistics::Boson;
    else
      throw ValidationError("frame: class '" + c.label +
                            "' statistics must be 'fermion' or 'boson'");
    classes.push_back(std::move(c));
  }
  const bool allow_inversion = jframe.value("allow_inversion", true);

  JobSpec spec;
  spec.frame = make_frame(std::move(classes), allow_inversion);

  const auto parse_words = [&](const char* key) {
    std::vector<PermInv> out;
    if (!doc.contains(key)) return out;
    if (!doc[key].is_array()) throw ValidationError(std::string(key) + " must be an array");
    for (const auto& w : doc[key]) {
      if (!w.is_string()) throw ValidationError(std::string(key) + ": words must be strings");
      out.push_back(parse_word(w.get<std::string>(), spec.frame));
    }
    return out;
  };
  spec.point_group = parse_words("point_group");
  spec.feasible = parse_words("feasible");
  if (spec.point_group.empty())
    throw ValidationError("spec: point_group must list at least one generator word");

  if (doc.contains("irrep")) {
    const auto& ji = doc["irrep"];
    if (ji.contains("label") && ji["label"].is_string()) {
      spec.irrep_label = ji["label"].get<std::string>();
    } else if (ji.contains("characters") && ji["characters"].is_array()) {
      std::vector<cplx> row;
      for (const auto& v : ji["characters"]) row.push_back(parse_complex(v, "irrep"));
      spec.irrep_characters = std::move(row);
    } else {
      throw ValidationError("irrep: need a 'label' string or a 'characters' array");
    }
  }

  spec.e0 = doc.value("e0", 0.0);

  if (doc.contains("seed_blocks")) {
    if (!doc["seed_blocks"].is_array()) throw ValidationError("seed_blocks must be an array");
    for (const auto& js : doc["seed_blocks"]) {
      if (!js.is_object() || !js.contains("coset") || !js["coset"].is_string() ||
          !js.contains("block"))
        throw ValidationError("seed_blocks: entries need a 'coset' word and a 'block' matrix");
      spec.seed_blocks.emplace_back(parse_word(js["coset"].get<std::string>(), spec.frame),
                                    parse_block(js["block"]));
    }
  }

  if (doc.contains("options")) {
    const auto& jo = doc["options"];
    if (!jo.is_object()) throw ValidationError("options must be an object");
    if (jo.contains("seed")) spec.seed = jo["seed"].get<std::uint64_t>();
    if (jo.contains("cluster_tol")) spec.cluster_tol = jo["cluster_tol"].get<double>();
    if (jo.contains("seed_tol")) spec.seed_tol = jo["seed_tol"].get<double>();
    if (jo.contains("group_cap")) spec.group_cap = jo["group_cap"].get<int>();
    if (jo.contains("include_spectator_spins"))
      spec.include_spectator_spins = jo["include_spectator_spins"].get<bool>();
    if (jo.contains("relabel")) {
      if (!jo["relabel"].is_object()) throw ValidationError("options.relabel must be an object");
      for (const auto& [k, v] : jo["relabel"].items()) {
        if (!v.is_string()) throw ValidationError("options.relabel values must be strings");
        spec.relabel[k] = v.get<std::string>();
      }
    }
  }
  return spec;
}

JobSpec parse_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open spec file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // Convert the byte offset into a line/column pair.
    int line = 1, column = 1;
    for (size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(std::string("spec JSON: ") + e.what(), line, column);
  }
  return parse_spec_json(doc);
}

}  // namespace nrmsym
