#include "nrmsym/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "nrmsym/errors.hpp"
#include "nrmsym/spinstats.hpp"
#include "nrmsym/system.hpp"
#include "nrmsym/tunneling.hpp"

namespace nrmsym {

namespace {

using ojson = nlohmann::ordered_json;

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string spin_string(int twice_spin) {
  if (twice_spin % 2 == 0) return std::to_string(twice_spin / 2);
  return std::to_string(twice_spin) + "/2";
}

std::string case_string(Case c) {
  switch (c) {
    case Case::A: return "A";
    case Case::B: return "B";
    default: return "unsupported";
  }
}

std::string display_label(const JobSpec& spec, const std::string& label) {
  const auto it = spec.relabel.find(label);
  return it == spec.relabel.end() ? label : it->second;
}

std::string frame_text(const NucleusFrame& frame) {
  std::ostringstream out;
  bool first = true;
  for (const auto& c : frame.classes()) {
    if (!first) out << ", ";
    first = false;
    out << c.label << " x" << c.count << " (spin " << spin_string(c.twice_spin) << ", "
        << (c.statistics == Statistics::Fermion ? "fermion" : "boson") << ")";
  }
  out << "; inversion " << (frame.allow_inversion() ? "allowed" : "disallowed");
  return out.str();
}

ojson frame_json(const NucleusFrame& frame) {
  ojson j;
  j["classes"] = ojson::array();
  for (const auto& c : frame.classes()) {
    ojson jc;
    jc["label"] = c.label;
    jc["count"] = c.count;
    jc["spin"] = spin_string(c.twice_spin);
    jc["statistics"] = c.statistics == Statistics::Fermion ? "fermion" : "boson";
    j["classes"].push_back(jc);
  }
  j["allow_inversion"] = frame.allow_inversion();
  j["total_slots"] = frame.total_slots();
  return j;
}

std::vector<int> class_sizes(const FiniteGroup& g) {
  std::vector<int> sizes;
  for (const auto& c : g.classes()) sizes.push_back(static_cast<int>(c.size()));
  return sizes;
}

std::string sizes_text(const std::vector<int>& sizes) {
  std::ostringstream out;
  for (size_t i = 0; i < sizes.size(); ++i) out << (i ? " " : "") << sizes[i];
  return out.str();
}

int resolve_gamma(const JobSpec& spec, const CharacterTable& rtable) {
  if (spec.irrep_label) {
    const std::string& want = *spec.irrep_label;
    int idx = rtable.irrep_by_label(want);
    if (idx >= 0) return idx;
    // Allow display names from the relabel map.
    for (const auto& [internal, display] : spec.relabel)
      if (display == want && rtable.irrep_by_label(internal) >= 0)
        return rtable.irrep_by_label(internal);
    throw ValidationError("irrep label '" + want + "' not found in the point-group table");
  }
  if (spec.irrep_characters) {
    const auto& row = *spec.irrep_characters;
    if (static_cast<int>(row.size()) != rtable.characters.cols())
      throw ValidationError("irrep characters: expected " +
                            std::to_string(rtable.characters.cols()) + " class values, got " +
                            std::to_string(row.size()));
    for (int r = 0; r < rtable.num_irreps(); ++r) {
      double diff = 0.0;
      for (int c = 0; c < rtable.characters.cols(); ++c)
        diff = std::max(diff, std::abs(rtable.chi(r, c) - row[c]));
      if (diff <= 1e-6) return r;
    }
    throw ValidationError("irrep characters: no point-group irrep matches the given row");
  }
  throw ValidationError(
      "this command needs an irrep selection ('irrep': {\"label\": ...} or {\"characters\": ...})");
}

struct Assembly {
  MolecularSystem sys;
  int gamma_index = -1;                 // in sys.rtable
  std::optional<IrrepMatrices> gamma;
};

Assembly assemble(const JobSpec& spec, bool need_gamma) {
  Assembly a;
  a.sys = assemble_system(spec.frame, spec.point_group, spec.feasible, spec.seed,
                          spec.group_cap);
  if (classify_case(*a.sys.q) == Case::Unsupported)
    throw NumericalError("feasible group is neither Case A nor Case B");
  if (spec.irrep_label || spec.irrep_characters) {
    a.gamma_index = resolve_gamma(spec, *a.sys.rtable);
    a.gamma = irrep_matrices(a.sys.r, a.sys.rtable->labels[a.gamma_index], *a.sys.rtable,
                             spec.seed);
  } else if (need_gamma) {
    throw ValidationError(
        "this command needs an irrep selection ('irrep': {\"label\": ...} or "
        "{\"characters\": ...})");
  }
  return a;
}

TunnelingModel build_model(const Assembly& a, const JobSpec& spec) {
  std::map<int, Matrix> seeds;
  for (const auto& [word, block] : spec.seed_blocks) {
    const auto idx = a.sys.q->index_of(word);
    if (!idx)
      throw ValidationError("seed coset element '" + word.to_word() +
                            "' is not in the feasible group Q");
    const auto [u, g] = a.sys.dec_r_in_q.factorize(*idx);
    (void)g;
    if (seeds.count(u))
      throw ValidationError("seed_blocks: two blocks identify coset " + std::to_string(u + 1));
    if (block.rows() != a.gamma->dim)
      throw ValidationError("seed block for '" + word.to_word() + "' must be " +
                            std::to_string(a.gamma->dim) + "x" + std::to_string(a.gamma->dim));
    seeds[u] = block;
  }
  return make_model(a.sys.q, a.sys.dec_r_in_q, *a.gamma, spec.e0, std::move(seeds),
                    spec.seed_tol);
}

ojson irrep_json(const JobSpec& spec, const CharacterTable& rtable, int idx, int dim) {
  ojson j;
  j["label"] = rtable.labels[idx];
  j["display"] = display_label(spec, rtable.labels[idx]);
  j["dim"] = dim;
  return j;
}

CommandResult cmd_group(const JobSpec& spec) {
  const bool has_irrep = spec.irrep_label.has_value() || spec.irrep_characters.has_value();
  Assembly a = assemble(spec, false);
  const MolecularSystem& sys = a.sys;

  const int r_order = sys.r->order();
  const int q_order = sys.q->order();
  const int p_order = sys.p->order();
  const int cosets_rq = sys.dec_r_in_q.num_cosets();
  const int cosets_qp = sys.dec_q_in_p.num_cosets();

  std::ostringstream out;
  out << "group report\n";
  out << "  frame             : " << frame_text(*spec.frame) << "\n";
  out << "  |R| (point group) : " << r_order << "\n";
  out << "  |Q| (feasible)    : " << q_order << "\n";
  out << "  |P| (full group)  : " << p_order << "\n";
  out << "  case              : " << case_string(sys.kase) << "\n";
  out << "  cosets of R in Q  : " << cosets_rq << "\n";
  out << "  cosets of Q in P  : " << cosets_qp << "\n";
  out << "  classes of R      : " << sys.r->num_classes() << " (sizes "
      << sizes_text(class_sizes(*sys.r)) << ")\n";
  out << "  classes of Q      : " << sys.q->num_classes() << " (sizes "
      << sizes_text(class_sizes(*sys.q)) << ")\n";
  out << "  classes of P      : " << sys.p->num_classes() << " (sizes "
      << sizes_text(class_sizes(*sys.p)) << ")\n";

  ojson j;
  j["command"] = "group";
  j["schema_version"] = 1;
  j["frame"] = frame_json(*spec.frame);
  j["orders"] = {{"R", r_order}, {"Q", q_order}, {"P", p_order}};
  j["case"] = case_string(sys.kase);
  j["cosets_R_in_Q"] = cosets_rq;
  j["cosets_Q_in_P"] = cosets_qp;
  j["class_sizes"] = {{"R", class_sizes(*sys.r)},
                      {"Q", class_sizes(*sys.q)},
                      {"P", class_sizes(*sys.p)}};

  if (has_irrep && a.gamma_index >= 0) {
    const int d = sys.rtable->dims[a.gamma_index];
    const int induced = d * cosets_rq;
    const long long required = static_cast<long long>(induced) * induced;
    out << "  irrep             : " << display_label(spec, sys.rtable->labels[a.gamma_index])
        << " (dim " << d << ")\n";
    out << "  induced dimension : " << induced << " (= " << d << " x " << cosets_rq << ")\n";
    out << "  irreducible bound : (" << d << " x " << cosets_rq << ")^2 = " << required
        << (required > p_order ? " > " : " <= ") << "|P| = " << p_order << "\n";
    j["irrep"] = irrep_json(spec, *sys.rtable, a.gamma_index, d);
    j["induced_dim"] = induced;
    j["bound"] = {{"required_order", required},
                  {"p_order", p_order},
                  {"exceeds_p", required > p_order}};
  }
  return {out.str(), std::move(j)};
}

CommandResult cmd_split(const JobSpec& spec) {
  Assembly a = assemble(spec, true);
  const MolecularSystem& sys = a.sys;
  const SplittingMultiplicities pred =
      splitting_multiplicities(sys.qtable, sys.dec_r_in_q, *a.gamma);

  std::ostringstream out;
  out << "splitting multiplicities\n";
  out << "  rigid level irrep : " << display_label(spec, a.gamma->label) << " (dim "
      << a.gamma->dim << ")\n";
  out << "  linked cosets     : " << pred.num_cosets << "\n";
  out << "  induced dimension : " << pred.induced_dim() << "\n";
  out << "  irrep          dim  M\n";
  int total_levels = 0;
  for (int lam = 0; lam < sys.qtable->num_irreps(); ++lam) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "  %-14s %3d  %d\n",
                  display_label(spec, sys.qtable->labels[lam]).c_str(),
                  sys.qtable->dims[lam], pred.m[lam]);
    out << buf;
    total_levels += pred.m[lam];
  }
  out << "  total split levels: " << total_levels << "\n";

  ojson j;
  j["command"] = "split";
  j["schema_version"] = 1;
  j["irrep"] = irrep_json(spec, *sys.rtable, a.gamma_index, a.gamma->dim);
  j["num_cosets"] = pred.num_cosets;
  j["induced_dim"] = pred.induced_dim();
  j["multiplicities"] = ojson::array();
  for (int lam = 0; lam < sys.qtable->num_irreps(); ++lam) {
    ojson row;
    row["label"] = sys.qtable->labels[lam];
    row["display"] = display_label(spec, sys.qtable->labels[lam]);
    row["dim"] = sys.qtable->dims[lam];
    row["m"] = pred.m[lam];
    j["multiplicities"].push_back(row);
  }
  j["total_levels"] = total_levels;
  return {out.str(), std::move(j)};
}

CommandResult cmd_spectrum(const JobSpec& spec) {
  Assembly a = assemble(spec, true);
  const MolecularSystem& sys = a.sys;
  const TunnelingModel model = build_model(a, spec);
  const SplittingReport report = splitting_report(model, sys.qtable, spec.cluster_tol);

  std::ostringstream out;
  out << "tunneling spectrum\n";
  out << "  E0                : " << fmt(model.e0) << "\n";
  out << "  matrix dimension  : " << model.dim() << "\n";
  out << "  cluster tolerance : " << fmt(report.cluster_tolerance) << "\n";
  out << "  clusters:\n";
  out << "    #   mean energy           deg  assigned\n";
  for (size_t c = 0; c < report.clusters.size(); ++c) {
    const auto& cl = report.clusters[c];
    char buf[96];
    std::snprintf(buf, sizeof buf, "    %-3zu %-21s %-4d ", c + 1, fmt(cl.mean_energy).c_str(),
                  cl.degeneracy);
    out << buf;
    for (size_t k = 0; k < cl.assigned.size(); ++k) {
      if (k) out << ", ";
      out << display_label(spec, cl.assigned[k].first) << "[mu " << cl.assigned[k].second + 1
          << "]";
    }
    out << "\n";
  }
  out << "  sector levels:\n";
  for (const auto& level : report.sector_levels)
    out << "    " << display_label(spec, sys.qtable->labels[level.lambda]) << " mu "
        << level.mu + 1 << " : E = " << fmt(level.energy) << "\n";
  out << "  residuals         : hermiticity " << fmt(report.hermiticity_residual)
      << ", projection " << fmt(report.projection_displacement) << ", commutant "
      << fmt(report.commutant_residual) << ", cross-sector "
      << fmt(report.cross_sector_residual) << "\n";
  out << "  prediction match  : " << (report.match ? "yes" : "no")
      << " (degeneracy multiset " << (report.multiset_match ? "exact" : "merged") << ")\n";

  ojson j;
  j["command"] = "spectrum";
  j["schema_version"] = 1;
  j["e0"] = model.e0;
  j["dimension"] = model.dim();
  j["cluster_tolerance"] = report.cluster_tolerance;
  j["eigenvalues"] = report.eigenvalues;
  j["clusters"] = ojson::array();
  for (const auto& cl : report.clusters) {
    ojson row;
    row["mean_energy"] = cl.mean_energy;
    row["degeneracy"] = cl.degeneracy;
    row["members"] = cl.members;
    row["assigned"] = ojson::array();
    for (const auto& [label, mu] : cl.assigned)
      row["assigned"].push_back({{"irrep", label}, {"mu", mu + 1}});
    j["clusters"].push_back(row);
  }
  j["sector_levels"] = ojson::array();
  for (const auto& level : report.sector_levels)
    j["sector_levels"].push_back({{"irrep", sys.qtable->labels[level.lambda]},
                                  {"mu", level.mu + 1},
                                  {"energy", level.energy}});
  j["residuals"] = {{"hermiticity", report.hermiticity_residual},
                    {"projection_displacement", report.projection_displacement},
                    {"commutant", report.commutant_residual},
                    {"cross_sector", report.cross_sector_residual}};
  j["match"] = report.match;
  j["multiset_match"] = report.multiset_match;
  return {out.str(), std::move(j)};
}

CommandResult cmd_weights(const JobSpec& spec) {
  Assembly a = assemble(spec, false);
  const MolecularSystem& sys = a.sys;
  const WeightTable table =
      statistical_weights(*sys.qtable, *spec.frame, spec.include_spectator_spins);

  std::ostringstream out;
  out << "nuclear spin statistical weights\n";
  out << "  case              : " << case_string(table.kase) << "\n";
  out << "  spin dimension    : " << table.spin_dim << "\n";
  out << "  spectator spins   : " << (table.include_spectators ? "included" : "excluded")
      << "\n";
  out << "  irrep          dim  m(S+)  m(S-)  weight\n";
  long long sum_plus = 0, sum_minus = 0;
  for (const auto& row : table.rows) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "  %-14s %3d  %5d  %5d  %6d%s\n",
                  display_label(spec, row.label).c_str(), row.dim, row.m_plus, row.m_minus,
                  row.weight, row.missing ? "  (missing level)" : "");
    out << buf;
    sum_plus += static_cast<long long>(row.dim) * row.m_plus;
    sum_minus += static_cast<long long>(row.dim) * row.m_minus;
  }
  out << "  sum rules         : sum d*m(S+) = " << sum_plus << ", sum d*m(S-) = " << sum_minus
      << "\n";

  ojson j;
  j["command"] = "weights";
  j["schema_version"] = 1;
  j["case"] = case_string(table.kase);
  j["spin_dim"] = table.spin_dim;
  j["include_spectator_spins"] = table.include_spectators;
  j["rows"] = ojson::array();
  for (const auto& row : table.rows) {
    ojson r;
    r["label"] = row.label;
    r["display"] = display_label(spec, row.label);
    r["dim"] = row.dim;
    r["m_plus"] = row.m_plus;
    r["m_minus"] = row.m_minus;
    r["weight"] = row.weight;
    r["missing"] = row.missing;
    j["rows"].push_back(r);
  }
  j["sum_rule"] = {{"plus", sum_plus}, {"minus", sum_minus}};
  return {out.str(), std::move(j)};
}

void verify_configuration(const JobSpec& spec, const std::vector<PermInv>& feasible,
                          const std::string& name, std::ostringstream& out, ojson& jconfigs) {
  JobSpec local = spec;
  local.feasible = feasible;
  Assembly a = assemble(local, true);
  const MolecularSystem& sys = a.sys;
  const SplittingMultiplicities pred =
      splitting_multiplicities(sys.qtable, sys.dec_r_in_q, *a.gamma);
  SymmetrizationSetup setup(sys, *a.gamma, spec.include_spectator_spins);

  out << "  configuration " << name << " (|Q| = " << sys.q->order() << ", cosets of Q in P = "
      << sys.dec_q_in_p.num_cosets() << ", model space = " << setup.model_dim() << ")\n";

  ojson jc;
  jc["name"] = name;
  jc["q_order"] = sys.q->order();
  jc["cosets_Q_in_P"] = sys.dec_q_in_p.num_cosets();
  jc["model_dim"] = setup.model_dim();
  jc["results"] = ojson::array();

  for (int lam = 0; lam < sys.qtable->num_irreps(); ++lam) {
    if (pred.m[lam] == 0) continue;
    ojson jr;
    jr["irrep"] = sys.qtable->labels[lam];
    jr["display"] = display_label(spec, sys.qtable->labels[lam]);
    jr["M"] = pred.m[lam];
    try {
      const SymmetrizedStates states = build_symmetrized_states(setup, lam, 0, 0);
      const auto describe = [&](const std::optional<Vec>& v) -> std::pair<std::string, ojson> {
        if (!v) return {"forbidden", ojson{{"status", "forbidden"}}};
        const SpmReport rep = verify_s_pm(setup, *v);
        ojson j{{"status", "ok"},
                {"sign", std::string(1, rep.sign)},
                {"residual", rep.max_residual}};
        return {std::string("sign ") + rep.sign + " residual " + fmt(rep.max_residual), j};
      };
      const auto [text_plus, json_plus] = describe(states.splus);
      const auto [text_minus, json_minus] = describe(states.sminus);
      char buf[224];
      std::snprintf(buf, sizeof buf, "    %-14s M=%d  m+=%d m-=%d   S+: %s   S-: %s\n",
                    display_label(spec, sys.qtable->labels[lam]).c_str(), pred.m[lam],
                    states.m_plus, states.m_minus, text_plus.c_str(), text_minus.c_str());
      out << buf;
      jr["status"] = "ok";
      jr["m_plus"] = states.m_plus;
      jr["m_minus"] = states.m_minus;
      jr["splus"] = json_plus;
      jr["sminus"] = json_minus;
    } catch (const ZeroVector& e) {
      out << "    " << display_label(spec, sys.qtable->labels[lam]) << " M=" << pred.m[lam]
          << "  spin-statistically forbidden\n";
      jr["status"] = "forbidden";
      jr["detail"] = e.what();
    }
    jc["results"].push_back(jr);
  }
  jconfigs.push_back(jc);
}

CommandResult cmd_verify(const JobSpec& spec) {
  std::ostringstream out;
  out << "full-group symmetrization check\n";
  ojson jconfigs = ojson::array();
  verify_configuration(spec, spec.feasible, "non-rigid", out, jconfigs);
  verify_configuration(spec, {}, "rigid", out, jconfigs);

  ojson j;
  j["command"] = "verify";
  j["schema_version"] = 1;
  j["configurations"] = std::move(jconfigs);
  return {out.str(), std::move(j)};
}

}  // namespace

CommandResult run_command(const std::string& command, const JobSpec& spec) {
  if (command == "group") return cmd_group(spec);
  if (command == "split") return cmd_split(spec);
  if (command == "spectrum") return cmd_spectrum(spec);
  if (command == "weights") return cmd_weights(spec);
  if (command == "verify") return cmd_verify(spec);
  throw ValidationError("unknown command '" + command + "'");
}

}  // namespace nrmsym
