#include "nrmsym/system.hpp"

#include <algorithm>

#include "nrmsym/errors.hpp"

namespace nrmsym {

MolecularSystem assemble_system(const FramePtr& frame, const std::vector<PermInv>& point_group,
                                const std::vector<PermInv>& feasible, std::uint64_t seed,
                                int cap) {
  GroupPtr p = full_pi_group(frame, cap);

  std::vector<PermInv> q_gens = point_group;
  q_gens.insert(q_gens.end(), feasible.begin(), feasible.end());
  GroupPtr q_generated = generate_group(q_gens, frame, cap);

  // Re-anchor Q as a subgroup of P so its elements carry P indices.
  std::vector<int> q_in_p;
  for (const auto& e : q_generated->elements()) {
    const auto idx = p->index_of(e);
    if (!idx) throw ValidationError("assemble_system: feasible element not inside P");
    q_in_p.push_back(*idx);
  }
  std::sort(q_in_p.begin(), q_in_p.end());
  GroupPtr q = subgroup_as_group(*p, q_in_p);

  GroupPtr r_generated = generate_group(point_group, frame, cap);
  std::vector<int> r_in_q;
  for (const auto& e : r_generated->elements()) {
    const auto idx = q->index_of(e);
    if (!idx) throw ValidationError("assemble_system: point-group element escaped Q");
    r_in_q.push_back(*idx);
  }

  MolecularSystem sys;
  sys.frame = frame;
  sys.p = p;
  sys.q = q;
  sys.q_to_p = q_in_p;
  sys.dec_r_in_q = coset_decomposition(q, r_in_q);
  sys.r = subgroup_as_group(*q, sys.dec_r_in_q.subgroup());
  sys.dec_q_in_p = coset_decomposition(p, q_in_p);
  sys.qtable = character_table(q, seed);
  sys.rtable = character_table(sys.r, seed);
  sys.kase = classify_case(*q);
  sys.seed = seed;
  return sys;
}

}  // namespace nrmsym
