#ifndef NRMSYM_SYSTEM_HPP
#define NRMSYM_SYSTEM_HPP

#include <cstdint>
#include <vector>

#include "nrmsym/chartab.hpp"
#include "nrmsym/group.hpp"

namespace nrmsym {

// The standard group chain for one molecule: point group R inside the
// feasible group Q inside the full permutation-inversion group P, with
// coset decompositions and character tables for R and Q.
struct MolecularSystem {
  FramePtr frame;
  GroupPtr p;
  GroupPtr q;                     // standalone, element order = sorted P indices
  GroupPtr r;                     // standalone, element order = dec_r_in_q positions
  std::vector<int> q_to_p;        // Q element -> P element
  CosetDecomposition dec_r_in_q;  // G_r representatives
  CosetDecomposition dec_q_in_p;  // F_t representatives
  TablePtr qtable;
  TablePtr rtable;
  Case kase = Case::A;            // of Q
  std::uint64_t seed = kDefaultSeed;
};

MolecularSystem assemble_system(const FramePtr& frame, const std::vector<PermInv>& point_group,
                                const std::vector<PermInv>& feasible,
                                std::uint64_t seed = kDefaultSeed,
                                int cap = kDefaultGroupCap);

}  // namespace nrmsym

#endif
