#ifndef NRMSYM_INDUCTION_HPP
#define NRMSYM_INDUCTION_HPP

#include <vector>

#include "nrmsym/chartab.hpp"
#include "nrmsym/group.hpp"
#include "nrmsym/irreps.hpp"

namespace nrmsym {

// Optional reindexing when the decomposition's subgroup positions do not
// match the element order of the group the irrep matrices were built on.
using SubgroupMap = std::vector<int>;

// Character of the representation induced from Γ on the subgroup up to the
// whole group, one value per conjugacy class of dec.group().
std::vector<cplx> induced_character(const CosetDecomposition& dec, const IrrepMatrices& gamma,
                                    const SubgroupMap& sub_to_irrep = {});

// How many times each irrep of the big group appears when a rigid level of
// species Γ is spread over the tunneling-linked configurations.
struct SplittingMultiplicities {
  TablePtr table;           // big group's table
  std::string gamma_label;  // subgroup irrep
  int gamma_dim = 0;
  int num_cosets = 0;
  std::vector<int> m;       // per big-group irrep

  int induced_dim() const { return gamma_dim * num_cosets; }
};

// Multiplicities by the point-group sum formula, cross-checked against the
// induced-character inner product (Frobenius reciprocity). A mismatch throws
// ReciprocityMismatch and indicates a bug, never a user error.
SplittingMultiplicities splitting_multiplicities(const TablePtr& qtable,
                                                 const CosetDecomposition& dec,
                                                 const IrrepMatrices& gamma,
                                                 const SubgroupMap& sub_to_irrep = {});

}  // namespace nrmsym

#endif
