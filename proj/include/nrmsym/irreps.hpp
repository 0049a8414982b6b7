#ifndef NRMSYM_IRREPS_HPP
#define NRMSYM_IRREPS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "nrmsym/chartab.hpp"
#include "nrmsym/group.hpp"
#include "nrmsym/matrix.hpp"

namespace nrmsym {

// Explicit unitary matrices of one irreducible representation: one d x d
// matrix per group element, satisfying matrix(a∘b) = matrix(a) matrix(b).
struct IrrepMatrices {
  GroupPtr group;
  std::string label;
  int dim = 0;
  std::vector<Matrix> matrices;  // indexed by element

  const Matrix& matrix(int element) const { return matrices[element]; }
};

// Extracts one irreducible block of the regular representation: project with
// the character projector, split off a single copy by diagonalizing a random
// Hermitian commutant element, and read the representation in that basis.
// Deterministic for a fixed seed; only intended for small groups (order <= 64).
IrrepMatrices irrep_matrices(const GroupPtr& g, const std::string& label,
                             const CharacterTable& table, std::uint64_t seed = kDefaultSeed);

}  // namespace nrmsym

#endif
