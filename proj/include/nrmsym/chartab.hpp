#ifndef NRMSYM_CHARTAB_HPP
#define NRMSYM_CHARTAB_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "nrmsym/group.hpp"
#include "nrmsym/matrix.hpp"

namespace nrmsym {

inline constexpr std::uint64_t kDefaultSeed = 0x5eedc0de5eedc0deULL;

// Complex character table of a finite group: one row per irrep, one column
// per conjugacy class. Rows are canonically ordered (dimension first, then
// the character tuple), so irrep_0 is always the trivial representation.
struct CharacterTable {
  GroupPtr group;
  std::vector<std::string> labels;  // "irrep_0", "irrep_1", ...
  Matrix characters;                // irreps x classes
  std::vector<int> dims;            // d_lambda = chi at the identity class

  int num_irreps() const { return static_cast<int>(dims.size()); }
  cplx chi(int irrep, int cls) const { return characters(irrep, cls); }
  cplx chi_element(int irrep, int element) const {
    return characters(irrep, group->class_of(element));
  }
  int irrep_by_label(const std::string& label) const;  // -1 if absent
  // The trivial representation's index (all characters +1).
  int trivial_index() const;
};

using TablePtr = std::shared_ptr<const CharacterTable>;

// Numeric character table by the class-algebra method: simultaneous
// diagonalization of the class-multiplication matrices via a random real
// linear combination. Deterministic for a fixed seed; retries internally
// with fresh coefficients if the combination is degenerate.
TablePtr character_table(const GroupPtr& g, std::uint64_t seed = kDefaultSeed);

}  // namespace nrmsym

#endif
