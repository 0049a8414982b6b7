#ifndef NRMSYM_GROUP_HPP
#define NRMSYM_GROUP_HPP

#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "nrmsym/perminv.hpp"

namespace nrmsym {

inline constexpr int kDefaultGroupCap = 1024;

// An explicit finite group of permutation-inversions: element list with the
// identity at index 0, full Cayley table, inverses, conjugacy classes.
class FiniteGroup {
 public:
  // `elements` must be closed under composition and contain the identity
  // first; throws NotASubgroup otherwise.
  explicit FiniteGroup(std::vector<PermInv> elements);

  int order() const { return static_cast<int>(elements_.size()); }
  const PermInv& element(int i) const { return elements_[i]; }
  const std::vector<PermInv>& elements() const { return elements_; }

  int product(int i, int j) const { return cayley_[i][j]; }  // element i ∘ element j
  int inverse(int i) const { return inverse_[i]; }
  int conjugate(int g, int x) const { return cayley_[cayley_[g][x]][inverse_[g]]; }

  const std::vector<std::vector<int>>& classes() const { return classes_; }
  int class_of(int i) const { return class_of_[i]; }
  int num_classes() const { return static_cast<int>(classes_.size()); }

  std::optional<int> index_of(const PermInv& p) const;
  const FramePtr& frame() const { return elements_[0].frame(); }

  int star_count() const { return star_count_; }

 private:
  std::vector<PermInv> elements_;
  std::vector<std::vector<int>> cayley_;
  std::vector<int> inverse_;
  std::vector<std::vector<int>> classes_;
  std::vector<int> class_of_;
  std::map<std::pair<std::vector<int>, bool>, int> index_;
  int star_count_ = 0;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

// Closure of {identity} ∪ generators, breadth-first from the identity with
// generators applied in the given order. Throws ClosureExceedsCap if the
// closure grows past `cap`.
GroupPtr generate_group(const std::vector<PermInv>& generators, const FramePtr& frame,
                        int cap = kDefaultGroupCap);

// The full permutation-inversion group P: the direct product of the symmetric
// groups on each nucleus class, times {E, E*} when the frame allows inversion.
GroupPtr full_pi_group(const FramePtr& frame, int cap = kDefaultGroupCap);

enum class Case { A, B, Unsupported };

// Case A: no starred elements. Case B: exactly half starred.
Case classify_case(const FiniteGroup& q);

// Left-coset decomposition of a group by a subgroup: every element q has a
// unique factorization q = representatives[u] ∘ subgroup[g].
class CosetDecomposition {
 public:
  CosetDecomposition() = default;
  CosetDecomposition(GroupPtr group, std::vector<int> subgroup_indices,
                     std::vector<int> representatives,
                     std::vector<std::pair<int, int>> membership);

  const GroupPtr& group() const { return group_; }
  const std::vector<int>& subgroup() const { return subgroup_; }
  const std::vector<int>& representatives() const { return representatives_; }
  int num_cosets() const { return static_cast<int>(representatives_.size()); }
  int subgroup_order() const { return static_cast<int>(subgroup_.size()); }

  // (representative position u, subgroup position g) with q = G_u ∘ R(g).
  std::pair<int, int> factorize(int q) const { return membership_[q]; }

 private:
  GroupPtr group_;
  std::vector<int> subgroup_;
  std::vector<int> representatives_;
  std::vector<std::pair<int, int>> membership_;
};

// Representatives chosen as the smallest element index not yet assigned to a
// coset, so the identity always represents the subgroup itself.
CosetDecomposition coset_decomposition(const GroupPtr& g, std::vector<int> subgroup_indices);

// Same, with caller-chosen representatives (one per coset, identity first).
CosetDecomposition coset_decomposition(const GroupPtr& g, std::vector<int> subgroup_indices,
                                       const std::vector<int>& representatives);

// The subgroup as a standalone FiniteGroup whose element order matches the
// decomposition's subgroup positions.
GroupPtr subgroup_as_group(const FiniteGroup& g, const std::vector<int>& subgroup_indices);

}  // namespace nrmsym

#endif
