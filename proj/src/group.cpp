#include "nrmsym/group.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

#include "nrmsym/errors.hpp"

namespace nrmsym {

FiniteGroup::FiniteGroup(std::vector<PermInv> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) throw NotASubgroup("group: empty element list");
  if (!elements_[0].is_identity()) throw NotASubgroup("group: element 0 must be the identity");

  const int n = order();
  for (int i = 0; i < n; ++i) {
    index_[{elements_[i].image(), elements_[i].star()}] = i;
    if (elements_[i].star()) ++star_count_;
  }
  if (static_cast<int>(index_.size()) != n)
    throw NotASubgroup("group: duplicate elements in list");

  cayley_.assign(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const PermInv p = compose(elements_[i], elements_[j]);
      const auto it = index_.find({p.image(), p.star()});
      if (it == index_.end())
        throw NotASubgroup("group: element list not closed under composition");
      cayley_[i][j] = it->second;
    }
  }

  inverse_.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (cayley_[i][j] == 0) {
        inverse_[i] = j;
        break;
      }
    }
    if (inverse_[i] < 0) throw NotASubgroup("group: element without inverse");
  }

  class_of_.assign(n, -1);
  for (int x = 0; x < n; ++x) {
    if (class_of_[x] >= 0) continue;
    const int c = static_cast<int>(classes_.size());
    std::set<int> orbit;
    for (int g = 0; g < n; ++g) orbit.insert(conjugate(g, x));
    classes_.emplace_back(orbit.begin(), orbit.end());
    for (int y : classes_.back()) class_of_[y] = c;
  }
}

std::optional<int> FiniteGroup::index_of(const PermInv& p) const {
  const auto it = index_.find({p.image(), p.star()});
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

GroupPtr generate_group(const std::vector<PermInv>& generators, const FramePtr& frame,
                        int cap) {
  if (cap < 1) throw ValidationError("generate_group: cap must be >= 1");
  for (const auto& g : generators)
    if (!g.frame()->same_structure(*frame))
      throw FrameMismatch("generate_group: generator on a different frame");

  std::vector<PermInv> elements{PermInv::identity(frame)};
  std::map<std::pair<std::vector<int>, bool>, int> seen;
  seen[{elements[0].image(), elements[0].star()}] = 0;

  size_t head = 0;
  while (head < elements.size()) {
    const PermInv current = elements[head++];
    for (const auto& gen : generators) {
      PermInv next = compose(current, gen);
      const auto key = std::make_pair(next.image(), next.star());
      if (seen.count(key)) continue;
      if (static_cast<int>(elements.size()) >= cap)
        throw ClosureExceedsCap("generate_group: closure exceeds cap of " +
                                std::to_string(cap));
      seen[key] = static_cast<int>(elements.size());
      elements.push_back(std::move(next));
    }
  }
  return std::make_shared<const FiniteGroup>(std::move(elements));
}

GroupPtr full_pi_group(const FramePtr& frame, int cap) {
  unsigned long long order = frame->allow_inversion() ? 2 : 1;
  for (const auto& c : frame->classes()) {
    for (int k = 2; k <= c.count; ++k) {
      order *= static_cast<unsigned long long>(k);
      if (order > static_cast<unsigned long long>(cap))
        throw ClosureExceedsCap("full_pi_group: order exceeds cap of " + std::to_string(cap));
    }
  }
  if (order > static_cast<unsigned long long>(cap))
    throw ClosureExceedsCap("full_pi_group: order exceeds cap of " + std::to_string(cap));

  // Enumerate per-class permutations lexicographically and take the direct
  // product; the all-identity, star-free element comes first.
  std::vector<std::vector<std::vector<int>>> class_perms;
  for (size_t c = 0; c < frame->classes().size(); ++c) {
    auto [first, last] = frame->slot_range(static_cast<int>(c));
    std::vector<int> slots(last - first);
    std::iota(slots.begin(), slots.end(), first);
    std::vector<std::vector<int>> perms;
    std::vector<int> p = slots;
    do {
      perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    class_perms.push_back(std::move(perms));
  }

  std::vector<PermInv> elements;
  const int stars = frame->allow_inversion() ? 2 : 1;
  for (int star = 0; star < stars; ++star) {
    std::vector<size_t> idx(class_perms.size(), 0);
    while (true) {
      std::vector<int> image(frame->total_slots());
      for (size_t c = 0; c < class_perms.size(); ++c) {
        auto [first, last] = frame->slot_range(static_cast<int>(c));
        for (int k = first; k < last; ++k) image[k] = class_perms[c][idx[c]][k - first];
      }
      elements.emplace_back(frame, std::move(image), star != 0);
      // Odometer over classes, last class fastest.
      size_t c = class_perms.size();
      while (c > 0) {
        --c;
        if (++idx[c] < class_perms[c].size()) break;
        idx[c] = 0;
        if (c == 0) goto next_star;
      }
    }
  next_star:;
  }
  return std::make_shared<const FiniteGroup>(std::move(elements));
}

Case classify_case(const FiniteGroup& q) {
  if (q.star_count() == 0) return Case::A;
  if (2 * q.star_count() == q.order()) return Case::B;
  return Case::Unsupported;
}

CosetDecomposition::CosetDecomposition(GroupPtr group, std::vector<int> subgroup_indices,
                                       std::vector<int> representatives,
                                       std::vector<std::pair<int, int>> membership)
    : group_(std::move(group)),
      subgroup_(std::move(subgroup_indices)),
      representatives_(std::move(representatives)),
      membership_(std::move(membership)) {}

namespace {

void check_subgroup(const FiniteGroup& g, const std::vector<int>& sub) {
  if (sub.empty() || sub[0] != 0)
    throw NotASubgroup("coset_decomposition: subgroup must contain the identity");
  std::vector<char> in(g.order(), 0);
  for (int s : sub) {
    if (s < 0 || s >= g.order()) throw NotASubgroup("coset_decomposition: bad element index");
    in[s] = 1;
  }
  for (int a : sub) {
    if (!in[g.inverse(a)]) throw NotASubgroup("coset_decomposition: set not inverse-closed");
    for (int b : sub)
      if (!in[g.product(a, b)])
        throw NotASubgroup("coset_decomposition: set not closed under composition");
  }
  if (g.order() % static_cast<int>(sub.size()) != 0)
    throw NotASubgroup("coset_decomposition: subgroup order does not divide group order");
}

}  // namespace

CosetDecomposition coset_decomposition(const GroupPtr& g, std::vector<int> subgroup_indices) {
  std::sort(subgroup_indices.begin(), subgroup_indices.end());
  check_subgroup(*g, subgroup_indices);

  const int n = g->order();
  std::vector<std::pair<int, int>> membership(n, {-1, -1});
  std::vector<int> reps;
  for (int q = 0; q < n; ++q) {
    if (membership[q].first >= 0) continue;
    const int u = static_cast<int>(reps.size());
    reps.push_back(q);
    for (size_t pos = 0; pos < subgroup_indices.size(); ++pos) {
      const int member = g->product(q, subgroup_indices[pos]);
      if (membership[member].first >= 0)
        throw NotASubgroup("coset_decomposition: cosets overlap");
      membership[member] = {u, static_cast<int>(pos)};
    }
  }
  return CosetDecomposition(g, std::move(subgroup_indices), std::move(reps),
                            std::move(membership));
}

CosetDecomposition coset_decomposition(const GroupPtr& g, std::vector<int> subgroup_indices,
                                       const std::vector<int>& representatives) {
  std::sort(subgroup_indices.begin(), subgroup_indices.end());
  check_subgroup(*g, subgroup_indices);
  if (representatives.empty() || representatives[0] != 0)
    throw ValidationError("coset_decomposition: first representative must be the identity");
  if (representatives.size() * subgroup_indices.size() != static_cast<size_t>(g->order()))
    throw ValidationError("coset_decomposition: representative count must be the coset count");

  const int n = g->order();
  std::vector<std::pair<int, int>> membership(n, {-1, -1});
  for (size_t u = 0; u < representatives.size(); ++u) {
    for (size_t pos = 0; pos < subgroup_indices.size(); ++pos) {
      const int member = g->product(representatives[u], subgroup_indices[pos]);
      if (membership[member].first >= 0)
        throw ValidationError("coset_decomposition: representatives do not hit distinct cosets");
      membership[member] = {static_cast<int>(u), static_cast<int>(pos)};
    }
  }
  return CosetDecomposition(g, std::move(subgroup_indices), representatives,
                            std::move(membership));
}

GroupPtr subgroup_as_group(const FiniteGroup& g, const std::vector<int>& subgroup_indices) {
  std::vector<PermInv> elements;
  elements.reserve(subgroup_indices.size());
  for (int i : subgroup_indices) elements.push_back(g.element(i));
  return std::make_shared<const FiniteGroup>(std::move(elements));
}

}  // namespace nrmsym
