#ifndef NRMSYM_TESTS_HELPERS_HPP
#define NRMSYM_TESTS_HELPERS_HPP

#include <algorithm>
#include <random>
#include <vector>

#include "nrmsym/group.hpp"
#include "nrmsym/matrix.hpp"
#include "nrmsym/perminv.hpp"

namespace nrmsym::testing {

// Three equivalent spin-1/2 fermions, inversion allowed: the ammonia-style
// hydrogen frame. |P| = 12.
inline FramePtr h3_frame(bool allow_inversion = true) {
  return make_frame({{"H", 3, 1, Statistics::Fermion}}, allow_inversion);
}

// H3 plus a single spin-1/2 heavy nucleus (slot 4).
inline FramePtr h3x_frame() {
  return make_frame({{"H", 3, 1, Statistics::Fermion}, {"X", 1, 1, Statistics::Fermion}}, true);
}

// Five equivalent F plus one P nucleus, all spin 1/2. |P| = 240.
inline FramePtr pf5_frame() {
  return make_frame({{"F", 5, 1, Statistics::Fermion}, {"P", 1, 1, Statistics::Fermion}}, true);
}

// Four equivalent spin-1/2 nuclei.
inline FramePtr h4_frame(bool allow_inversion = false) {
  return make_frame({{"H", 4, 1, Statistics::Fermion}}, allow_inversion);
}

// The C3v-like realization on H3: 3-cycle plus a starred transposition.
// Closure has order 6 with three starred elements.
inline std::vector<PermInv> c3v_generators(const FramePtr& f) {
  return {PermInv::from_cycles(f, {{0, 1, 2}}, false), PermInv::from_cycles(f, {{0, 1}}, true)};
}

// Pure-permutation S3 realization on H3 (Case A).
inline std::vector<PermInv> s3_generators(const FramePtr& f) {
  return {PermInv::from_cycles(f, {{0, 1, 2}}, false), PermInv::from_cycles(f, {{0, 1}}, false)};
}

// D3h-like order-12 realization on the PF5 frame: equatorial F are slots
// 1..3, axial F are slots 4..5, P is slot 6 (1-based).
inline std::vector<PermInv> pf5_point_group(const FramePtr& f) {
  return {PermInv::from_cycles(f, {{0, 1, 2}}, false),
          PermInv::from_cycles(f, {{1, 2}, {3, 4}}, false),
          PermInv::from_cycles(f, {{3, 4}}, true)};
}

// Berry-style exchanges that make every F permutation feasible.
inline std::vector<PermInv> pf5_feasible(const FramePtr& f) {
  return {PermInv::from_cycles(f, {{1, 3}, {2, 4}}, false),
          PermInv::from_cycles(f, {{3, 4}}, false)};
}

inline PermInv random_perminv(const FramePtr& frame, std::mt19937_64& rng) {
  std::vector<int> image(frame->total_slots());
  for (size_t c = 0; c < frame->classes().size(); ++c) {
    auto [first, last] = frame->slot_range(static_cast<int>(c));
    std::vector<int> slots(last - first);
    for (int k = first; k < last; ++k) slots[k - first] = k;
    std::shuffle(slots.begin(), slots.end(), rng);
    for (int k = first; k < last; ++k) image[k] = slots[k - first];
  }
  const bool star = frame->allow_inversion() && (rng() & 1);
  return PermInv(frame, std::move(image), star);
}

inline Matrix random_hermitian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cplx(gauss(rng), gauss(rng));
  return (m + m.adjoint()) * cplx(0.5);
}

}  // namespace nrmsym::testing

#endif
