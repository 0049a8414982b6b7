#ifndef NRMSYM_SPINSTATS_HPP
#define NRMSYM_SPINSTATS_HPP

#include <optional>
#include <string>
#include <vector>

#include "nrmsym/irreps.hpp"
#include "nrmsym/system.hpp"
#include "nrmsym/tunneling.hpp"

namespace nrmsym {

// Dimension of the nuclear spin space: product of (2I+1)^count over classes.
// Spectator classes (count 1) can be excluded to match conventions that drop
// them; excluded classes contribute a factor of 1.
int spin_space_dim(const NucleusFrame& frame, bool include_spectators = true);

// Trace of the permutation h acting on the spin product basis:
// product over classes of (2I+1)^(number of cycles). Star acts trivially.
double spin_character(const PermInv& h, const NucleusFrame& frame,
                      bool include_spectators = true);

// Multiplicities of the sign-twisted irreps in the nuclear spin space.
// Case A has a single twist (the permutation sign); Case B has one per
// inversion parity.
struct TwistedMultiplicities {
  Case kase = Case::A;
  std::vector<int> m_plus;   // Case A: m(S); Case B: m(S+)
  std::vector<int> m_minus;  // Case B: m(S-); for Case A a copy of m_plus
};

TwistedMultiplicities twisted_multiplicities(const CharacterTable& qtable,
                                             const NucleusFrame& frame,
                                             bool include_spectators = true);

struct WeightRow {
  std::string label;
  int dim = 0;
  int m_plus = 0;
  int m_minus = 0;
  int weight = 0;
  bool missing = false;  // spin-statistically forbidden level
};

struct WeightTable {
  Case kase = Case::A;
  bool include_spectators = true;
  int spin_dim = 0;
  std::vector<WeightRow> rows;
};

WeightTable statistical_weights(const CharacterTable& qtable, const NucleusFrame& frame,
                                bool include_spectators = true);

// The rovib (x) spin model space for building fully symmetrized states:
// the representation of P induced from Γ over the composite coset
// representatives F_t ∘ G_r, tensored with the nuclear spin space.
class SymmetrizationSetup {
 public:
  SymmetrizationSetup(const MolecularSystem& sys, IrrepMatrices gamma,
                      bool include_spectators = true);

  const MolecularSystem& system() const { return *sys_; }
  const IrrepMatrices& gamma() const { return gamma_; }
  int rovib_dim() const { return rovib_.dim(); }
  int spin_dim() const { return spin_dim_; }
  int model_dim() const { return rovib_.dim() * spin_dim_; }
  bool include_spectators() const { return include_spectators_; }

  // D_P(p) (x) U_spin(p) applied to a model-space vector; p is a P index.
  Vec apply(int p_element, const Vec& v) const;

  const InducedRep& rovib_rep() const { return rovib_; }
  // Spin permutation matrix of a P element (dim spin_dim).
  Matrix spin_matrix(int p_element) const;

 private:
  const MolecularSystem* sys_;
  IrrepMatrices gamma_;
  bool include_spectators_;
  InducedRep rovib_;              // of P, over composite representatives
  int spin_dim_ = 1;
  std::vector<int> local_dim_;    // per slot
  std::vector<int> stride_;       // per slot
  std::vector<std::vector<int>> spin_perm_;  // per P element: basis index map

  std::vector<int> spin_permutation(const PermInv& p) const;
};

// Basis vectors transforming exactly as the matrices `tau` inside the
// carrier representation: result[copy][j] with
// carrier[h] v[copy][j] = sum_k tau[h](k, j) v[copy][k].
// Deterministic for a fixed seed.
std::vector<std::vector<Vec>> isotypic_basis(const FiniteGroup& g,
                                             const std::vector<Matrix>& carrier,
                                             const std::vector<Matrix>& tau,
                                             std::uint64_t seed);

struct SymmetrizedStates {
  // Either vector is absent when its paired spin multiplicity does not reach
  // theta; in Case B the two signs pair with different spin twists, so a
  // level can carry S+ states only, S- states only, or both.
  std::optional<Vec> splus;
  std::optional<Vec> sminus;
  int lambda = 0;
  int mu = 0;
  int theta = 0;
  int m_plus = 0;   // spin multiplicity paired with S+
  int m_minus = 0;  // and with S-
};

// The fully symmetrized states for one (lambda, mu, theta): pair the Q-irrep
// basis vectors with the sign-twisted spin basis and sum the products over
// the cosets of Q in P with parity coefficients. Throws ZeroVector when both
// spin multiplicities are absent (a spin-statistically missing level).
SymmetrizedStates build_symmetrized_states(const SymmetrizationSetup& setup, int lambda,
                                           int mu, int theta);

struct SpmReport {
  char sign = '+';
  double max_residual = 0.0;
};

// Applies every element of P and checks the vector picks up exactly the
// permutation parity and a consistent inversion sign.
SpmReport verify_s_pm(const SymmetrizationSetup& setup, const Vec& v);

}  // namespace nrmsym

#endif
