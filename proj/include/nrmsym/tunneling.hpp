#ifndef NRMSYM_TUNNELING_HPP
#define NRMSYM_TUNNELING_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nrmsym/chartab.hpp"
#include "nrmsym/group.hpp"
#include "nrmsym/induction.hpp"
#include "nrmsym/irreps.hpp"
#include "nrmsym/matrix.hpp"

namespace nrmsym {

// The representation of dec.group() carried by the configuration basis
// {G_r |Γi>}, with basis index (r outer, i inner).
class InducedRep {
 public:
  InducedRep(CosetDecomposition dec, IrrepMatrices gamma, SubgroupMap sub_to_irrep = {});

  int dim() const { return gamma_.dim * dec_.num_cosets(); }
  const CosetDecomposition& dec() const { return dec_; }
  const IrrepMatrices& gamma() const { return gamma_; }
  const FiniteGroup& group() const { return *dec_.group(); }

  Matrix matrix(int h) const;  // D(h)
  // All D(h), cached on first use.
  const std::vector<Matrix>& all() const;

 private:
  CosetDecomposition dec_;
  IrrepMatrices gamma_;
  SubgroupMap sub_to_irrep_;
  mutable std::vector<Matrix> cache_;
};

// Everything needed to build the non-rigid Hamiltonian: the feasible group Q,
// the point-group cosets inside it, the rigid level's irrep Γ, the rigid
// energy E0, and one seed tunneling block per directly linked coset.
struct TunnelingModel {
  GroupPtr q;
  CosetDecomposition dec;            // point group R inside Q
  IrrepMatrices gamma;               // irrep of R (element order = subgroup positions)
  SubgroupMap sub_to_irrep;          // optional reindexing, usually empty
  double e0 = 0.0;
  std::map<int, Matrix> seeds;       // coset position u -> d x d block T_u
  double seed_tolerance = 1e-6;      // relative Hermiticity threshold

  int dim() const { return gamma.dim * dec.num_cosets(); }
};

// Validates block shapes and the u = 0 convention (T_0 = E0 * I).
TunnelingModel make_model(GroupPtr q, CosetDecomposition dec, IrrepMatrices gamma, double e0,
                          std::map<int, Matrix> seeds, double seed_tolerance = 1e-6);

// E0 times the identity: identical diagonal blocks, no configuration mixing.
Matrix build_h_r(const TunnelingModel& model);

struct HamiltonianBuild {
  Matrix h;
  double hermiticity_residual = 0.0;     // worst relative asymmetry of the raw fill
  double projection_displacement = 0.0;  // how far symmetrization moved the raw fill
  double commutant_residual = 0.0;       // max ||D(h) H - H D(h)|| after projection
};

// Three stages: propagate the seed blocks through the group relations,
// Hermitize (recording the asymmetry of doubly determined entries), then
// average over the group so the result commutes with every D(h).
HamiltonianBuild build_h_nrm(const TunnelingModel& model);

struct LevelCluster {
  double mean_energy = 0.0;
  int degeneracy = 0;
  std::vector<double> members;
  // (irrep label, mu) of the sector levels assigned to this cluster.
  std::vector<std::pair<std::string, int>> assigned;
};

// Greedy single-linkage: consecutive eigenvalues closer than tol share a cluster.
std::vector<LevelCluster> cluster_levels(const std::vector<double>& eigenvalues, double tol);

// P_lambda = (d_lambda / |Q|) sum_h conj(chi_lambda(h)) D(h).
Matrix character_projector(int lambda, const CharacterTable& qtable,
                           const std::vector<Matrix>& d_matrices);

struct SectorLevel {
  int lambda = 0;   // irrep index in the table
  int mu = 0;       // which copy, 0-based
  double energy = 0.0;
};

struct SectorResult {
  std::vector<SectorLevel> levels;
  double cross_sector_residual = 0.0;  // max |<lambda block| H |nu block>|
  double completeness_residual = 0.0;  // sum_lambda P_lambda vs identity
};

// Diagonalizes H restricted to each irrep sector; eigenvalues must arrive in
// multiplets of d_lambda (throws SectorDegeneracyMismatch otherwise).
SectorResult sector_energies(const Matrix& h, const CharacterTable& qtable,
                             const SplittingMultiplicities& pred,
                             const std::vector<Matrix>& d_matrices, double tol);

struct SplittingReport {
  SplittingMultiplicities predicted;
  std::vector<LevelCluster> clusters;
  std::vector<SectorLevel> sector_levels;
  bool match = false;            // clusters reconciled with predicted levels by energy
  bool multiset_match = false;   // cluster degeneracies == {d_lambda x M_lambda} exactly
  double cluster_tolerance = 0.0;
  double hermiticity_residual = 0.0;
  double projection_displacement = 0.0;
  double commutant_residual = 0.0;
  double cross_sector_residual = 0.0;
  std::vector<double> eigenvalues;
};

double default_cluster_tolerance(double e0, const std::vector<double>& eigenvalues);

// Full pipeline: prediction, build, diagonalize, cluster, sector energies,
// reconciliation. `tol` <= 0 selects the default clustering tolerance.
SplittingReport splitting_report(const TunnelingModel& model, const TablePtr& qtable,
                                 double tol = 0.0);

}  // namespace nrmsym

#endif
