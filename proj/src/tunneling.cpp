#include "nrmsym/tunneling.hpp"

#include <algorithm>
#include <cmath>

#include "nrmsym/errors.hpp"

namespace nrmsym {

InducedRep::InducedRep(CosetDecomposition dec, IrrepMatrices gamma, SubgroupMap sub_to_irrep)
    : dec_(std::move(dec)), gamma_(std::move(gamma)), sub_to_irrep_(std::move(sub_to_irrep)) {}

Matrix InducedRep::matrix(int h) const {
  const FiniteGroup& g = *dec_.group();
  const int d = gamma_.dim;
  Matrix m(dim(), dim());
  for (int s = 0; s < dec_.num_cosets(); ++s) {
    const auto [u, gpos] = dec_.factorize(g.product(h, dec_.representatives()[s]));
    const Matrix& block =
        gamma_.matrix(sub_to_irrep_.empty() ? gpos : sub_to_irrep_[gpos]);
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < d; ++i) m(u * d + j, s * d + i) = block(j, i);
  }
  return m;
}

const std::vector<Matrix>& InducedRep::all() const {
  if (cache_.empty()) {
    cache_.reserve(group().order());
    for (int h = 0; h < group().order(); ++h) cache_.push_back(matrix(h));
  }
  return cache_;
}

TunnelingModel make_model(GroupPtr q, CosetDecomposition dec, IrrepMatrices gamma, double e0,
                          std::map<int, Matrix> seeds, double seed_tolerance) {
  const int d = gamma.dim;
  for (const auto& [u, block] : seeds) {
    if (u < 0 || u >= dec.num_cosets())
      throw ValidationError("tunneling model: seed coset position out of range");
    if (block.rows() != d || block.cols() != d)
      throw ValidationError("tunneling model: seed block shape does not match irrep dimension");
  }
  Matrix t0 = Matrix::identity(d) * cplx(e0);
  if (auto it = seeds.find(0); it != seeds.end()) {
    if (max_abs_diff(it->second, t0) > 1e-12)
      throw ValidationError("tunneling model: the u = 0 seed block must equal E0 * identity");
  }
  seeds[0] = std::move(t0);

  TunnelingModel model;
  model.q = std::move(q);
  model.dec = std::move(dec);
  model.gamma = std::move(gamma);
  model.e0 = e0;
  model.seeds = std::move(seeds);
  model.seed_tolerance = seed_tolerance;
  return model;
}

Matrix build_h_r(const TunnelingModel& model) {
  return Matrix::identity(model.dim()) * cplx(model.e0);
}

HamiltonianBuild build_h_nrm(const TunnelingModel& model) {
  const FiniteGroup& q = *model.q;
  const CosetDecomposition& dec = model.dec;
  const int d = model.gamma.dim;
  const int nc = dec.num_cosets();
  const int dim = model.dim();

  // Stage 1: propagate each seed block to every entry the group relations
  // determine, tracking which entries have a value at all. An entry whose
  // mirror is determined but which is not itself gets the Hermitian image.
  Matrix raw(dim, dim);
  std::vector<char> filled(static_cast<size_t>(dim) * dim, 0);
  for (int s = 0; s < nc; ++s) {
    const int gs_inv = q.inverse(dec.representatives()[s]);
    for (int r = 0; r < nc; ++r) {
      const auto [u, gpos] = dec.factorize(q.product(gs_inv, dec.representatives()[r]));
      const auto it = model.seeds.find(u);
      if (it == model.seeds.end()) continue;
      const Matrix& block = it->second;
      const Matrix& s_g =
          model.gamma.matrix(model.sub_to_irrep.empty() ? gpos : model.sub_to_irrep[gpos]);
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          cplx v(0.0);
          for (int k = 0; k < d; ++k) v += block(i, k) * s_g(k, j);
          raw(s * d + i, r * d + j) = v;
          filled[static_cast<size_t>(s * d + i) * dim + r * d + j] = 1;
        }
      }
    }
  }

  // Stage 2: Hermitize. Doubly determined pairs are averaged and their
  // asymmetry recorded; one-sided entries are completed by symmetry.
  Matrix h(dim, dim);
  double scale = std::max(raw.max_abs(), std::abs(model.e0));
  if (scale == 0.0) scale = 1.0;
  double asym = 0.0;
  for (int a = 0; a < dim; ++a) {
    for (int b = a; b < dim; ++b) {
      const bool fab = filled[static_cast<size_t>(a) * dim + b];
      const bool fba = filled[static_cast<size_t>(b) * dim + a];
      cplx v(0.0);
      if (fab && fba) {
        asym = std::max(asym, std::abs(raw(a, b) - std::conj(raw(b, a))));
        v = (raw(a, b) + std::conj(raw(b, a))) * 0.5;
      } else if (fab) {
        v = raw(a, b);
      } else if (fba) {
        v = std::conj(raw(b, a));
      }
      h(a, b) = v;
      h(b, a) = std::conj(v);
      if (a == b) h(a, a) = std::real(v);
    }
  }
  const double herm_residual = asym / scale;
  if (herm_residual > model.seed_tolerance)
    throw SeedInconsistency(
        "build_h_nrm: seed blocks violate the symmetry relations (relative residual " +
        std::to_string(herm_residual) + ")");

  // Stage 3: project onto the commutant of the induced representation.
  InducedRep rep(dec, model.gamma, model.sub_to_irrep);
  const auto& dmats = rep.all();
  Matrix projected(dim, dim);
  for (int e = 0; e < q.order(); ++e) projected += dmats[e] * h * dmats[e].adjoint();
  projected = projected * cplx(1.0 / q.order());
  const double displacement = max_abs_diff(projected, h);

  double commutant = 0.0;
  for (int e = 0; e < q.order(); ++e)
    commutant = std::max(commutant,
                         max_abs_diff(dmats[e] * projected, projected * dmats[e]));
  if (commutant > 1e-10)
    throw NumericalError("build_h_nrm: symmetrized Hamiltonian fails to commute with the "
                         "group action (residual " + std::to_string(commutant) + ")");

  HamiltonianBuild out;
  out.h = std::move(projected);
  out.hermiticity_residual = herm_residual;
  out.projection_displacement = displacement;
  out.commutant_residual = commutant;
  return out;
}

std::vector<LevelCluster> cluster_levels(const std::vector<double>& eigenvalues, double tol) {
  if (tol <= 0.0) throw ValidationError("cluster_levels: tolerance must be positive");
  std::vector<LevelCluster> out;
  for (size_t i = 0; i < eigenvalues.size(); ++i) {
    if (i > 0 && eigenvalues[i] < eigenvalues[i - 1])
      throw ValidationError("cluster_levels: eigenvalues must be sorted ascending");
    if (out.empty() || eigenvalues[i] - out.back().members.back() >= tol) {
      out.emplace_back();
    }
    out.back().members.push_back(eigenvalues[i]);
  }
  for (auto& c : out) {
    c.degeneracy = static_cast<int>(c.members.size());
    double sum = 0.0;
    for (double v : c.members) sum += v;
    c.mean_energy = sum / c.degeneracy;
  }
  return out;
}

Matrix character_projector(int lambda, const CharacterTable& qtable,
                           const std::vector<Matrix>& d_matrices) {
  const FiniteGroup& q = *qtable.group;
  const int dim = d_matrices[0].rows();
  Matrix p(dim, dim);
  for (int h = 0; h < q.order(); ++h)
    p += std::conj(qtable.chi_element(lambda, h)) * d_matrices[h];
  p = p * cplx(static_cast<double>(qtable.dims[lambda]) / q.order());

  if (max_abs_diff(p * p, p) > 1e-9)
    throw NumericalError("character_projector: projector not idempotent");
  return p;
}

SectorResult sector_energies(const Matrix& h, const CharacterTable& qtable,
                             const SplittingMultiplicities& pred,
                             const std::vector<Matrix>& d_matrices, double tol) {
  SectorResult out;
  std::vector<Matrix> bases(qtable.num_irreps());
  Matrix projector_sum(h.rows(), h.cols());

  for (int lam = 0; lam < qtable.num_irreps(); ++lam) {
    const Matrix p = character_projector(lam, qtable, d_matrices);
    projector_sum += p;
    const int expect = pred.m[lam] * qtable.dims[lam];
    if (expect == 0) {
      // Absent sector; its projector must be numerically zero.
      if (p.max_abs() > 1e-8)
        throw NumericalError("sector_energies: nonzero projector for absent sector " +
                             qtable.labels[lam]);
      continue;
    }
    EigenResult pe = hermitian_eigen(p);
    std::vector<int> cols;
    for (int c = 0; c < p.rows(); ++c)
      if (pe.values[c] > 0.5) cols.push_back(c);
    if (static_cast<int>(cols.size()) != expect)
      throw NumericalError("sector_energies: projector rank does not match prediction for " +
                           qtable.labels[lam]);
    bases[lam] = select_columns(pe.vectors, cols);
  }
  out.completeness_residual = max_abs_diff(projector_sum, Matrix::identity(h.rows()));

  for (int lam = 0; lam < qtable.num_irreps(); ++lam) {
    if (bases[lam].empty()) continue;
    const int d = qtable.dims[lam];
    const Matrix restricted = bases[lam].adjoint() * h * bases[lam];
    EigenResult re = hermitian_eigen(restricted);
    // Eigenvalues of the restriction arrive in multiplets of d.
    size_t i = 0;
    int mu = 0;
    while (i < re.values.size()) {
      size_t j = i + 1;
      while (j < re.values.size() && re.values[j] - re.values[j - 1] < tol) ++j;
      const size_t size = j - i;
      if (size % d != 0)
        throw SectorDegeneracyMismatch("sector_energies: multiplet of size " +
                                       std::to_string(size) + " in sector " +
                                       qtable.labels[lam] + " is not a multiple of d = " +
                                       std::to_string(d));
      const int copies = static_cast<int>(size) / d;
      double mean = 0.0;
      for (size_t k = i; k < j; ++k) mean += re.values[k];
      mean /= static_cast<double>(size);
      for (int c = 0; c < copies; ++c) out.levels.push_back({lam, mu++, mean});
      i = j;
    }
    if (mu != pred.m[lam])
      throw SectorDegeneracyMismatch("sector_energies: found " + std::to_string(mu) +
                                     " levels in sector " + qtable.labels[lam] +
                                     ", predicted " + std::to_string(pred.m[lam]));
  }

  // Block diagonality between different irrep sectors.
  for (int a = 0; a < qtable.num_irreps(); ++a) {
    if (bases[a].empty()) continue;
    for (int b = a + 1; b < qtable.num_irreps(); ++b) {
      if (bases[b].empty()) continue;
      const Matrix cross = bases[a].adjoint() * h * bases[b];
      out.cross_sector_residual = std::max(out.cross_sector_residual, cross.max_abs());
    }
  }
  if (out.cross_sector_residual > 1e-9)
    throw NumericalError("sector_energies: cross-sector matrix elements exceed 1e-9");
  return out;
}

double default_cluster_tolerance(double e0, const std::vector<double>& eigenvalues) {
  double spread = 0.0;
  if (!eigenvalues.empty()) spread = eigenvalues.back() - eigenvalues.front();
  return 1e-8 * std::max({1.0, std::abs(e0), spread});
}

SplittingReport splitting_report(const TunnelingModel& model, const TablePtr& qtable,
                                 double tol) {
  SplittingReport report;
  InducedRep rep(model.dec, model.gamma, model.sub_to_irrep);
  report.predicted = splitting_multiplicities(qtable, model.dec, model.gamma,
                                              model.sub_to_irrep);

  HamiltonianBuild build = build_h_nrm(model);
  report.hermiticity_residual = build.hermiticity_residual;
  report.projection_displacement = build.projection_displacement;
  report.commutant_residual = build.commutant_residual;

  EigenResult eig = hermitian_eigen(build.h);
  report.eigenvalues = eig.values;
  report.cluster_tolerance =
      tol > 0.0 ? tol : default_cluster_tolerance(model.e0, eig.values);
  report.clusters = cluster_levels(eig.values, report.cluster_tolerance);

  SectorResult sectors = sector_energies(build.h, *qtable, report.predicted, rep.all(),
                                         report.cluster_tolerance);
  report.sector_levels = sectors.levels;
  report.cross_sector_residual = sectors.cross_sector_residual;

  // Reconcile: assign every sector level to the nearest cluster, then demand
  // that each cluster's degeneracy is exactly the dimension total of its
  // assigned levels. Coinciding predicted levels may share one cluster.
  std::vector<int> cluster_dim(report.clusters.size(), 0);
  bool assigned_ok = true;
  for (const auto& level : sectors.levels) {
    size_t best = 0;
    double best_dist = std::abs(level.energy - report.clusters[0].mean_energy);
    for (size_t c = 1; c < report.clusters.size(); ++c) {
      const double dist = std::abs(level.energy - report.clusters[c].mean_energy);
      if (dist < best_dist) {
        best = c;
        best_dist = dist;
      }
    }
    cluster_dim[best] += qtable->dims[level.lambda];
    report.clusters[best].assigned.emplace_back(qtable->labels[level.lambda], level.mu);
  }
  for (size_t c = 0; c < report.clusters.size(); ++c)
    if (cluster_dim[c] != report.clusters[c].degeneracy) assigned_ok = false;
  report.match = assigned_ok;

  // Strict multiset comparison: one cluster per predicted level.
  std::vector<int> observed, predicted_degs;
  for (const auto& c : report.clusters) observed.push_back(c.degeneracy);
  for (int lam = 0; lam < qtable->num_irreps(); ++lam)
    for (int copy = 0; copy < report.predicted.m[lam]; ++copy)
      predicted_degs.push_back(qtable->dims[lam]);
  std::sort(observed.begin(), observed.end());
  std::sort(predicted_degs.begin(), predicted_degs.end());
  report.multiset_match = observed == predicted_degs;

  return report;
}

}  // namespace nrmsym
