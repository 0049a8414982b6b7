#include "nrmsym/spinstats.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "nrmsym/errors.hpp"

namespace nrmsym {

namespace {

bool class_included(const NucleusClass& c, bool include_spectators) {
  return include_spectators || c.count > 1;
}

}  // namespace

int spin_space_dim(const NucleusFrame& frame, bool include_spectators) {
  long long dim = 1;
  for (const auto& c : frame.classes()) {
    if (!class_included(c, include_spectators)) continue;
    for (int k = 0; k < c.count; ++k) {
      dim *= (c.twice_spin + 1);
      if (dim > (1LL << 30)) throw ValidationError("spin space dimension overflow");
    }
  }
  return static_cast<int>(dim);
}

double spin_character(const PermInv& h, const NucleusFrame& frame, bool include_spectators) {
  if (!h.frame()->same_structure(frame))
    throw FrameMismatch("spin_character: element not defined on this frame");
  double chi = 1.0;
  for (size_t c = 0; c < frame.classes().size(); ++c) {
    const auto& cls = frame.classes()[c];
    if (!class_included(cls, include_spectators)) continue;
    auto [first, last] = frame.slot_range(static_cast<int>(c));
    std::vector<char> seen(last - first, 0);
    int cycles = 0;
    for (int k = first; k < last; ++k) {
      if (seen[k - first]) continue;
      ++cycles;
      int j = k;
      while (!seen[j - first]) {
        seen[j - first] = 1;
        j = h.map(j);
      }
    }
    chi *= std::pow(static_cast<double>(cls.twice_spin + 1), cycles);
  }
  return chi;
}

TwistedMultiplicities twisted_multiplicities(const CharacterTable& qtable,
                                             const NucleusFrame& frame,
                                             bool include_spectators) {
  const FiniteGroup& q = *qtable.group;
  const Case kase = classify_case(q);
  if (kase == Case::Unsupported)
    throw NumericalError("twisted_multiplicities: group is neither Case A nor Case B");

  std::vector<double> chi_spin(q.order()), eps(q.order()), u(q.order());
  for (int h = 0; h < q.order(); ++h) {
    chi_spin[h] = spin_character(q.element(h), frame, include_spectators);
    eps[h] = parity_sign(q.element(h), frame);
    u[h] = inversion_sign(q.element(h));
  }

  auto reduce = [&](bool with_u) {
    std::vector<int> m(qtable.num_irreps());
    for (int lam = 0; lam < qtable.num_irreps(); ++lam) {
      cplx acc(0.0);
      for (int h = 0; h < q.order(); ++h) {
        double sign = eps[h];
        if (with_u) sign *= u[h];
        acc += sign * qtable.chi_element(lam, h) * chi_spin[h];
      }
      acc /= static_cast<double>(q.order());
      if (std::abs(acc.imag()) > 1e-6 || std::abs(acc.real() - std::round(acc.real())) > 1e-6)
        throw NonIntegralMultiplicity("twisted_multiplicities: non-integral multiplicity for " +
                                      qtable.labels[lam]);
      m[lam] = static_cast<int>(std::llround(acc.real()));
      if (m[lam] < 0)
        throw NonIntegralMultiplicity("twisted_multiplicities: negative multiplicity");
    }
    return m;
  };

  TwistedMultiplicities out;
  out.kase = kase;
  out.m_plus = reduce(false);
  out.m_minus = kase == Case::B ? reduce(true) : out.m_plus;
  return out;
}

WeightTable statistical_weights(const CharacterTable& qtable, const NucleusFrame& frame,
                                bool include_spectators) {
  const TwistedMultiplicities tm = twisted_multiplicities(qtable, frame, include_spectators);
  WeightTable out;
  out.kase = tm.kase;
  out.include_spectators = include_spectators;
  out.spin_dim = spin_space_dim(frame, include_spectators);
  for (int lam = 0; lam < qtable.num_irreps(); ++lam) {
    WeightRow row;
    row.label = qtable.labels[lam];
    row.dim = qtable.dims[lam];
    row.m_plus = tm.m_plus[lam];
    row.m_minus = tm.m_minus[lam];
    row.weight = row.m_plus + row.m_minus;  // Case A: 2 m(S)
    row.missing = row.weight == 0;
    out.rows.push_back(row);
  }
  return out;
}

SymmetrizationSetup::SymmetrizationSetup(const MolecularSystem& sys, IrrepMatrices gamma,
                                         bool include_spectators)
    : sys_(&sys),
      gamma_(std::move(gamma)),
      include_spectators_(include_spectators),
      rovib_([&] {
        // Composite representatives F_t ∘ G_r, t outer, so the block t = 0
        // is exactly the Q-linked configuration basis.
        const FiniteGroup& p = *sys.p;
        std::vector<int> r_in_p;
        for (int pos = 0; pos < sys.dec_r_in_q.subgroup_order(); ++pos) {
          const auto idx = p.index_of(sys.q->element(sys.dec_r_in_q.subgroup()[pos]));
          if (!idx) throw ValidationError("symmetrization: R element missing from P");
          r_in_p.push_back(*idx);
        }
        std::vector<int> reps;
        for (int f_t : sys.dec_q_in_p.representatives())
          for (int g_r : sys.dec_r_in_q.representatives())
            reps.push_back(p.product(f_t, sys.q_to_p[g_r]));
        CosetDecomposition dec = coset_decomposition(sys.p, r_in_p, reps);
        // dec's subgroup positions are sorted by P index; map them back to
        // the element order the irrep matrices use.
        GroupPtr r_local = subgroup_as_group(*sys.q, sys.dec_r_in_q.subgroup());
        SubgroupMap sub_map(dec.subgroup_order());
        for (int pos = 0; pos < dec.subgroup_order(); ++pos) {
          const auto idx = r_local->index_of(p.element(dec.subgroup()[pos]));
          if (!idx) throw ValidationError("symmetrization: subgroup map mismatch");
          sub_map[pos] = *idx;
        }
        return InducedRep(std::move(dec), gamma_, std::move(sub_map));
      }()) {
  const auto& frame = *sys.frame;
  local_dim_.resize(frame.total_slots());
  for (int k = 0; k < frame.total_slots(); ++k) {
    const auto& cls = frame.classes()[frame.class_of_slot(k)];
    local_dim_[k] = class_included(cls, include_spectators_) ? cls.twice_spin + 1 : 1;
  }
  stride_.assign(frame.total_slots(), 1);
  for (int k = frame.total_slots() - 2; k >= 0; --k)
    stride_[k] = stride_[k + 1] * local_dim_[k + 1];
  spin_dim_ = spin_space_dim(frame, include_spectators_);

  if (static_cast<long long>(rovib_.dim()) * spin_dim_ > 4096)
    throw ValidationError("symmetrization: model space exceeds the 4096 limit");

  spin_perm_.reserve(sys.p->order());
  for (int e = 0; e < sys.p->order(); ++e)
    spin_perm_.push_back(spin_permutation(sys.p->element(e)));
}

std::vector<int> SymmetrizationSetup::spin_permutation(const PermInv& p) const {
  std::vector<int> perm(spin_dim_);
  const int slots = static_cast<int>(local_dim_.size());
  for (int idx = 0; idx < spin_dim_; ++idx) {
    int target = 0;
    for (int k = 0; k < slots; ++k) {
      const int digit = (idx / stride_[k]) % local_dim_[k];
      target += digit * stride_[p.map(k)];
    }
    perm[idx] = target;
  }
  return perm;
}

Vec SymmetrizationSetup::apply(int p_element, const Vec& v) const {
  const int rd = rovib_.dim();
  const auto& perm = spin_perm_[p_element];
  // Spin permutation first, then the rovib block action.
  Vec tmp(v.size());
  for (int r = 0; r < rd; ++r)
    for (int s = 0; s < spin_dim_; ++s)
      tmp[static_cast<size_t>(r) * spin_dim_ + perm[s]] =
          v[static_cast<size_t>(r) * spin_dim_ + s];
  const Matrix d = rovib_.matrix(p_element);
  Vec out(v.size(), cplx(0.0));
  for (int r2 = 0; r2 < rd; ++r2) {
    for (int r1 = 0; r1 < rd; ++r1) {
      const cplx c = d(r2, r1);
      if (c == cplx(0.0)) continue;
      for (int s = 0; s < spin_dim_; ++s)
        out[static_cast<size_t>(r2) * spin_dim_ + s] +=
            c * tmp[static_cast<size_t>(r1) * spin_dim_ + s];
    }
  }
  return out;
}

Matrix SymmetrizationSetup::spin_matrix(int p_element) const {
  Matrix m(spin_dim_, spin_dim_);
  const auto& perm = spin_perm_[p_element];
  for (int s = 0; s < spin_dim_; ++s) m(perm[s], s) = 1.0;
  return m;
}

std::vector<std::vector<Vec>> isotypic_basis(const FiniteGroup& g,
                                             const std::vector<Matrix>& carrier,
                                             const std::vector<Matrix>& tau,
                                             std::uint64_t seed) {
  const int f = g.order();
  const int d = tau[0].rows();
  const int dim = carrier[0].rows();

  auto unit_projector = [&](int j, int i) {
    Matrix p(dim, dim);
    for (int h = 0; h < f; ++h) p += std::conj(tau[h](j, i)) * carrier[h];
    return p * cplx(static_cast<double>(d) / f);
  };

  const Matrix p11 = unit_projector(0, 0);
  if (p11.hermiticity_residual() > 1e-9)
    throw NumericalError("isotypic_basis: row projector not Hermitian");
  // A genuine row projector has Frobenius norm sqrt(m) >= 1; anything tiny
  // is the zero projector of an absent component.
  if (p11.frobenius_norm() < 0.5) return {};
  EigenResult pe = hermitian_eigen(p11);
  std::vector<int> cols;
  for (int c = 0; c < dim; ++c) {
    if (pe.values[c] > 0.5) {
      if (std::abs(pe.values[c] - 1.0) > 1e-6)
        throw NumericalError("isotypic_basis: row projector not idempotent");
      cols.push_back(c);
    }
  }
  const int copies = static_cast<int>(cols.size());
  if (copies == 0) return {};
  const Matrix basis = select_columns(pe.vectors, cols);

  // Deterministic multiplicity basis: eigenvectors of a seeded random
  // Hermitian commutant element restricted to the row space.
  std::mt19937_64 rng(seed ^ 0xa5a5a5a55a5a5a5aULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix x(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) x(i, j) = cplx(gauss(rng), gauss(rng));
  x = (x + x.adjoint()) * cplx(0.5);
  Matrix averaged(dim, dim);
  for (int h = 0; h < f; ++h) averaged += carrier[h] * x * carrier[h].adjoint();
  averaged = averaged * cplx(1.0 / f);
  EigenResult ce = hermitian_eigen(basis.adjoint() * averaged * basis);
  const Matrix mult_basis = basis * ce.vectors;  // dim x copies

  std::vector<Matrix> row_projectors;
  for (int j = 0; j < d; ++j) row_projectors.push_back(unit_projector(j, 0));

  std::vector<std::vector<Vec>> out(copies, std::vector<Vec>(d));
  for (int copy = 0; copy < copies; ++copy) {
    Vec seed_vec(dim);
    for (int i = 0; i < dim; ++i) seed_vec[i] = mult_basis(i, copy);
    for (int j = 0; j < d; ++j) out[copy][j] = row_projectors[j].apply(seed_vec);
  }

  // The partner sets must transform exactly as tau.
  double residual = 0.0;
  for (int copy = 0; copy < copies; ++copy) {
    for (int h = 0; h < f; ++h) {
      for (int j = 0; j < d; ++j) {
        Vec got = Vec(dim, cplx(0.0));
        {
          const Vec tmp = carrier[h].apply(out[copy][j]);
          got = tmp;
        }
        Vec want(dim, cplx(0.0));
        for (int k = 0; k < d; ++k) axpy(tau[h](k, j), out[copy][k], want);
        for (int i = 0; i < dim; ++i) residual = std::max(residual, std::abs(got[i] - want[i]));
      }
    }
  }
  if (residual > 1e-9)
    throw NumericalError("isotypic_basis: partner functions fail the transformation law");
  return out;
}

namespace {

// tau(h) = sign(h) * conj(S_lambda(h)) over the Q elements.
std::vector<Matrix> twisted_matrices(const MolecularSystem& sys, const IrrepMatrices& s_lambda,
                                     bool with_u) {
  std::vector<Matrix> tau;
  tau.reserve(sys.q->order());
  for (int h = 0; h < sys.q->order(); ++h) {
    double sign = parity_sign(sys.q->element(h), *sys.frame);
    if (with_u) sign *= inversion_sign(sys.q->element(h));
    tau.push_back(s_lambda.matrix(h).conjugate() * cplx(sign));
  }
  return tau;
}

}  // namespace

SymmetrizedStates build_symmetrized_states(const SymmetrizationSetup& setup, int lambda,
                                           int mu, int theta) {
  const MolecularSystem& sys = setup.system();
  const FiniteGroup& q = *sys.q;
  const CharacterTable& qtable = *sys.qtable;
  if (lambda < 0 || lambda >= qtable.num_irreps())
    throw ValidationError("build_symmetrized_states: irrep index out of range");

  const IrrepMatrices s_lambda =
      irrep_matrices(sys.q, qtable.labels[lambda], qtable, sys.seed);
  const int d = s_lambda.dim;

  // Q-classified rovib basis |Γ λ μ j> inside the Q-linked block.
  InducedRep d_q(sys.dec_r_in_q, setup.gamma());
  const auto rovib_copies = isotypic_basis(q, d_q.all(), s_lambda.matrices, sys.seed);
  if (mu < 0 || mu >= static_cast<int>(rovib_copies.size()))
    throw ValidationError("build_symmetrized_states: mu exceeds the multiplicity M_lambda");

  // Spin carrier over Q (spin space ignores the star flag).
  std::vector<Matrix> u_spin;
  u_spin.reserve(q.order());
  for (int h = 0; h < q.order(); ++h) u_spin.push_back(setup.spin_matrix(sys.q_to_p[h]));

  const Case kase = classify_case(q);
  const auto tau_plus = twisted_matrices(sys, s_lambda, false);
  const auto spin_plus = isotypic_basis(q, u_spin, tau_plus, sys.seed + 1);
  std::vector<std::vector<Vec>> spin_minus;
  if (kase == Case::B) {
    const auto tau_minus = twisted_matrices(sys, s_lambda, true);
    spin_minus = isotypic_basis(q, u_spin, tau_minus, sys.seed + 2);
  } else {
    spin_minus = spin_plus;
  }

  SymmetrizedStates out;
  out.lambda = lambda;
  out.mu = mu;
  out.theta = theta;
  out.m_plus = static_cast<int>(spin_plus.size());
  out.m_minus = static_cast<int>(spin_minus.size());
  if (theta >= out.m_plus && theta >= out.m_minus)
    throw ZeroVector("build_symmetrized_states: no spin pairing for either parity (level " +
                     qtable.labels[lambda] + " is spin-statistically forbidden)");

  // Kernel: sum_j |Γ λ μ j> ⊗ |spin θ j>, embedded in the t = 0 block.
  const int rd = setup.rovib_dim();
  const int sd = setup.spin_dim();
  const int q_block = d_q.dim();
  auto make_kernel = [&](const std::vector<std::vector<Vec>>& spin_basis) {
    Vec kernel(static_cast<size_t>(rd) * sd, cplx(0.0));
    for (int j = 0; j < d; ++j) {
      const Vec& rv = rovib_copies[mu][j];
      const Vec& sv = spin_basis[theta][j];
      for (int a = 0; a < q_block; ++a) {
        if (rv[a] == cplx(0.0)) continue;
        for (int s = 0; s < sd; ++s)
          kernel[static_cast<size_t>(a) * sd + s] += rv[a] * sv[s];
      }
    }
    return kernel;
  };

  const double terms = static_cast<double>(sys.dec_q_in_p.num_cosets());
  const auto coset_sum = [&](const Vec& kernel, bool with_u) {
    Vec v(static_cast<size_t>(rd) * sd, cplx(0.0));
    for (int f_t : sys.dec_q_in_p.representatives()) {
      const PermInv& ft = sys.p->element(f_t);
      double coef = parity_sign(ft, *sys.frame);
      if (with_u) coef *= inversion_sign(ft);
      axpy(coef, setup.apply(f_t, kernel), v);
    }
    if (norm(v) < 1e-9 * terms)
      throw ZeroVector("build_symmetrized_states: symmetrized vector vanished");
    return scaled(v, 1.0 / norm(v));
  };

  if (theta < out.m_plus) out.splus = coset_sum(make_kernel(spin_plus), false);
  if (theta < out.m_minus)
    out.sminus = coset_sum(kase == Case::B ? make_kernel(spin_minus) : make_kernel(spin_plus),
                           true);
  return out;
}

SpmReport verify_s_pm(const SymmetrizationSetup& setup, const Vec& v) {
  const MolecularSystem& sys = setup.system();
  const double vnorm = norm(v);
  if (vnorm < 1e-12) throw ValidationError("verify_s_pm: zero vector");

  // Determine the inversion sign from the first starred element, if any.
  double sigma = 1.0;
  for (int e = 0; e < sys.p->order(); ++e) {
    if (!sys.p->element(e).star()) continue;
    const Vec w = setup.apply(e, v);
    const cplx overlap = dot(v, w) / (vnorm * vnorm);
    sigma = overlap.real() * parity_sign(sys.p->element(e), *sys.frame) >= 0.0 ? 1.0 : -1.0;
    break;
  }

  double residual = 0.0;
  for (int e = 0; e < sys.p->order(); ++e) {
    const PermInv& pe = sys.p->element(e);
    double expect = parity_sign(pe, *sys.frame);
    if (pe.star()) expect *= sigma;
    const Vec w = setup.apply(e, v);
    for (size_t i = 0; i < v.size(); ++i)
      residual = std::max(residual, std::abs(w[i] - expect * v[i]));
  }
  if (residual > 1e-9)
    throw NotSymmetrized("verify_s_pm: vector is not fully symmetrized (residual " +
                         std::to_string(residual) + ")");
  SpmReport report;
  report.sign = sigma >= 0.0 ? '+' : '-';
  report.max_residual = residual;
  return report;
}

}  // namespace nrmsym
