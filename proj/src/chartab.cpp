#include "nrmsym/chartab.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "nrmsym/errors.hpp"

namespace nrmsym {

int CharacterTable::irrep_by_label(const std::string& label) const {
  for (size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return static_cast<int>(i);
  return -1;
}

int CharacterTable::trivial_index() const {
  for (int r = 0; r < num_irreps(); ++r) {
    bool all_one = true;
    for (int c = 0; c < characters.cols(); ++c)
      if (std::abs(chi(r, c) - cplx(1.0)) > 1e-6) all_one = false;
    if (all_one) return r;
  }
  return -1;
}

namespace {

// Class multiplication coefficients c[j][l][i]: K_j K_l = sum_i c_jli K_i in
// the centre of the group algebra. Integer by construction.
std::vector<std::vector<std::vector<long long>>> class_coefficients(const FiniteGroup& g) {
  const int k = g.num_classes();
  std::vector<std::vector<std::vector<long long>>> c(
      k, std::vector<std::vector<long long>>(k, std::vector<long long>(k, 0)));
  for (int j = 0; j < k; ++j) {
    for (int l = 0; l < k; ++l) {
      std::vector<long long> hits(k, 0);
      for (int a : g.classes()[j])
        for (int b : g.classes()[l]) ++hits[g.class_of(g.product(a, b))];
      for (int i = 0; i < k; ++i) {
        const long long size = static_cast<long long>(g.classes()[i].size());
        if (hits[i] % size != 0)
          throw NumericalError("character_table: non-integral class coefficient");
        c[j][l][i] = hits[i] / size;
      }
    }
  }
  return c;
}

struct RecoveredRow {
  std::vector<cplx> chi;  // per class
  int dim;
};

// Entry ordering used to canonicalize rows: real part descending, then
// imaginary part ascending, quantized so float noise cannot flip the order.
long long quantize(double x) { return std::llround(x * 1e6); }

bool row_less(const RecoveredRow& a, const RecoveredRow& b) {
  if (a.dim != b.dim) return a.dim < b.dim;
  for (size_t i = 0; i < a.chi.size(); ++i) {
    const long long ra = -quantize(a.chi[i].real()), rb = -quantize(b.chi[i].real());
    if (ra != rb) return ra < rb;
    const long long ia = quantize(a.chi[i].imag()), ib = quantize(b.chi[i].imag());
    if (ia != ib) return ia < ib;
  }
  return false;
}

}  // namespace

TablePtr character_table(const GroupPtr& gp, std::uint64_t seed) {
  const FiniteGroup& g = *gp;
  const int k = g.num_classes();
  const int n = g.order();
  const auto coeff = class_coefficients(g);

  // B_j = D^{-1} M_j D with (M_j)_{l,i} = c_jli and D = diag(sqrt |C_i|).
  // Each B_j is a real normal matrix; their common orthonormal eigenvectors
  // are the |C|^{1/2}-weighted character rows.
  std::vector<double> sq(k);
  for (int i = 0; i < k; ++i) sq[i] = std::sqrt(static_cast<double>(g.classes()[i].size()));
  std::vector<Matrix> b(k, Matrix(k, k));
  for (int j = 0; j < k; ++j)
    for (int l = 0; l < k; ++l)
      for (int i = 0; i < k; ++i)
        b[j](l, i) = static_cast<double>(coeff[j][l][i]) * sq[i] / sq[l];

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.25, 1.75);

  std::string last_failure = "degenerate random combination";
  bool saw_nonintegral = false;
  for (int attempt = 0; attempt < 8; ++attempt) {
    Matrix m(k, k);
    for (int j = 0; j < k; ++j) {
      const double t = dist(rng);
      for (int l = 0; l < k; ++l)
        for (int i = 0; i < k; ++i) m(l, i) += t * b[j](l, i);
    }

    // Split the normal matrix into commuting Hermitian parts and diagonalize
    // them jointly: H1 first, then H2 restricted to each H1 eigenspace.
    const Matrix mh = m.adjoint();
    const Matrix h1 = (m + mh) * cplx(0.5);
    const Matrix h2 = (m - mh) * cplx(0.0, -0.5);

    Matrix w;
    try {
      EigenResult e1 = hermitian_eigen(h1);
      w = e1.vectors;
      const double tol = 1e-7 * std::max(1.0, h1.max_abs());
      int start = 0;
      while (start < k) {
        int stop = start + 1;
        while (stop < k && e1.values[stop] - e1.values[stop - 1] < tol) ++stop;
        if (stop - start > 1) {
          std::vector<int> idx(stop - start);
          for (int i = 0; i < stop - start; ++i) idx[i] = start + i;
          const Matrix basis = select_columns(w, idx);
          const Matrix restricted = basis.adjoint() * h2 * basis;
          EigenResult e2 = hermitian_eigen(restricted);
          const Matrix rotated = basis * e2.vectors;
          for (int c = 0; c < stop - start; ++c)
            for (int r = 0; r < k; ++r) w(r, start + c) = rotated(r, c);
        }
        start = stop;
      }
    } catch (const NumericalError&) {
      continue;
    }

    // Recover character rows: each column equals s * sqrt(|C_i|) chi(i);
    // fix |s| by row orthonormality and the phase by making chi(identity)
    // real and positive.
    std::vector<RecoveredRow> rows;
    bool ok = true;
    for (int col = 0; col < k && ok; ++col) {
      std::vector<cplx> v(k);
      double nrm = 0.0;
      for (int i = 0; i < k; ++i) {
        v[i] = w(i, col);
        nrm += std::norm(v[i]);
      }
      nrm = std::sqrt(nrm);
      if (nrm < 1e-12 || std::abs(v[0]) < 1e-9 * nrm) {
        ok = false;
        break;
      }
      const cplx scale = std::sqrt(static_cast<double>(n)) / nrm * (std::abs(v[0]) / v[0]);
      RecoveredRow row;
      row.chi.resize(k);
      for (int i = 0; i < k; ++i) row.chi[i] = v[i] * scale / sq[i];
      const double d = row.chi[0].real();
      if (std::abs(d - std::round(d)) > 1e-6 || std::round(d) < 1.0) {
        saw_nonintegral = true;
        ok = false;
        break;
      }
      row.dim = static_cast<int>(std::llround(d));
      row.chi[0] = static_cast<double>(row.dim);
      rows.push_back(std::move(row));
    }
    if (!ok) continue;

    long long dim_sq = 0;
    for (const auto& r : rows) dim_sq += static_cast<long long>(r.dim) * r.dim;
    if (dim_sq != n) continue;

    // Row orthogonality over classes with |C| weights.
    double max_resid = 0.0;
    for (int a = 0; a < k; ++a) {
      for (int c = 0; c < k; ++c) {
        cplx acc(0.0);
        for (int i = 0; i < k; ++i)
          acc += static_cast<double>(g.classes()[i].size()) * rows[a].chi[i] *
                 std::conj(rows[c].chi[i]);
        acc /= static_cast<double>(n);
        max_resid = std::max(max_resid, std::abs(acc - (a == c ? cplx(1.0) : cplx(0.0))));
      }
    }
    if (max_resid > 1e-9) continue;

    std::sort(rows.begin(), rows.end(), row_less);

    auto table = std::make_shared<CharacterTable>();
    table->group = gp;
    table->characters = Matrix(k, k);
    for (int r = 0; r < k; ++r) {
      table->labels.push_back("irrep_" + std::to_string(r));
      table->dims.push_back(rows[r].dim);
      for (int c = 0; c < k; ++c) table->characters(r, c) = rows[r].chi[c];
    }
    if (table->trivial_index() != 0)
      throw NumericalError("character_table: trivial representation not first after sorting");
    return table;
  }

  if (saw_nonintegral)
    throw NonIntegralDimension("character_table: recovered dimension not integral");
  throw DegenerateRandomCombination(
      "character_table: random class-algebra combination degenerate after 8 attempts");
}

}  // namespace nrmsym
