#include "nrmsym/irreps.hpp"

#include <cmath>
#include <random>

#include "nrmsym/errors.hpp"

namespace nrmsym {

namespace {

// Left regular representation: Reg(h)[h∘g, g] = 1.
Matrix regular_matrix(const FiniteGroup& g, int h) {
  Matrix m(g.order(), g.order());
  for (int j = 0; j < g.order(); ++j) m(g.product(h, j), j) = 1.0;
  return m;
}

// Right multiplication x -> x∘h^{-1}; commutes with the left action.
Matrix right_matrix(const FiniteGroup& g, int h) {
  Matrix m(g.order(), g.order());
  const int hinv = g.inverse(h);
  for (int j = 0; j < g.order(); ++j) m(g.product(j, hinv), j) = 1.0;
  return m;
}

}  // namespace

IrrepMatrices irrep_matrices(const GroupPtr& gp, const std::string& label,
                             const CharacterTable& table, std::uint64_t seed) {
  const FiniteGroup& g = *gp;
  const int n = g.order();
  if (n > 64)
    throw ValidationError("irrep_matrices: group order " + std::to_string(n) +
                          " exceeds the supported limit of 64");
  const int irrep = table.irrep_by_label(label);
  if (irrep < 0) throw ValidationError("irrep_matrices: unknown irrep label '" + label + "'");
  const int d = table.dims[irrep];

  std::vector<Matrix> reg(n);
  for (int h = 0; h < n; ++h) reg[h] = regular_matrix(g, h);

  // Character projector onto the isotypic component (rank d^2).
  Matrix proj(n, n);
  for (int h = 0; h < n; ++h)
    proj += std::conj(table.chi_element(irrep, h)) * reg[h];
  proj = proj * cplx(static_cast<double>(d) / n);

  EigenResult pe = hermitian_eigen(proj);
  std::vector<int> range_cols;
  for (int c = 0; c < n; ++c)
    if (pe.values[c] > 0.5) range_cols.push_back(c);
  if (static_cast<int>(range_cols.size()) != d * d)
    throw BlockExtractionFailed("irrep_matrices: projector rank " +
                                std::to_string(range_cols.size()) + " != d^2 = " +
                                std::to_string(d * d));
  const Matrix iso = select_columns(pe.vectors, range_cols);

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> gauss(0.0, 1.0);

  double residual = 0.0;
  for (int attempt = 0; attempt < 8; ++attempt) {
    // Random Hermitian element of the commutant (right multiplications are a
    // basis for it on the regular representation).
    Matrix c(n, n);
    for (int h = 0; h < n; ++h) c += cplx(gauss(rng), gauss(rng)) * right_matrix(g, h);
    c = (c + c.adjoint()) * cplx(0.5);

    const Matrix cr = iso.adjoint() * c * iso;  // d^2 x d^2 Hermitian
    EigenResult ce = hermitian_eigen(cr);

    // Eigenvalues come in d groups of size d; each group spans one
    // irreducible copy. Take the lowest group.
    const double gap_tol = 1e-6 * std::max(1.0, std::abs(ce.values.back()) +
                                                    std::abs(ce.values.front()));
    int stop = 1;
    while (stop < d * d && ce.values[stop] - ce.values[stop - 1] < gap_tol) ++stop;
    if (stop != d) continue;  // degenerate random element; retry

    std::vector<int> block(d);
    for (int i = 0; i < d; ++i) block[i] = i;
    const Matrix basis = iso * select_columns(ce.vectors, block);  // n x d, orthonormal

    IrrepMatrices out;
    out.group = gp;
    out.label = label;
    out.dim = d;
    out.matrices.reserve(n);
    for (int h = 0; h < n; ++h) out.matrices.push_back(basis.adjoint() * reg[h] * basis);

    // The block is only usable if it actually carries the representation.
    residual = 0.0;
    for (int h = 0; h < n; ++h) {
      const Matrix& m = out.matrices[h];
      residual = std::max(residual, max_abs_diff(m * m.adjoint(), Matrix::identity(d)));
      cplx tr(0.0);
      for (int i = 0; i < d; ++i) tr += m(i, i);
      residual = std::max(residual, std::abs(tr - table.chi_element(irrep, h)));
    }
    for (int a = 0; a < n && residual <= 1e-9; ++a)
      for (int b = 0; b < n; ++b)
        residual = std::max(residual, max_abs_diff(out.matrices[g.product(a, b)],
                                                   out.matrices[a] * out.matrices[b]));
    if (residual <= 1e-9) return out;
  }
  throw BlockExtractionFailed(
      "irrep_matrices: could not extract a clean irreducible block (residual " +
      std::to_string(residual) + ")");
}

}  // namespace nrmsym
