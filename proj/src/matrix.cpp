#include "nrmsym/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nrmsym/errors.hpp"

namespace nrmsym {

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  Matrix out(rows_, rhs.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int k = 0; k < cols_; ++k) {
      const cplx aik = (*this)(i, k);
      if (aik == cplx(0.0, 0.0)) continue;
      for (int j = 0; j < rhs.cols_; ++j) out(i, j) += aik * rhs(k, j);
    }
  }
  return out;
}

Matrix Matrix::operator+(const Matrix& rhs) const {
  Matrix out = *this;
  out += rhs;
  return out;
}

Matrix Matrix::operator-(const Matrix& rhs) const {
  Matrix out = *this;
  for (size_t i = 0; i < out.a_.size(); ++i) out.a_[i] -= rhs.a_[i];
  return out;
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
  for (size_t i = 0; i < a_.size(); ++i) a_[i] += rhs.a_[i];
  return *this;
}

Matrix Matrix::operator*(cplx s) const {
  Matrix out = *this;
  for (auto& x : out.a_) x *= s;
  return out;
}

Matrix operator*(cplx s, const Matrix& m) { return m * s; }

Matrix Matrix::adjoint() const {
  Matrix out(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

Matrix Matrix::transpose() const {
  Matrix out(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

Matrix Matrix::conjugate() const {
  Matrix out = *this;
  for (auto& x : out.a_) x = std::conj(x);
  return out;
}

Vec Matrix::apply(const Vec& v) const {
  Vec out(rows_, cplx(0.0));
  for (int i = 0; i < rows_; ++i) {
    cplx acc(0.0);
    for (int j = 0; j < cols_; ++j) acc += (*this)(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (const auto& x : a_) m = std::max(m, std::abs(x));
  return m;
}

double Matrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& x : a_) s += std::norm(x);
  return std::sqrt(s);
}

double Matrix::hermiticity_residual() const {
  double m = 0.0;
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j)
      m = std::max(m, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return m;
}

Matrix select_columns(const Matrix& m, const std::vector<int>& cols) {
  Matrix out(m.rows(), static_cast<int>(cols.size()));
  for (int i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < cols.size(); ++j) out(i, static_cast<int>(j)) = m(i, cols[j]);
  return out;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  double m = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

cplx dot(const Vec& a, const Vec& b) {
  cplx s(0.0);
  for (size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double norm(const Vec& v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

void axpy(cplx alpha, const Vec& x, Vec& y) {
  for (size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

Vec scaled(const Vec& v, cplx s) {
  Vec out = v;
  for (auto& x : out) x *= s;
  return out;
}

namespace {

double offdiag_norm(const Matrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace

EigenResult hermitian_eigen(const Matrix& H) {
  const int n = H.rows();
  if (n != H.cols()) throw NotHermitian("hermitian_eigen: matrix not square");
  const double scale = std::max(1.0, H.max_abs());
  if (H.hermiticity_residual() > 1e-10 * scale)
    throw NotHermitian("hermitian_eigen: input exceeds Hermiticity tolerance");

  Matrix a = H;
  Matrix v = Matrix::identity(n);
  const double norm_h = H.frobenius_norm();
  const double target = 1e-12 * norm_h;

  if (n <= 1 || norm_h == 0.0) {
    EigenResult r;
    r.values.resize(n);
    for (int i = 0; i < n; ++i) r.values[i] = std::real(a(i, i));
    r.vectors = v;
    return r;
  }

  bool converged = offdiag_norm(a) <= target;
  for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double b = std::abs(apq);
        if (b == 0.0) continue;
        // Unitary 2x2 rotation U = [[c, -s e^{i phi}], [s e^{-i phi}, c]]
        // chosen so that (U^dag A U)(p,q) = 0, with e^{i phi} = apq/|apq|.
        const cplx phase = apq / b;
        const double app = std::real(a(p, p));
        const double aqq = std::real(a(q, q));
        const double tau = (aqq - app) / (2.0 * b);
        // Roots of t^2 - 2 tau t - 1 = 0; take the smaller-magnitude one.
        double t;
        if (tau >= 0.0)
          t = -1.0 / (tau + std::sqrt(1.0 + tau * tau));
        else
          t = 1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx sp = s * phase;        // s e^{i phi}
        const cplx sm = std::conj(sp);    // s e^{-i phi}

        // Columns p,q of A: col_p' = c col_p + sm col_q ; col_q' = -sp col_p + c col_q.
        for (int k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp + sm * akq;
          a(k, q) = -sp * akp + c * akq;
        }
        // Rows p,q (U^dag from the left).
        for (int k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk + sp * aqk;
          a(q, k) = -sm * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = std::real(a(p, p));
        a(q, q) = std::real(a(q, q));
        // Accumulate eigenvectors.
        for (int k = 0; k < n; ++k) {
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp + sm * vkq;
          v(k, q) = -sp * vkp + c * vkq;
        }
      }
    }
    converged = offdiag_norm(a) <= target;
  }
  if (!converged) throw NoConvergence("hermitian_eigen: no convergence after 100 sweeps");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return std::real(a(i, i)) < std::real(a(j, j)); });

  EigenResult r;
  r.values.resize(n);
  r.vectors = Matrix(n, n);
  for (int k = 0; k < n; ++k) {
    r.values[k] = std::real(a(order[k], order[k]));
    for (int i = 0; i < n; ++i) r.vectors(i, k) = v(i, order[k]);
  }
  return r;
}

}  // namespace nrmsym
