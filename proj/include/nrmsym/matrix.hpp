#ifndef NRMSYM_MATRIX_HPP
#define NRMSYM_MATRIX_HPP

#include <complex>
#include <vector>

namespace nrmsym {

using cplx = std::complex<double>;
using Vec = std::vector<cplx>;

// Dense row-major complex matrix. Sized for desk-scale group theory
// (dimensions up to a few hundred); no attempt at BLAS-grade speed.
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

  static Matrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  cplx& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  const cplx& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  Matrix operator*(const Matrix& rhs) const;
  Matrix operator+(const Matrix& rhs) const;
  Matrix operator-(const Matrix& rhs) const;
  Matrix& operator+=(const Matrix& rhs);
  Matrix operator*(cplx s) const;

  Matrix adjoint() const;
  Matrix transpose() const;
  Matrix conjugate() const;

  Vec apply(const Vec& v) const;  // matrix * column vector

  double max_abs() const;
  double frobenius_norm() const;
  // max |a_ij - conj(a_ji)|
  double hermiticity_residual() const;

  bool empty() const { return rows_ == 0; }

 private:
  int rows_, cols_;
  std::vector<cplx> a_;
};

Matrix operator*(cplx s, const Matrix& m);

// Columns `cols` of m as a new matrix (a basis selection).
Matrix select_columns(const Matrix& m, const std::vector<int>& cols);

double max_abs_diff(const Matrix& a, const Matrix& b);

// Vector helpers.
cplx dot(const Vec& a, const Vec& b);  // conj(a) . b
double norm(const Vec& v);
void axpy(cplx alpha, const Vec& x, Vec& y);  // y += alpha * x
Vec scaled(const Vec& v, cplx s);

struct EigenResult {
  std::vector<double> values;  // ascending
  Matrix vectors;              // unitary; column k pairs with values[k]
};

// Cyclic Jacobi diagonalization of a complex Hermitian matrix.
// Sweeps rotate (p,q) pairs in fixed row-major order until the off-diagonal
// Frobenius norm drops below 1e-12 * ||H||_F. Throws NotHermitian if the
// input fails the Hermiticity check, NoConvergence after 100 sweeps.
EigenResult hermitian_eigen(const Matrix& H);

}  // namespace nrmsym

#endif
