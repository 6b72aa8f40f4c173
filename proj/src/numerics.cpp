#include "smbo/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "smbo/errors.hpp"

namespace smbo {

Matrix Matrix::identity(std::size_t order) {
  Matrix m(order, order);
  for (std::size_t i = 0; i < order; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vector>& rows) {
  Matrix m;
  for (const auto& r : rows) m.append_row(r);
  return m;
}

void Matrix::append_row(std::span<const double> values) {
  if (rows_ == 0 && cols_ == 0) cols_ = values.size();
  if (values.size() != cols_) throw std::invalid_argument("Matrix::append_row: column count mismatch");
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  if (cols_ != rhs.rows_) throw std::invalid_argument("Matrix product: shape mismatch");
  Matrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const double a = (*this)(i, k);
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
    }
  return out;
}

Vector Matrix::operator*(std::span<const double> v) const {
  if (cols_ != v.size()) throw std::invalid_argument("Matrix-vector product: shape mismatch");
  Vector out(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

double max_abs(const Matrix& a) noexcept {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

double norm_inf(const Matrix& a) noexcept {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (double v : a.row(i)) s += std::abs(v);
    m = std::max(m, s);
  }
  return m;
}

Matrix cholesky(const Matrix& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("cholesky: matrix is not square");
  const double tol = 1e-12 * max_abs(a);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(a(i, j) - a(j, i)) > tol)
        throw std::invalid_argument("cholesky: matrix is not symmetric");

  Matrix l = a;
  if (!cholesky_in_place(l)) throw NotPositiveDefinite("cholesky: matrix is not positive definite");
  return l;
}

namespace {

// Four independent partial sums so the loop is not bound by add latency.
// The summation order is fixed, so results are reproducible.
double dot(const double* a, const double* b, std::size_t n) noexcept {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    s0 += a[k] * b[k];
    s1 += a[k + 1] * b[k + 1];
    s2 += a[k + 2] * b[k + 2];
    s3 += a[k + 3] * b[k + 3];
  }
  for (; k < n; ++k) s0 += a[k] * b[k];
  return (s0 + s1) + (s2 + s3);
}

}  // namespace

bool cholesky_in_place(Matrix& a) noexcept {
  const std::size_t n = a.rows();
  // Row-oriented Cholesky-Crout: row i of L only needs rows 0..i-1.
  for (std::size_t i = 0; i < n; ++i) {
    double* li = &a(i, 0);
    for (std::size_t j = 0; j <= i; ++j) {
      const double* lj = &a(j, 0);
      const double s = li[j] - dot(li, lj, j);
      if (j == i) {
        if (!(s > 0.0)) return false;
        li[i] = std::sqrt(s);
      } else {
        li[j] = s / lj[j];
      }
    }
    for (std::size_t j = i + 1; j < n; ++j) li[j] = 0.0;
  }
  return true;
}

Vector solve_triangular(const Matrix& l, std::span<const double> b, bool transposed) {
  const std::size_t n = l.rows();
  if (l.cols() != n || b.size() != n)
    throw std::invalid_argument("solve_triangular: shape mismatch");
  for (std::size_t i = 0; i < n; ++i)
    if (l(i, i) == 0.0) throw SingularMatrix("solve_triangular: zero diagonal at " + std::to_string(i));

  Vector x(b.begin(), b.end());
  if (!transposed) {
    for (std::size_t i = 0; i < n; ++i) {
      const double* li = l.row(i).data();
      double s = x[i];
      for (std::size_t k = 0; k < i; ++k) s -= li[k] * x[k];
      x[i] = s / li[i];
    }
  } else {
    // Column sweep of L, i.e. row sweep of L^T, from the bottom.
    for (std::size_t ii = n; ii-- > 0;) {
      x[ii] /= l(ii, ii);
      const double xi = x[ii];
      const double* li = l.row(ii).data();
      for (std::size_t k = 0; k < ii; ++k) x[k] -= li[k] * xi;
    }
  }
  return x;
}

Vector cholesky_solve(const Matrix& l, std::span<const double> b) {
  return solve_triangular(l, solve_triangular(l, b, false), true);
}

double standard_normal_cdf(double z) noexcept {
  return 0.5 * std::erfc(-z * std::numbers::sqrt2 / 2.0);
}

double standard_normal_pdf(double z) noexcept {
  static const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  return inv_sqrt_2pi * std::exp(-0.5 * z * z);
}

}  // namespace smbo
