#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace smbo {

using Vector = std::vector<double>;

/// Dense row-major matrix. Used both for square linear-algebra operands and
/// for n x d point sets (one point per row).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t order);
  /// Builds a matrix from nested rows; every row must have the same length.
  static Matrix from_rows(const std::vector<Vector>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }

  /// Appends one row; the first append fixes the column count of an empty matrix.
  void append_row(std::span<const double> values);

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  Matrix transposed() const;
  Matrix operator*(const Matrix& rhs) const;
  Vector operator*(std::span<const double> v) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Largest absolute entry.
double max_abs(const Matrix& a) noexcept;
/// Infinity norm (maximum absolute row sum).
double norm_inf(const Matrix& a) noexcept;

/// Lower Cholesky factor L with L * L^T = a.
///
/// `a` must be square and symmetric to within 1e-12 * max|a|; the upper
/// triangle is not read otherwise. Throws NotPositiveDefinite when a pivot
/// is not strictly positive; the caller decides whether to add jitter.
Matrix cholesky(const Matrix& a);

/// In-place variant without the symmetry check: reads the lower triangle of
/// `a` and overwrites it with L (upper triangle zeroed). Returns false on a
/// non-positive pivot, leaving `a` partially overwritten.
bool cholesky_in_place(Matrix& a) noexcept;

/// Solves l * x = b, or l^T * x = b when `transposed` is set, for lower
/// triangular l. Throws SingularMatrix on a zero diagonal entry.
Vector solve_triangular(const Matrix& l, std::span<const double> b, bool transposed = false);

/// Solves (L L^T) x = b given the Cholesky factor L.
Vector cholesky_solve(const Matrix& l, std::span<const double> b);

/// Phi(z), computed as erfc(-z / sqrt 2) / 2.
double standard_normal_cdf(double z) noexcept;

/// phi(z) = exp(-z^2/2) / sqrt(2 pi).
double standard_normal_pdf(double z) noexcept;

}  // namespace smbo
