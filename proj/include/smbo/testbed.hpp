#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smbo/design.hpp"
#include "smbo/numerics.hpp"

namespace smbo {

enum class Modality { kUnimodal, kMultimodal };

/// One benchmark class of the suite with its landscape features.
struct FunctionInfo {
  int id = 0;
  std::string name;
  Modality modality = Modality::kUnimodal;
  bool separable = false;
  /// Whether instances apply a random rotation before the core function.
  bool rotated = false;
  /// Landscape features, one tag per entry (e.g. "unimodal", "high conditioning").
  std::vector<std::string> tags;
  std::vector<std::size_t> dimensions;

  bool has_tag(std::string_view t) const;
};

/// Implemented classes in ascending id order.
const std::vector<FunctionInfo>& list_suite();

/// Throws UnknownFunction if `function_id` is not implemented.
const FunctionInfo& function_info(int function_id);

inline constexpr int kInstancesPerFunction = 15;

/// Untransformed core functions in their natural coordinates.
namespace base {
double sphere(std::span<const double> x);
/// sum 10^(6 (i-1)/(d-1)) x_i^2
double ellipsoidal(std::span<const double> x);
/// 10 d + sum (x_i^2 - 10 cos(2 pi x_i))
double rastrigin(std::span<const double> x);
/// sum 100 (x_i^2 - x_{i+1})^2 + (x_i - 1)^2, minimum 0 at (1, ..., 1)
double rosenbrock(std::span<const double> x);
double discus(std::span<const double> x);
double bent_cigar(std::span<const double> x);
double sharp_ridge(std::span<const double> x);
double different_powers(std::span<const double> x);
double schaffers_f7(std::span<const double> x);
/// Per-coordinate Schwefel term summed and divided by d; minimum 0 at
/// x_i = kSchwefelPeak. Only meaningful on [-500, 500]^d.
double schwefel(std::span<const double> x);
inline constexpr double kSchwefelPeak = 420.9687462275036;
}  // namespace base

/// A shifted (and, for non-separable classes, rotated) instance of one suite
/// class on the box [-5, 5]^d. Immutable once built.
class TestFunction {
 public:
  int function_id() const noexcept { return info_->id; }
  const std::string& name() const noexcept { return info_->name; }
  const FunctionInfo& info() const noexcept { return *info_; }
  std::size_t dimension() const noexcept { return x_opt_.size(); }
  int instance_id() const noexcept { return instance_id_; }
  const BoxBounds& bounds() const noexcept { return bounds_; }
  const Vector& x_opt() const noexcept { return x_opt_; }
  double f_opt() const noexcept { return f_opt_; }
  bool rotated() const noexcept { return !rotation_.empty(); }
  /// Orthogonal matrix applied to (x - x_opt); empty when not rotated.
  const Matrix& rotation() const noexcept { return rotation_; }

  /// Objective value; throws OutOfBounds for points outside bounds().
  double evaluate(std::span<const double> x) const;

 private:
  friend TestFunction make_instance(int, std::size_t, int);
  TestFunction() = default;

  const FunctionInfo* info_ = nullptr;
  int instance_id_ = 0;
  BoxBounds bounds_;
  Vector x_opt_;
  double f_opt_ = 0.0;
  Matrix rotation_;
  Vector conditioning_;  // optional diagonal scaling after rotation
};

/// Deterministic per (function_id, dimension, instance_id). Requires d >= 2.
TestFunction make_instance(int function_id, std::size_t dimension, int instance_id);

inline double evaluate(const TestFunction& f, std::span<const double> x) { return f.evaluate(x); }

/// Random orthogonal matrix: modified Gram-Schmidt on a standard Gaussian matrix.
Matrix random_rotation(std::size_t dimension, std::uint64_t seed);

}  // namespace smbo
