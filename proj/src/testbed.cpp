#include "smbo/testbed.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "smbo/errors.hpp"
#include "smbo/rng.hpp"

namespace smbo {

namespace {

constexpr double kBoxHalfWidth = 5.0;
constexpr double kShiftHalfWidth = 4.0;

// Exponent ratio (i-1)/(d-1), 0 for d = 1.
double ratio(std::size_t i, std::size_t d) {
  return d > 1 ? static_cast<double>(i) / static_cast<double>(d - 1) : 0.0;
}

FunctionInfo entry(int id, std::string name, Modality m, bool separable, bool rotated,
                   std::vector<std::string> tags) {
  return {id, std::move(name), m, separable, rotated, std::move(tags), {2, 3, 5, 10}};
}

std::vector<FunctionInfo> build_suite() {
  using enum Modality;
  return {
      entry(1, "Sphere", kUnimodal, true, false, {"unimodal", "separable", "symmetric"}),
      entry(2, "Ellipsoidal", kUnimodal, true, false,
            {"unimodal", "separable", "high conditioning"}),
      entry(3, "Rastrigin", kMultimodal, true, false,
            {"multimodal", "separable", "regular/symmetric structure"}),
      entry(5, "Linear Slope", kUnimodal, true, false, {"unimodal", "separable"}),
      entry(8, "Rosenbrock", kUnimodal, false, false,
            {"unimodal/bimodal depending on dimension", "low/moderate conditioning"}),
      entry(9, "Rosenbrock, rotated", kUnimodal, false, true,
            {"unimodal/bimodal depending on dimension", "low/moderate conditioning"}),
      entry(11, "Discus", kUnimodal, false, true, {"unimodal", "high conditioning"}),
      entry(12, "Bent Cigar", kUnimodal, false, true, {"unimodal", "high conditioning"}),
      entry(13, "Sharp Ridge", kUnimodal, false, true, {"unimodal", "high conditioning"}),
      entry(14, "Different Powers", kUnimodal, false, true, {"unimodal", "high conditioning"}),
      entry(17, "Schaffers F7", kMultimodal, false, true,
            {"multimodal", "low conditioning", "adequate global structure"}),
      entry(20, "Schwefel", kMultimodal, true, false,
            {"multimodal", "weak global structure"}),
  };
}

}  // namespace

bool FunctionInfo::has_tag(std::string_view t) const {
  return std::find(tags.begin(), tags.end(), t) != tags.end();
}

const std::vector<FunctionInfo>& list_suite() {
  static const std::vector<FunctionInfo> suite = build_suite();
  return suite;
}

const FunctionInfo& function_info(int function_id) {
  for (const auto& f : list_suite())
    if (f.id == function_id) return f;
  throw UnknownFunction("unknown function id " + std::to_string(function_id));
}

namespace base {

double sphere(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

double ellipsoidal(std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    s += std::pow(1e6, ratio(i, x.size())) * x[i] * x[i];
  return s;
}

double rastrigin(std::span<const double> x) {
  double s = 10.0 * static_cast<double>(x.size());
  for (double v : x) s += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v);
  return s;
}

double rosenbrock(std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i] * x[i] - x[i + 1];
    const double b = x[i] - 1.0;
    s += 100.0 * a * a + b * b;
  }
  return s;
}

double discus(std::span<const double> x) {
  double s = 1e6 * x[0] * x[0];
  for (std::size_t i = 1; i < x.size(); ++i) s += x[i] * x[i];
  return s;
}

double bent_cigar(std::span<const double> x) {
  double tail = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) tail += x[i] * x[i];
  return x[0] * x[0] + 1e6 * tail;
}

double sharp_ridge(std::span<const double> x) {
  double tail = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) tail += x[i] * x[i];
  return x[0] * x[0] + 100.0 * std::sqrt(tail);
}

double different_powers(std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    s += std::pow(std::abs(x[i]), 2.0 + 4.0 * ratio(i, x.size()));
  return std::sqrt(s);
}

double schaffers_f7(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double si = std::sqrt(x[i] * x[i] + x[i + 1] * x[i + 1]);
    const double r = std::sqrt(si);
    const double w = std::sin(50.0 * std::pow(si, 0.2));
    s += r + r * w * w;
  }
  s /= static_cast<double>(x.size() - 1);
  return s * s;
}

double schwefel(std::span<const double> x) {
  static const double peak_value = kSchwefelPeak * std::sin(std::sqrt(kSchwefelPeak));
  double s = 0.0;
  for (double v : x) s += std::max(0.0, peak_value - v * std::sin(std::sqrt(std::abs(v))));
  return s / static_cast<double>(x.size());
}

}  // namespace base

Matrix random_rotation(std::size_t dimension, std::uint64_t seed) {
  Rng rng(seed);
  Matrix q(dimension, dimension);
  for (double& v : q.data()) v = rng.normal();
  // Rows become orthonormal.
  for (std::size_t i = 0; i < dimension; ++i) {
    auto ri = q.row(i);
    for (std::size_t j = 0; j < i; ++j) {
      auto rj = q.row(j);
      double dot = 0.0;
      for (std::size_t k = 0; k < dimension; ++k) dot += ri[k] * rj[k];
      for (std::size_t k = 0; k < dimension; ++k) ri[k] -= dot * rj[k];
    }
    double norm = 0.0;
    for (double v : ri) norm += v * v;
    norm = std::sqrt(norm);
    for (double& v : ri) v /= norm;
  }
  return q;
}

double TestFunction::evaluate(std::span<const double> x) const {
  if (x.size() != dimension())
    throw std::invalid_argument("evaluate: expected " + std::to_string(dimension()) +
                                " coordinates, got " + std::to_string(x.size()));
  if (!bounds_.contains(x)) throw OutOfBounds("evaluate: point outside the search box");

  const std::size_t d = dimension();
  Vector z(d);
  if (rotation_.empty()) {
    for (std::size_t i = 0; i < d; ++i) z[i] = x[i] - x_opt_[i];
  } else {
    Vector shifted(d);
    for (std::size_t i = 0; i < d; ++i) shifted[i] = x[i] - x_opt_[i];
    z = rotation_ * shifted;
  }
  if (!conditioning_.empty())
    for (std::size_t i = 0; i < d; ++i) z[i] *= conditioning_[i];

  double core = 0.0;
  switch (info_->id) {
    case 1: core = base::sphere(z); break;
    case 2: core = base::ellipsoidal(z); break;
    case 3: core = base::rastrigin(z); break;
    case 5: {
      // Linear ramp towards the corner x_opt = (+-4, ...); flat beyond it.
      for (std::size_t i = 0; i < d; ++i) {
        const double sign = x_opt_[i] > 0.0 ? 1.0 : -1.0;
        core += std::pow(10.0, ratio(i, d)) * std::max(0.0, -sign * z[i]);
      }
      break;
    }
    case 8:
    case 9: {
      const double c = std::max(1.0, std::sqrt(static_cast<double>(d)) / 8.0);
      for (double& v : z) v = c * v + 1.0;
      core = base::rosenbrock(z);
      break;
    }
    case 11: core = base::discus(z); break;
    case 12: core = base::bent_cigar(z); break;
    case 13: core = base::sharp_ridge(z); break;
    case 14: core = base::different_powers(z); break;
    case 17: core = base::schaffers_f7(z); break;
    case 20: {
      // Folded around x_opt so the whole box maps into [-500, 500].
      for (double& v : z) v = base::kSchwefelPeak - 100.0 * std::abs(v);
      core = base::schwefel(z);
      break;
    }
    default: throw UnknownFunction("unknown function id " + std::to_string(info_->id));
  }
  return core + f_opt_;
}

TestFunction make_instance(int function_id, std::size_t dimension, int instance_id) {
  const FunctionInfo& info = function_info(function_id);
  if (dimension < 2) throw std::invalid_argument("make_instance: dimension must be >= 2");

  TestFunction f;
  f.info_ = &info;
  f.instance_id_ = instance_id;
  f.bounds_ = BoxBounds::uniform(dimension, -kBoxHalfWidth, kBoxHalfWidth);

  const std::uint64_t seed =
      derive_seed(static_cast<std::uint64_t>(instance_id),
                  {tag(Stream::kInstance), static_cast<std::uint64_t>(function_id), dimension});
  Rng rng(seed);
  f.x_opt_.resize(dimension);
  for (double& v : f.x_opt_) {
    const double u = rng.uniform(-kShiftHalfWidth, kShiftHalfWidth);
    v = function_id == 5 ? (u >= 0.0 ? kShiftHalfWidth : -kShiftHalfWidth) : u;
  }
  f.f_opt_ = std::round(rng.uniform(-100.0, 100.0) * 100.0) / 100.0;
  if (info.rotated) f.rotation_ = random_rotation(dimension, rng.next_u64());
  if (function_id == 17) {
    f.conditioning_.resize(dimension);
    for (std::size_t i = 0; i < dimension; ++i)
      f.conditioning_[i] = std::pow(10.0, 0.5 * ratio(i, dimension));
  }
  return f;
}

}  // namespace smbo
