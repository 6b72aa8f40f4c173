#include "smbo/design.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "smbo/errors.hpp"
#include "smbo/rng.hpp"

namespace smbo {

BoxBounds BoxBounds::uniform(std::size_t dimension, double lo, double hi) {
  return {Vector(dimension, lo), Vector(dimension, hi)};
}

bool BoxBounds::contains(std::span<const double> x) const noexcept {
  if (x.size() != lower.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(x[i] >= lower[i] && x[i] <= upper[i])) return false;
  return true;
}

void BoxBounds::validate() const {
  if (lower.empty()) throw InvalidBounds("bounds have dimension 0");
  if (lower.size() != upper.size()) throw InvalidBounds("lower/upper dimension mismatch");
  for (std::size_t i = 0; i < lower.size(); ++i)
    if (!(std::isfinite(lower[i]) && std::isfinite(upper[i]) && lower[i] < upper[i]))
      throw InvalidBounds("bounds require finite lower_i < upper_i (i = " + std::to_string(i) + ")");
}

namespace {

// Maps u in [0,1) into the open interval (lo, hi).
double scale_into(double lo, double hi, double u) {
  double v = lo + (hi - lo) * u;
  if (v >= hi) v = std::nextafter(hi, lo);
  if (v <= lo) v = std::nextafter(lo, hi);
  return v;
}

}  // namespace

Matrix latin_hypercube(std::size_t n, const BoxBounds& bounds, std::uint64_t seed) {
  bounds.validate();
  if (n == 0) throw std::invalid_argument("latin_hypercube: n must be positive");
  const std::size_t d = bounds.dimension();
  Rng rng(seed);
  Matrix points(n, d);
  std::vector<std::size_t> perm(n);
  for (std::size_t j = 0; j < d; ++j) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(perm));
    const double width = (bounds.upper[j] - bounds.lower[j]) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double lo = bounds.lower[j] + width * static_cast<double>(perm[i]);
      const double hi = (perm[i] + 1 == n) ? bounds.upper[j] : lo + width;
      points(i, j) = scale_into(lo, hi, rng.uniform());
    }
  }
  return points;
}

Matrix uniform_random(std::size_t n, const BoxBounds& bounds, std::uint64_t seed) {
  bounds.validate();
  if (n == 0) throw std::invalid_argument("uniform_random: n must be positive");
  const std::size_t d = bounds.dimension();
  Rng rng(seed);
  Matrix points(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j)
      points(i, j) = scale_into(bounds.lower[j], bounds.upper[j], rng.uniform());
  return points;
}

}  // namespace smbo
