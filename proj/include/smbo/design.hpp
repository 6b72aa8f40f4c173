#pragma once

#include <cstdint>
#include <span>

#include "smbo/numerics.hpp"

namespace smbo {

/// Axis-aligned search box.
struct BoxBounds {
  Vector lower;
  Vector upper;

  /// Same [lo, hi] interval in every one of `dimension` coordinates.
  static BoxBounds uniform(std::size_t dimension, double lo, double hi);

  std::size_t dimension() const noexcept { return lower.size(); }
  bool contains(std::span<const double> x) const noexcept;
  /// Throws InvalidBounds unless sizes agree, d >= 1 and lower_i < upper_i.
  void validate() const;
};

/// Latin hypercube design of n points (one row per point). Each coordinate
/// uses an independent random permutation of the n strata with a uniform
/// offset inside each stratum.
Matrix latin_hypercube(std::size_t n, const BoxBounds& bounds, std::uint64_t seed);

/// n i.i.d. uniform points in the box.
Matrix uniform_random(std::size_t n, const BoxBounds& bounds, std::uint64_t seed);

}  // namespace smbo
