#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "smbo/design.hpp"

namespace smbo {

/// DE/rand/1/bin settings. `budget` is the exact number of objective
/// evaluations, initial population included.
struct DEConfig {
  std::size_t population_size = 40;
  double differential_weight = 0.8;
  double crossover_rate = 0.9;
  std::size_t budget = 1000;
  std::uint64_t seed = 0;

  /// Canonical defaults with population = min(10 d, 50).
  static DEConfig defaults(std::size_t dimension, std::size_t budget, std::uint64_t seed);
  void validate() const;
};

struct DEResult {
  Vector x_best;
  double f_best = 0.0;
  std::size_t evaluations_used = 0;
  /// Incumbent value after the initial population and after each generation.
  Vector generation_best;
};

/// Value assigned to an objective that returns NaN or infinity.
inline constexpr double kNonFinitePenalty = 1e10;

using Objective = std::function<double(std::span<const double>)>;

/// Differential evolution, DE/rand/1/bin. Trial components that leave the
/// box are clamped to the violated bound. Trials are evaluated in member
/// order and the search stops exactly when the budget is spent, which may
/// be mid-generation. Returns the best point ever evaluated.
DEResult minimize(const Objective& objective, const BoxBounds& bounds, const DEConfig& config);

}  // namespace smbo
