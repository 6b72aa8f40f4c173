#include "smbo/de_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "smbo/rng.hpp"

namespace smbo {

DEConfig DEConfig::defaults(std::size_t dimension, std::size_t budget, std::uint64_t seed) {
  DEConfig c;
  c.population_size = std::min<std::size_t>(10 * dimension, 50);
  c.population_size = std::max<std::size_t>(c.population_size, 4);
  c.budget = budget;
  c.seed = seed;
  return c;
}

void DEConfig::validate() const {
  if (population_size < 4) throw std::invalid_argument("DEConfig: population_size must be >= 4");
  if (budget < population_size) throw std::invalid_argument("DEConfig: budget < population_size");
  if (!(differential_weight > 0.0 && differential_weight <= 2.0))
    throw std::invalid_argument("DEConfig: differential_weight must be in (0, 2]");
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0))
    throw std::invalid_argument("DEConfig: crossover_rate must be in [0, 1]");
}

DEResult minimize(const Objective& objective, const BoxBounds& bounds, const DEConfig& config) {
  bounds.validate();
  config.validate();
  const std::size_t d = bounds.dimension();
  const std::size_t np = config.population_size;
  Rng rng(config.seed);

  DEResult result;
  result.f_best = INFINITY;
  auto evaluate = [&](std::span<const double> x) {
    double f = objective(x);
    if (!std::isfinite(f)) f = kNonFinitePenalty;
    ++result.evaluations_used;
    if (f < result.f_best) {
      result.f_best = f;
      result.x_best.assign(x.begin(), x.end());
    }
    return f;
  };

  Matrix population = uniform_random(np, bounds, rng.next_u64());
  Vector fitness(np);
  for (std::size_t i = 0; i < np; ++i) fitness[i] = evaluate(population.row(i));
  result.generation_best.push_back(result.f_best);

  Vector trial(d);
  while (result.evaluations_used < config.budget) {
    for (std::size_t i = 0; i < np && result.evaluations_used < config.budget; ++i) {
      std::size_t r1, r2, r3;
      do r1 = rng.below(np); while (r1 == i);
      do r2 = rng.below(np); while (r2 == i || r2 == r1);
      do r3 = rng.below(np); while (r3 == i || r3 == r1 || r3 == r2);
      const std::size_t forced = rng.below(d);
      const auto target = population.row(i);
      const auto a = population.row(r1);
      const auto b = population.row(r2);
      const auto c = population.row(r3);
      for (std::size_t j = 0; j < d; ++j) {
        if (j == forced || rng.uniform() < config.crossover_rate) {
          const double v = a[j] + config.differential_weight * (b[j] - c[j]);
          trial[j] = std::clamp(v, bounds.lower[j], bounds.upper[j]);
        } else {
          trial[j] = target[j];
        }
      }
      const double f = evaluate(trial);
      // Immediate replacement: later members of this sweep already see the
      // improved vector.
      if (f <= fitness[i]) {
        std::copy(trial.begin(), trial.end(), population.row(i).begin());
        fitness[i] = f;
      }
    }
    result.generation_best.push_back(result.f_best);
  }
  return result;
}

}  // namespace smbo
