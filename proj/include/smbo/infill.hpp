#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "smbo/design.hpp"
#include "smbo/kriging.hpp"

namespace smbo {

enum class InfillCriterion { kPredictedValue, kExpectedImprovement, kRandomSearch };

/// Short name used in file names, logs and CLI flags: "pm", "ei", "random".
std::string_view to_string(InfillCriterion c) noexcept;
std::optional<InfillCriterion> parse_criterion(std::string_view text) noexcept;

/// Lower is better.
inline double predicted_value_score(const KrigingModel& model, std::span<const double> x) {
  return model.predict_mean(x);
}

/// Closed-form expected improvement of N(mean, sd^2) over y_best:
/// (y_best - m) Phi(z) + s phi(z), z = (y_best - m) / s; for s < 1e-12 the
/// deterministic value max(y_best - m, 0). Never negative.
double expected_improvement(double mean, double sd, double y_best) noexcept;

/// Higher is better.
double expected_improvement(const KrigingModel& model, std::span<const double> x, double y_best);

/// Per-dimension model-evaluation budget of propose().
inline constexpr std::size_t kDefaultInfillEvaluationsPerDimension = 1000;

struct ProposeOptions {
  std::size_t evaluations_per_dimension = kDefaultInfillEvaluationsPerDimension;
};

struct Proposal {
  Vector x;
  /// Surrogate evaluations spent: evaluations_per_dimension * d for the
  /// model-based criteria, 0 for random search.
  std::size_t model_evaluations = 0;
};

/// Optimizes the criterion over the box with differential evolution
/// (minimizing the predicted mean, or -EI); random search draws one
/// uniform point and ignores `model`, which may then be null.
Proposal propose(const KrigingModel* model, InfillCriterion criterion, const BoxBounds& bounds,
                 double y_best, std::uint64_t seed, const ProposeOptions& options = {});

}  // namespace smbo
