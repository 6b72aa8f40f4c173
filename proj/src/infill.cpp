#include "smbo/infill.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "smbo/de_optimizer.hpp"
#include "smbo/numerics.hpp"

namespace smbo {

std::string_view to_string(InfillCriterion c) noexcept {
  switch (c) {
    case InfillCriterion::kPredictedValue: return "pm";
    case InfillCriterion::kExpectedImprovement: return "ei";
    case InfillCriterion::kRandomSearch: return "random";
  }
  return "unknown";
}

std::optional<InfillCriterion> parse_criterion(std::string_view text) noexcept {
  if (text == "pm") return InfillCriterion::kPredictedValue;
  if (text == "ei") return InfillCriterion::kExpectedImprovement;
  if (text == "random") return InfillCriterion::kRandomSearch;
  return std::nullopt;
}

double expected_improvement(double mean, double sd, double y_best) noexcept {
  const double improvement = y_best - mean;
  if (!(sd >= 1e-12)) return std::max(improvement, 0.0);
  const double z = improvement / sd;
  const double ei = improvement * standard_normal_cdf(z) + sd * standard_normal_pdf(z);
  return std::max(ei, 0.0);
}

double expected_improvement(const KrigingModel& model, std::span<const double> x, double y_best) {
  const Prediction p = model.predict(x);
  return expected_improvement(p.mean, std::sqrt(p.variance), y_best);
}

Proposal propose(const KrigingModel* model, InfillCriterion criterion, const BoxBounds& bounds,
                 double y_best, std::uint64_t seed, const ProposeOptions& options) {
  bounds.validate();
  Proposal out;
  if (criterion == InfillCriterion::kRandomSearch) {
    const Matrix point = uniform_random(1, bounds, seed);
    out.x.assign(point.row(0).begin(), point.row(0).end());
    return out;
  }
  if (model == nullptr) throw std::invalid_argument("propose: model-based criterion needs a model");

  Objective objective;
  if (criterion == InfillCriterion::kPredictedValue) {
    objective = [model](std::span<const double> x) { return predicted_value_score(*model, x); };
  } else {
    objective = [model, y_best](std::span<const double> x) {
      return -expected_improvement(*model, x, y_best);
    };
  }
  const std::size_t d = bounds.dimension();
  const DEResult best =
      minimize(objective, bounds, DEConfig::defaults(d, options.evaluations_per_dimension * d, seed));
  out.x = best.x_best;
  out.model_evaluations = best.evaluations_used;
  return out;
}

}  // namespace smbo
