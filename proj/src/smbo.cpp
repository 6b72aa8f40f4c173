#include "smbo/smbo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "smbo/design.hpp"
#include "smbo/errors.hpp"
#include "smbo/kriging.hpp"
#include "smbo/rng.hpp"
#include "smbo/testbed.hpp"

namespace smbo {

void RunConfig::validate() const {
  function_info(function_id);
  if (dimension < 2) throw std::invalid_argument("RunConfig: dimension must be >= 2");
  if (initial_design_size < 1) throw std::invalid_argument("RunConfig: initial design must be non-empty");
  if (initial_design_size >= total_budget)
    throw std::invalid_argument("RunConfig: initial_design_size must be below total_budget");
  if (mle_evaluations_per_parameter == 0 || infill_evaluations_per_dimension == 0)
    throw std::invalid_argument("RunConfig: inner budgets must be positive");
}

double nearest_neighbor_distance(const Matrix& known, std::size_t count, std::span<const double> x) {
  if (count == 0) throw EmptyArchive("nearest_neighbor_distance: no evaluated points");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) {
    const auto row = known.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      const double diff = x[j] - row[j];
      s += diff * diff;
    }
    best = std::min(best, s);
  }
  return std::sqrt(best);
}

double nearest_neighbor_distance(const Matrix& known, std::span<const double> x) {
  return nearest_neighbor_distance(known, known.rows(), x);
}

RunLog run(const RunConfig& config) {
  config.validate();
  const TestFunction problem = make_instance(config.function_id, config.dimension, config.instance_id);
  const BoxBounds& bounds = problem.bounds();

  RunLog log;
  log.config = config;
  log.records.reserve(config.total_budget);

  Dataset data;
  double best = std::numeric_limits<double>::infinity();
  using Clock = std::chrono::steady_clock;

  auto record = [&](std::span<const double> x, std::optional<double> nn, std::optional<double> nll,
                    Clock::time_point started) {
    const double y = problem.evaluate(x);
    ++log.counters.objective_evaluations;
    best = std::min(best, y);
    data.x.append_row(x);
    data.y.push_back(y);

    IterationRecord r;
    r.iteration = log.records.size() + 1;
    r.x.assign(x.begin(), x.end());
    r.y = y;
    r.gap = y - problem.f_opt();
    r.best_so_far = best;
    r.best_gap = best - problem.f_opt();
    r.nn_distance = nn;
    r.model_nll = nll;
    if (config.record_wall_time)
      r.wall_time_ms = std::chrono::duration<double, std::milli>(Clock::now() - started).count();
    log.records.push_back(std::move(r));
  };

  {
    const auto started = Clock::now();
    const Matrix design =
        latin_hypercube(config.initial_design_size, bounds, derive_seed(config.seed, {tag(Stream::kLatinHypercube)}));
    for (std::size_t i = 0; i < design.rows(); ++i) {
      std::optional<double> nn;
      if (i > 0) nn = nearest_neighbor_distance(data.x, design.row(i));
      record(design.row(i), nn, std::nullopt, i == 0 ? started : Clock::now());
    }
  }

  const FitOptions fit_options{config.mle_evaluations_per_parameter};
  const ProposeOptions propose_options{config.infill_evaluations_per_dimension};
  for (std::size_t k = config.initial_design_size + 1; k <= config.total_budget; ++k) {
    const auto started = Clock::now();
    std::optional<double> nll;
    Proposal proposal;
    if (config.infill == InfillCriterion::kRandomSearch) {
      proposal = propose(nullptr, InfillCriterion::kRandomSearch, bounds, best,
                         derive_seed(config.seed, {tag(Stream::kRandomProposal), k}));
    } else {
      std::optional<KrigingModel> model;
      try {
        model = fit(data, derive_seed(config.seed, {tag(Stream::kLikelihoodFit), k}), fit_options);
      } catch (const DegenerateData&) {
      } catch (const NotPositiveDefinite&) {
      }
      if (model) {
        log.counters.likelihood_evaluations_per_fit.push_back(model->likelihood_evaluations());
        nll = model->neg_log_likelihood();
        proposal = propose(&*model, config.infill, bounds, best,
                           derive_seed(config.seed, {tag(Stream::kInfill), k}), propose_options);
        log.counters.model_evaluations_per_proposal.push_back(proposal.model_evaluations);
      } else {
        ++log.fallback_iterations;
        proposal = propose(nullptr, InfillCriterion::kRandomSearch, bounds, best,
                           derive_seed(config.seed, {tag(Stream::kRandomProposal), k}));
      }
    }
    const double nn = nearest_neighbor_distance(data.x, proposal.x);
    record(proposal.x, nn, nll, started);
  }
  return log;
}

}  // namespace smbo
