#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smbo/infill.hpp"
#include "smbo/numerics.hpp"

namespace smbo {

/// One optimization run on one benchmark instance.
struct RunConfig {
  int function_id = 1;
  std::size_t dimension = 2;
  int instance_id = 1;
  InfillCriterion infill = InfillCriterion::kExpectedImprovement;
  std::size_t total_budget = 300;
  std::size_t initial_design_size = 10;
  std::uint64_t seed = 0;
  /// MLE budget factor (evaluations per hyperparameter).
  std::size_t mle_evaluations_per_parameter = 500;
  std::size_t infill_evaluations_per_dimension = kDefaultInfillEvaluationsPerDimension;
  /// When false, wall_time_ms is logged as 0 and the log is fully reproducible.
  bool record_wall_time = true;

  void validate() const;
};

struct IterationRecord {
  std::size_t iteration = 0;  // 1-based evaluation index
  Vector x;
  double y = 0.0;
  double gap = 0.0;  // y - f_opt
  double best_so_far = 0.0;
  double best_gap = 0.0;
  /// Distance to the nearest earlier point; absent for the first evaluation.
  std::optional<double> nn_distance;
  /// Fitted negative log-likelihood; absent for design points and random proposals.
  std::optional<double> model_nll;
  double wall_time_ms = 0.0;
};

/// Evaluation counters of one run.
struct RunCounters {
  std::size_t objective_evaluations = 0;
  std::vector<std::size_t> likelihood_evaluations_per_fit;
  std::vector<std::size_t> model_evaluations_per_proposal;
};

struct RunLog {
  RunConfig config;
  std::vector<IterationRecord> records;
  /// Iterations where the data were degenerate (constant y) and a random
  /// proposal replaced the model-based one.
  std::size_t fallback_iterations = 0;
  RunCounters counters;
};

/// Runs the full loop: an LHS initial design, then per iteration a fresh
/// Kriging fit on all data, one proposal and one evaluation. Sub-seeds are
///   LHS:            derive_seed(seed, {kLatinHypercube})
///   fit at k:       derive_seed(seed, {kLikelihoodFit, k})
///   infill at k:    derive_seed(seed, {kInfill, k})
///   random at k:    derive_seed(seed, {kRandomProposal, k})
/// with k the 1-based evaluation index.
RunLog run(const RunConfig& config);

/// min_k |x - known_k|_2 over the rows of `known`. Throws EmptyArchive.
double nearest_neighbor_distance(const Matrix& known, std::span<const double> x);
/// Same, restricted to the first `count` rows.
double nearest_neighbor_distance(const Matrix& known, std::size_t count, std::span<const double> x);

/// f{id}_d{dim}_i{inst}_{criterion}_s{seed}.csv
std::string run_file_name(const RunConfig& config);

/// Serializes the log as CSV with 17 significant digits per float.
std::string to_csv(const RunLog& log);
void write_run_log(const RunLog& log, const std::filesystem::path& path);

/// Parses a run CSV. The configuration fields encoded in the file name are
/// restored when `file_name` follows run_file_name(); total_budget becomes
/// the record count. Throws IoError / ConfigParseError.
RunLog parse_run_log(std::string_view csv, std::string_view file_name = {});
RunLog read_run_log(const std::filesystem::path& path);

/// Formats a double with 17 significant digits.
std::string format_double(double v);

}  // namespace smbo
