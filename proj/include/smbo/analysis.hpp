#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smbo/infill.hpp"
#include "smbo/smbo.hpp"

namespace smbo {

// ---------------------------------------------------------------------------
// Wilcoxon rank-sum (Mann-Whitney) test
// ---------------------------------------------------------------------------

enum class Alternative {
  kTwoSided,
  /// a is stochastically smaller than b
  kLess,
  /// a is stochastically larger than b
  kGreater,
};

struct RankSumResult {
  /// W = (rank sum of a) - |a| (|a| + 1) / 2, in [0, |a| |b|].
  double statistic = 0.0;
  double p_value = 1.0;
  bool exact = false;
};

/// Sample sizes with |a| + |b| at or below this use the exact null
/// distribution when there are no ties.
inline constexpr std::size_t kExactRankSumLimit = 16;

/// Exact when |a| + |b| <= 16 and there are no ties; otherwise the normal
/// approximation with tie-corrected variance and a 0.5 continuity
/// correction. Throws EmptySample.
RankSumResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b,
                                Alternative alternative = Alternative::kTwoSided);

/// P(W <= w) under H0 for sample sizes m and n (no ties).
double rank_sum_exact_cdf(std::size_t m, std::size_t n, double w);

// ---------------------------------------------------------------------------
// Aggregation over run logs
// ---------------------------------------------------------------------------

/// Evaluation counts at which runs are compared (geometric from the end of
/// a 10-point design up to 300 evaluations).
inline constexpr std::array<std::size_t, 13> kDefaultCheckpoints{10, 13, 18, 24, 32, 43, 57,
                                                                 76, 101, 135, 180, 240, 300};

/// Value of a per-iteration field after `checkpoint` evaluations. Runs
/// shorter than the checkpoint contribute their final record.
enum class CurveField { kBestGap, kNnDistance };
std::string_view to_string(CurveField f) noexcept;
std::optional<double> value_at_checkpoint(const RunLog& log, CurveField field, std::size_t checkpoint);

enum class Winner { kEI, kPM, kNone };
std::string_view to_string(Winner w) noexcept;
std::optional<Winner> parse_winner(std::string_view text) noexcept;

struct DominationCell {
  int function_id = 0;
  std::size_t dimension = 0;
  std::size_t checkpoint = 0;
  Winner winner = Winner::kNone;
  double p_value = 1.0;

  friend bool operator==(const DominationCell&, const DominationCell&) = default;
};

/// Two-sided rank-sum test of per-run best_gap values (EI vs PM) for each
/// (function, dimension) group and checkpoint. A criterion wins a cell when
/// p < alpha and its median is strictly smaller. Groups with neither EI nor
/// PM runs are ignored; a group with fewer than 2 runs of either criterion,
/// or no comparable group at all, throws InsufficientRuns.
std::vector<DominationCell> domination_matrix(
    std::span<const RunLog> logs, double alpha = 0.05,
    std::span<const std::size_t> checkpoints = kDefaultCheckpoints);

struct QuartileCurve {
  /// "f{id}_d{dim}_{criterion}"
  std::string group;
  CurveField field = CurveField::kBestGap;
  std::vector<std::size_t> checkpoints;
  Vector median;
  Vector lower_quartile;
  Vector upper_quartile;
};

/// Sample quantile by linear interpolation between order statistics:
/// h = (n - 1) q, value = x[floor h] + (h - floor h) (x[floor h + 1] - x[floor h]).
double quantile(std::vector<double> values, double q);

/// Median and quartiles across the runs of each (function, dimension,
/// criterion) group. Throws InsufficientRuns if any group has fewer than 2 runs.
std::vector<QuartileCurve> quartile_curves(std::span<const RunLog> logs, CurveField field,
                                           std::span<const std::size_t> checkpoints = kDefaultCheckpoints);

/// Median of `field` over iterations [first, last] of all runs in a group
/// pooled together. Used for the exploration comparison.
double pooled_median(std::span<const RunLog> logs, CurveField field, std::size_t first, std::size_t last);

std::string group_name(int function_id, std::size_t dimension, InfillCriterion criterion);

// ---------------------------------------------------------------------------
// CSV artifacts
// ---------------------------------------------------------------------------

/// function_id,dimension,checkpoint,winner,p_value
std::string domination_to_csv(std::span<const DominationCell> cells);
std::vector<DominationCell> parse_domination_csv(std::string_view csv);

/// group,checkpoint,median,q1,q3 with group = "{group}/{field}".
std::string curves_to_csv(std::span<const QuartileCurve> curves);
std::vector<QuartileCurve> parse_curves_csv(std::string_view csv);

// ---------------------------------------------------------------------------
// Criterion advice
// ---------------------------------------------------------------------------

enum class ModalityHint { kUnimodal, kMultimodal, kUnknown };
std::optional<ModalityHint> parse_modality(std::string_view text) noexcept;

/// Budget below which the exploitative criterion is preferred.
inline constexpr std::size_t kCriticalBudget = 70;

struct Recommendation {
  InfillCriterion criterion = InfillCriterion::kPredictedValue;
  std::string rationale;
};

/// Rule set, first match wins:
///   d >= 5 -> PM; unimodal -> PM; budget < 70 -> PM; d <= 3 -> EI;
///   d == 4 -> EI if multimodal, else PM.
Recommendation recommend_criterion(std::size_t dimension, std::size_t budget, ModalityHint modality);

}  // namespace smbo
