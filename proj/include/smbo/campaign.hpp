#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smbo/analysis.hpp"
#include "smbo/smbo.hpp"

namespace smbo {

/// A grid of runs: functions x dimensions x instances x criteria x repeats.
///
/// JSON schema (all keys optional except "functions", "dimensions",
/// "criteria" and "output_dir"):
///   {
///     "functions": [3, 13],            // suite ids
///     "dimensions": [2, 10],
///     "instances": [1, 2, 3],          // default 1..15
///     "criteria": ["ei", "pm"],        // "ei" | "pm" | "random"
///     "repeats": 1,                    // per instance
///     "total_budget": 300,
///     "initial_design_size": 10,
///     "base_seed": 0,
///     "workers": 1,
///     "output_dir": "runs",
///     "mle_evaluations_per_parameter": 500,
///     "infill_evaluations_per_dimension": 1000,
///     "record_wall_time": true
///   }
struct CampaignConfig {
  std::vector<int> functions;
  std::vector<std::size_t> dimensions;
  std::vector<int> instances;
  std::vector<InfillCriterion> criteria;
  std::size_t repeats = 1;
  std::size_t total_budget = 300;
  std::size_t initial_design_size = 10;
  std::uint64_t base_seed = 0;
  std::size_t workers = 1;
  std::filesystem::path output_dir = "runs";
  std::size_t mle_evaluations_per_parameter = 500;
  std::size_t infill_evaluations_per_dimension = kDefaultInfillEvaluationsPerDimension;
  bool record_wall_time = true;

  /// Throws ConfigParseError for malformed values and UnknownFunction for
  /// ids outside the suite.
  void validate() const;
};

/// Throws ConfigParseError.
CampaignConfig parse_campaign_config(std::string_view json_text);
CampaignConfig read_campaign_config(const std::filesystem::path& path);
std::string to_json(const CampaignConfig& config);

/// Environment variable that caps the worker count.
inline constexpr const char* kMaxWorkersEnv = "SMBO_MAX_WORKERS";
/// min(config.workers, $SMBO_MAX_WORKERS), at least 1.
std::size_t effective_workers(const CampaignConfig& config);

/// Seed of one run. The criterion is deliberately not part of the
/// derivation, so all criteria on the same (function, dimension, instance,
/// repeat) start from the same initial design.
std::uint64_t run_seed(std::uint64_t base_seed, int function_id, std::size_t dimension, int instance_id,
                       std::size_t repeat);

/// Expands the grid in a fixed order.
std::vector<RunConfig> plan_runs(const CampaignConfig& config);

struct ManifestEntry {
  std::string file;
  int function_id = 0;
  std::size_t dimension = 0;
  int instance_id = 0;
  InfillCriterion criterion = InfillCriterion::kExpectedImprovement;
  std::uint64_t seed = 0;
  std::size_t total_budget = 0;
  std::size_t fallback_iterations = 0;

  friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

inline constexpr const char* kManifestFile = "manifest.json";
std::string manifest_to_json(const std::vector<ManifestEntry>& entries);
std::vector<ManifestEntry> parse_manifest(std::string_view json_text);
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);

struct CampaignSummary {
  std::size_t planned = 0;
  std::size_t executed = 0;
  std::size_t skipped = 0;
};

/// Executes every planned run not already on disk (all of them when
/// `force`), writing one CSV per run and keeping manifest.json in sync.
/// `progress`, if set, is called after each finished run (serialized).
CampaignSummary run_campaign(const CampaignConfig& config, bool force,
                             const std::function<void(const RunLog&)>& progress = {});

/// Reads every run CSV in `dir` (file names as produced by run_file_name).
std::vector<RunLog> read_run_logs(const std::filesystem::path& dir);

struct AnalysisOutputs {
  std::vector<DominationCell> domination;
  std::vector<QuartileCurve> curves;
  std::string summary;
};

/// Domination matrix plus best-gap and nn-distance curves for the logs in
/// `log_dir`; writes domination.csv and curves.csv into `output_dir`.
AnalysisOutputs analyze_directory(const std::filesystem::path& log_dir, double alpha,
                                  const std::filesystem::path& output_dir);

/// Text table: per dimension, the count of EI / PM / none cells per checkpoint.
std::string domination_summary(std::span<const DominationCell> cells);

}  // namespace smbo
