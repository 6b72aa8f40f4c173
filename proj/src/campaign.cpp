#include "smbo/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "smbo/errors.hpp"
#include "smbo/rng.hpp"
#include "smbo/testbed.hpp"

namespace smbo {

using nlohmann::json;

namespace {

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_atomically(const std::filesystem::path& path, const std::string& text) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << text;
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<T>();
}

}  // namespace

void CampaignConfig::validate() const {
  if (functions.empty()) throw ConfigParseError("campaign: 'functions' must not be empty");
  if (dimensions.empty()) throw ConfigParseError("campaign: 'dimensions' must not be empty");
  if (instances.empty()) throw ConfigParseError("campaign: 'instances' must not be empty");
  if (criteria.empty()) throw ConfigParseError("campaign: 'criteria' must not be empty");
  for (int f : functions) function_info(f);
  for (std::size_t d : dimensions)
    if (d < 2) throw ConfigParseError("campaign: dimensions must be >= 2");
  for (int i : instances)
    if (i < 1) throw ConfigParseError("campaign: instance ids must be >= 1");
  if (repeats < 1) throw ConfigParseError("campaign: 'repeats' must be >= 1");
  if (workers < 1) throw ConfigParseError("campaign: 'workers' must be >= 1");
  if (initial_design_size < 1 || initial_design_size >= total_budget)
    throw ConfigParseError("campaign: need 1 <= initial_design_size < total_budget");
  if (mle_evaluations_per_parameter < 1 || infill_evaluations_per_dimension < 1)
    throw ConfigParseError("campaign: inner budgets must be positive");
  if (output_dir.empty()) throw ConfigParseError("campaign: 'output_dir' must not be empty");
}

CampaignConfig parse_campaign_config(std::string_view json_text) {
  CampaignConfig c;
  try {
    const json j = json::parse(json_text);
    if (!j.is_object()) throw ConfigParseError("campaign config must be a JSON object");
    static const std::set<std::string> known{
        "functions", "dimensions", "instances", "criteria", "repeats", "total_budget",
        "initial_design_size", "base_seed", "workers", "output_dir", "mle_evaluations_per_parameter",
        "infill_evaluations_per_dimension", "record_wall_time"};
    for (const auto& [key, value] : j.items())
      if (!known.contains(key)) throw ConfigParseError("campaign config: unknown key '" + key + "'");

    c.functions = j.at("functions").get<std::vector<int>>();
    c.dimensions = j.at("dimensions").get<std::vector<std::size_t>>();
    if (j.contains("instances")) {
      c.instances = j.at("instances").get<std::vector<int>>();
    } else {
      for (int i = 1; i <= kInstancesPerFunction; ++i) c.instances.push_back(i);
    }
    for (const auto& name : j.at("criteria").get<std::vector<std::string>>()) {
      const auto parsed = parse_criterion(name);
      if (!parsed) throw ConfigParseError("campaign config: unknown criterion '" + name + "'");
      c.criteria.push_back(*parsed);
    }
    c.repeats = get_or<std::size_t>(j, "repeats", c.repeats);
    c.total_budget = get_or<std::size_t>(j, "total_budget", c.total_budget);
    c.initial_design_size = get_or<std::size_t>(j, "initial_design_size", c.initial_design_size);
    c.base_seed = get_or<std::uint64_t>(j, "base_seed", c.base_seed);
    c.workers = get_or<std::size_t>(j, "workers", c.workers);
    c.output_dir = get_or<std::string>(j, "output_dir", c.output_dir.string());
    c.mle_evaluations_per_parameter =
        get_or<std::size_t>(j, "mle_evaluations_per_parameter", c.mle_evaluations_per_parameter);
    c.infill_evaluations_per_dimension =
        get_or<std::size_t>(j, "infill_evaluations_per_dimension", c.infill_evaluations_per_dimension);
    c.record_wall_time = get_or<bool>(j, "record_wall_time", c.record_wall_time);
  } catch (const json::exception& e) {
    throw ConfigParseError(std::string("campaign config: ") + e.what());
  }
  return c;
}

CampaignConfig read_campaign_config(const std::filesystem::path& path) {
  return parse_campaign_config(read_text(path));
}

std::string to_json(const CampaignConfig& c) {
  json j;
  j["functions"] = c.functions;
  j["dimensions"] = c.dimensions;
  j["instances"] = c.instances;
  std::vector<std::string> criteria;
  for (auto k : c.criteria) criteria.emplace_back(to_string(k));
  j["criteria"] = criteria;
  j["repeats"] = c.repeats;
  j["total_budget"] = c.total_budget;
  j["initial_design_size"] = c.initial_design_size;
  j["base_seed"] = c.base_seed;
  j["workers"] = c.workers;
  j["output_dir"] = c.output_dir.string();
  j["mle_evaluations_per_parameter"] = c.mle_evaluations_per_parameter;
  j["infill_evaluations_per_dimension"] = c.infill_evaluations_per_dimension;
  j["record_wall_time"] = c.record_wall_time;
  return j.dump(2) + "\n";
}

std::size_t effective_workers(const CampaignConfig& config) {
  std::size_t workers = config.workers;
  if (const char* cap = std::getenv(kMaxWorkersEnv)) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(cap, &end, 10);
    if (end != cap && *end == '\0' && v > 0) workers = std::min<std::size_t>(workers, v);
  }
  return std::max<std::size_t>(workers, 1);
}

std::uint64_t run_seed(std::uint64_t base_seed, int function_id, std::size_t dimension, int instance_id,
                       std::size_t repeat) {
  return derive_seed(base_seed, {tag(Stream::kRun), static_cast<std::uint64_t>(function_id), dimension,
                                 static_cast<std::uint64_t>(instance_id), repeat});
}

std::vector<RunConfig> plan_runs(const CampaignConfig& config) {
  std::vector<RunConfig> runs;
  for (int f : config.functions)
    for (std::size_t d : config.dimensions)
      for (int inst : config.instances)
        for (std::size_t rep = 0; rep < config.repeats; ++rep)
          for (InfillCriterion crit : config.criteria) {
            RunConfig r;
            r.function_id = f;
            r.dimension = d;
            r.instance_id = inst;
            r.infill = crit;
            r.total_budget = config.total_budget;
            r.initial_design_size = config.initial_design_size;
            r.seed = run_seed(config.base_seed, f, d, inst, rep);
            r.mle_evaluations_per_parameter = config.mle_evaluations_per_parameter;
            r.infill_evaluations_per_dimension = config.infill_evaluations_per_dimension;
            r.record_wall_time = config.record_wall_time;
            runs.push_back(r);
          }
  return runs;
}

std::string manifest_to_json(const std::vector<ManifestEntry>& entries) {
  json runs = json::array();
  for (const auto& e : entries) {
    runs.push_back({{"file", e.file},
                    {"function_id", e.function_id},
                    {"dimension", e.dimension},
                    {"instance_id", e.instance_id},
                    {"criterion", std::string(to_string(e.criterion))},
                    {"seed", e.seed},
                    {"total_budget", e.total_budget},
                    {"fallback_iterations", e.fallback_iterations}});
  }
  return json{{"runs", runs}}.dump(2) + "\n";
}

std::vector<ManifestEntry> parse_manifest(std::string_view json_text) {
  std::vector<ManifestEntry> entries;
  try {
    const json j = json::parse(json_text);
    for (const auto& r : j.at("runs")) {
      ManifestEntry e;
      e.file = r.at("file").get<std::string>();
      e.function_id = r.at("function_id").get<int>();
      e.dimension = r.at("dimension").get<std::size_t>();
      e.instance_id = r.at("instance_id").get<int>();
      const auto crit = parse_criterion(r.at("criterion").get<std::string>());
      if (!crit) throw ConfigParseError("manifest: unknown criterion");
      e.criterion = *crit;
      e.seed = r.at("seed").get<std::uint64_t>();
      e.total_budget = r.at("total_budget").get<std::size_t>();
      e.fallback_iterations = r.at("fallback_iterations").get<std::size_t>();
      entries.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw ConfigParseError(std::string("manifest: ") + e.what());
  }
  return entries;
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  return parse_manifest(read_text(path));
}

namespace {

ManifestEntry entry_for(const RunConfig& config, std::size_t fallback_iterations) {
  return {run_file_name(config), config.function_id, config.dimension, config.instance_id, config.infill,
          config.seed, config.total_budget, fallback_iterations};
}

// A previously written log counts as complete when it parses and holds the
// full budget.
bool completed_log_exists(const std::filesystem::path& path, std::size_t budget) {
  if (!std::filesystem::exists(path)) return false;
  try {
    return read_run_log(path).records.size() == budget;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

CampaignSummary run_campaign(const CampaignConfig& config, bool force,
                             const std::function<void(const RunLog&)>& progress) {
  config.validate();
  const std::vector<RunConfig> plan = plan_runs(config);

  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec) throw IoError("cannot create " + config.output_dir.string() + ": " + ec.message());

  const std::filesystem::path manifest_path = config.output_dir / kManifestFile;
  std::map<std::string, ManifestEntry> manifest;
  if (std::filesystem::exists(manifest_path)) {
    try {
      for (auto& e : read_manifest(manifest_path)) manifest[e.file] = e;
    } catch (const ConfigParseError&) {
      manifest.clear();  // rebuilt below from the runs of this campaign
    }
  }

  auto write_manifest = [&] {
    std::vector<ManifestEntry> entries;
    for (const auto& [file, e] : manifest)
      if (std::filesystem::exists(config.output_dir / file)) entries.push_back(e);
    write_text_atomically(manifest_path, manifest_to_json(entries));
  };

  CampaignSummary summary;
  summary.planned = plan.size();
  std::vector<const RunConfig*> pending;
  for (const RunConfig& r : plan) {
    if (!force && completed_log_exists(config.output_dir / run_file_name(r), r.total_budget)) {
      ++summary.skipped;
      if (!manifest.contains(run_file_name(r))) manifest[run_file_name(r)] = entry_for(r, 0);
    } else {
      pending.push_back(&r);
    }
  }

  std::mutex mutex;  // guards manifest, summary, progress and first_error
  std::exception_ptr first_error;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= pending.size()) return;
      {
        std::lock_guard lock(mutex);
        if (first_error) return;
      }
      try {
        const RunConfig& cfg = *pending[i];
        const RunLog log = run(cfg);
        write_run_log(log, config.output_dir / run_file_name(cfg));
        std::lock_guard lock(mutex);
        manifest[run_file_name(cfg)] = entry_for(cfg, log.fallback_iterations);
        write_manifest();
        ++summary.executed;
        if (progress) progress(log);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };

  const std::size_t workers = std::min(effective_workers(config), std::max<std::size_t>(pending.size(), 1));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);
  write_manifest();
  return summary;
}

std::vector<RunLog> read_run_logs(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  static const std::regex name_re(R"(f\d+_d\d+_i\d+_(ei|pm|random)_s\d+\.csv)");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && std::regex_match(name, name_re)) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<RunLog> logs;
  logs.reserve(files.size());
  for (const auto& f : files) logs.push_back(read_run_log(f));
  return logs;
}

std::string domination_summary(std::span<const DominationCell> cells) {
  std::map<std::size_t, std::map<std::size_t, std::array<std::size_t, 3>>> counts;
  for (const auto& c : cells) {
    auto& slot = counts[c.dimension][c.checkpoint];
    slot[static_cast<std::size_t>(c.winner)] += 1;
  }
  std::ostringstream out;
  for (const auto& [dim, per_checkpoint] : counts) {
    out << "dimension " << dim << "\n";
    out << "  checkpoint    EI    PM  none\n";
    for (const auto& [checkpoint, n] : per_checkpoint) {
      char line[64];
      std::snprintf(line, sizeof line, "  %10zu %5zu %5zu %5zu\n", checkpoint, n[0], n[1], n[2]);
      out << line;
    }
  }
  return out.str();
}

AnalysisOutputs analyze_directory(const std::filesystem::path& log_dir, double alpha,
                                  const std::filesystem::path& output_dir) {
  const std::vector<RunLog> logs = read_run_logs(log_dir);
  if (logs.empty()) throw InsufficientRuns("no run logs in " + log_dir.string());

  AnalysisOutputs out;
  out.domination = domination_matrix(logs, alpha);
  out.curves = quartile_curves(logs, CurveField::kBestGap);
  auto exploration = quartile_curves(logs, CurveField::kNnDistance);
  out.curves.insert(out.curves.end(), std::make_move_iterator(exploration.begin()),
                    std::make_move_iterator(exploration.end()));
  out.summary = domination_summary(out.domination);

  std::error_code ec;
  std::filesystem::create_directories(output_dir, ec);
  if (ec) throw IoError("cannot create " + output_dir.string() + ": " + ec.message());
  write_text_atomically(output_dir / "domination.csv", domination_to_csv(out.domination));
  write_text_atomically(output_dir / "curves.csv", curves_to_csv(out.curves));
  return out;
}

}  // namespace smbo
