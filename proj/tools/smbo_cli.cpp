// smbo: run and analyze EI vs PM benchmark campaigns.
//
//   smbo list [--output FILE]
//   smbo run CONFIG.json [--force] [--workers N] [--output-dir DIR] [--base-seed S]
//   smbo analyze LOG_DIR [--alpha A] [--output-dir DIR]
//   smbo recommend -d D -b B [--modality unimodal|multimodal|unknown]
//
// Exit codes: 0 success, 1 configuration/argument error, 2 data error
// (unknown function, insufficient or degenerate runs), 3 I/O error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "smbo/analysis.hpp"
#include "smbo/campaign.hpp"
#include "smbo/errors.hpp"
#include "smbo/testbed.hpp"

namespace {

enum ExitCode : int { kOk = 0, kConfigError = 1, kDataError = 2, kIoError = 3 };

std::string suite_manifest_json() {
  nlohmann::json functions = nlohmann::json::array();
  for (const auto& f : smbo::list_suite()) {
    functions.push_back({{"function_id", f.id},
                         {"name", f.name},
                         {"modality", f.modality == smbo::Modality::kMultimodal ? "multimodal" : "unimodal"},
                         {"separable", f.separable},
                         {"rotated", f.rotated},
                         {"tags", f.tags},
                         {"dimensions", f.dimensions}});
  }
  return nlohmann::json{{"functions", functions}}.dump(2) + "\n";
}

int cmd_list(const std::string& output) {
  const std::string text = suite_manifest_json();
  if (output.empty()) {
    std::cout << text;
    return kOk;
  }
  std::ofstream out(output, std::ios::binary);
  if (!out || !(out << text)) throw smbo::IoError("cannot write " + output);
  return kOk;
}

int cmd_run(const std::string& config_path, bool force, int workers, const std::string& output_dir,
            const std::string& base_seed) {
  smbo::CampaignConfig config = smbo::read_campaign_config(config_path);
  if (workers > 0) config.workers = static_cast<std::size_t>(workers);
  if (!output_dir.empty()) config.output_dir = output_dir;
  if (!base_seed.empty()) config.base_seed = std::stoull(base_seed);
  config.validate();

  const std::size_t planned = smbo::plan_runs(config).size();
  std::size_t done = 0;
  const auto summary = smbo::run_campaign(config, force, [&](const smbo::RunLog& log) {
    ++done;
    std::fprintf(stderr, "[%zu] %s best_gap=%.6g\n", done, smbo::run_file_name(log.config).c_str(),
                 log.records.back().best_gap);
  });
  std::printf("planned %zu runs: executed %zu, skipped %zu (already complete)\n", planned, summary.executed,
              summary.skipped);
  return kOk;
}

int cmd_analyze(const std::string& log_dir, double alpha, const std::string& output_dir) {
  const auto outputs = smbo::analyze_directory(log_dir, alpha, output_dir.empty() ? log_dir : output_dir);
  std::printf("%s", outputs.summary.c_str());
  return kOk;
}

int cmd_recommend(std::size_t dimension, std::size_t budget, const std::string& modality_text) {
  const auto modality = smbo::parse_modality(modality_text);
  if (!modality) throw CLI::ValidationError("--modality", "expected unimodal, multimodal or unknown");
  const auto rec = smbo::recommend_criterion(dimension, budget, *modality);
  std::printf("%s\n%s\n", rec.criterion == smbo::InfillCriterion::kExpectedImprovement ? "EI" : "PM",
              rec.rationale.c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Surrogate-model-based optimization benchmark: expected improvement vs predicted value"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "Print the benchmark suite manifest (JSON)");
  std::string list_output;
  list->add_option("-o,--output", list_output, "Write to this file instead of stdout");

  auto* run = app.add_subcommand("run", "Execute a campaign described by a JSON config");
  std::string config_path;
  bool force = false;
  int workers = 0;
  std::string run_output_dir;
  std::string base_seed;
  run->add_option("config", config_path, "Campaign config file")->required();
  run->add_flag("--force", force, "Re-run runs whose logs already exist");
  run->add_option("-w,--workers", workers, "Override the worker count")->check(CLI::PositiveNumber);
  run->add_option("-o,--output-dir", run_output_dir, "Override the output directory");
  run->add_option("--base-seed", base_seed, "Override the base seed");

  auto* analyze = app.add_subcommand("analyze", "Statistical comparison of the run logs in a directory");
  std::string log_dir;
  double alpha = 0.05;
  std::string analyze_output_dir;
  analyze->add_option("log_dir", log_dir, "Directory with run CSV files")->required();
  analyze->add_option("-a,--alpha", alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
  analyze->add_option("-o,--output-dir", analyze_output_dir, "Where to write domination.csv and curves.csv");

  auto* recommend = app.add_subcommand("recommend", "Suggest an infill criterion for a problem");
  std::size_t dimension = 0;
  std::size_t budget = 0;
  std::string modality = "unknown";
  recommend->add_option("-d,--dimension", dimension, "Problem dimension")->required()->check(CLI::PositiveNumber);
  recommend->add_option("-b,--budget", budget, "Evaluation budget")->required()->check(CLI::PositiveNumber);
  recommend->add_option("-m,--modality", modality, "unimodal | multimodal | unknown");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    if (*list) return cmd_list(list_output);
    if (*run) return cmd_run(config_path, force, workers, run_output_dir, base_seed);
    if (*analyze) return cmd_analyze(log_dir, alpha, analyze_output_dir);
    if (*recommend) return cmd_recommend(dimension, budget, modality);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfigError;
  } catch (const smbo::ConfigParseError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const smbo::UnknownFunction& e) {
    std::fprintf(stderr, "unknown function: %s\n", e.what());
    return kDataError;
  } catch (const smbo::InsufficientRuns& e) {
    std::fprintf(stderr, "insufficient runs: %s\n", e.what());
    return kDataError;
  } catch (const smbo::DegenerateData& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return kDataError;
  } catch (const smbo::IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kIoError;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "argument error: %s\n", e.what());
    return kConfigError;
  } catch (const std::out_of_range& e) {
    std::fprintf(stderr, "argument error: %s\n", e.what());
    return kConfigError;
  }
  return kOk;
}
