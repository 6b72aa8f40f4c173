#include "smbo/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "smbo/errors.hpp"
#include "smbo/numerics.hpp"

namespace smbo {

// ---------------------------------------------------------------------------
// Rank-sum test
// ---------------------------------------------------------------------------

namespace {

// counts[u] = number of m-subsets of n + m ranks whose Mann-Whitney
// statistic equals u; built with f(m, n, u) = f(m - 1, n, u - n) + f(m, n - 1, u).
std::vector<double> rank_sum_counts(std::size_t m, std::size_t n) {
  // table[i][j] holds the distribution for sizes (i, j); rolled over j.
  std::vector<std::vector<std::vector<double>>> table(
      m + 1, std::vector<std::vector<double>>(n + 1));
  for (std::size_t i = 0; i <= m; ++i) {
    for (std::size_t j = 0; j <= n; ++j) {
      std::vector<double>& cur = table[i][j];
      cur.assign(i * j + 1, 0.0);
      if (i == 0 || j == 0) {
        cur[0] = 1.0;
        continue;
      }
      const auto& drop_a = table[i - 1][j];  // largest rank belongs to a: u shifts by j
      const auto& drop_b = table[i][j - 1];  // largest rank belongs to b
      for (std::size_t u = 0; u < drop_a.size(); ++u) cur[u + j] += drop_a[u];
      for (std::size_t u = 0; u < drop_b.size(); ++u) cur[u] += drop_b[u];
    }
  }
  return table[m][n];
}

double normal_upper_tail(double z) { return standard_normal_cdf(-z); }

}  // namespace

double rank_sum_exact_cdf(std::size_t m, std::size_t n, double w) {
  const std::vector<double> counts = rank_sum_counts(m, n);
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  double below = 0.0;
  for (std::size_t u = 0; u < counts.size() && static_cast<double>(u) <= w; ++u) below += counts[u];
  return below / total;
}

RankSumResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b,
                                Alternative alternative) {
  if (a.empty() || b.empty()) throw EmptySample("wilcoxon_rank_sum: both samples must be non-empty");
  const std::size_t m = a.size();
  const std::size_t n = b.size();
  const std::size_t total = m + n;

  // Midranks of the pooled sample.
  std::vector<std::pair<double, std::size_t>> pooled;
  pooled.reserve(total);
  for (std::size_t i = 0; i < m; ++i) pooled.emplace_back(a[i], i);
  for (std::size_t i = 0; i < n; ++i) pooled.emplace_back(b[i], m + i);
  std::sort(pooled.begin(), pooled.end());
  std::vector<double> rank(total);
  double tie_term = 0.0;  // sum over tie groups of t^3 - t
  for (std::size_t i = 0; i < total;) {
    std::size_t j = i;
    while (j + 1 < total && pooled[j + 1].first == pooled[i].first) ++j;
    const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[pooled[k].second] = mid;
    const double t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    i = j + 1;
  }
  double rank_sum_a = 0.0;
  for (std::size_t i = 0; i < m; ++i) rank_sum_a += rank[i];

  const double md = static_cast<double>(m);
  const double nd = static_cast<double>(n);
  RankSumResult result;
  result.statistic = rank_sum_a - md * (md + 1.0) / 2.0;
  const double w = result.statistic;

  if (total <= kExactRankSumLimit && tie_term == 0.0) {
    result.exact = true;
    const std::vector<double> counts = rank_sum_counts(m, n);
    const double all = std::accumulate(counts.begin(), counts.end(), 0.0);
    // w is integral without ties.
    const auto wi = static_cast<std::size_t>(std::llround(w));
    double lower = 0.0, upper = 0.0;
    for (std::size_t u = 0; u < counts.size(); ++u) {
      if (u <= wi) lower += counts[u];
      if (u >= wi) upper += counts[u];
    }
    lower /= all;
    upper /= all;
    switch (alternative) {
      case Alternative::kTwoSided: result.p_value = std::min(1.0, 2.0 * std::min(lower, upper)); break;
      case Alternative::kLess: result.p_value = lower; break;
      case Alternative::kGreater: result.p_value = upper; break;
    }
    return result;
  }

  const double centered = w - md * nd / 2.0;
  const double sigma = std::sqrt(md * nd / 12.0 *
                                 ((md + nd + 1.0) - tie_term / ((md + nd) * (md + nd - 1.0))));
  if (!(sigma > 0.0)) {
    result.p_value = 1.0;
    return result;
  }
  double correction = 0.0;
  switch (alternative) {
    case Alternative::kTwoSided: correction = centered > 0 ? 0.5 : (centered < 0 ? -0.5 : 0.0); break;
    case Alternative::kLess: correction = -0.5; break;
    case Alternative::kGreater: correction = 0.5; break;
  }
  const double z = (centered - correction) / sigma;
  switch (alternative) {
    case Alternative::kTwoSided:
      result.p_value = std::min(1.0, 2.0 * std::min(standard_normal_cdf(z), normal_upper_tail(z)));
      break;
    case Alternative::kLess: result.p_value = standard_normal_cdf(z); break;
    case Alternative::kGreater: result.p_value = normal_upper_tail(z); break;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Aggregation
// ---------------------------------------------------------------------------

std::string_view to_string(CurveField f) noexcept {
  return f == CurveField::kBestGap ? "best_gap" : "nn_distance";
}

std::string_view to_string(Winner w) noexcept {
  switch (w) {
    case Winner::kEI: return "EI";
    case Winner::kPM: return "PM";
    case Winner::kNone: return "none";
  }
  return "none";
}

std::optional<Winner> parse_winner(std::string_view text) noexcept {
  if (text == "EI") return Winner::kEI;
  if (text == "PM") return Winner::kPM;
  if (text == "none") return Winner::kNone;
  return std::nullopt;
}

std::optional<double> value_at_checkpoint(const RunLog& log, CurveField field, std::size_t checkpoint) {
  if (log.records.empty() || checkpoint == 0) return std::nullopt;
  const IterationRecord& r = log.records[std::min(checkpoint, log.records.size()) - 1];
  if (field == CurveField::kBestGap) return r.best_gap;
  return r.nn_distance;
}

std::string group_name(int function_id, std::size_t dimension, InfillCriterion criterion) {
  return "f" + std::to_string(function_id) + "_d" + std::to_string(dimension) + "_" +
         std::string(to_string(criterion));
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw EmptySample("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

namespace {

using GroupKey = std::tuple<int, std::size_t, InfillCriterion>;

std::map<GroupKey, std::vector<const RunLog*>> group_logs(std::span<const RunLog> logs) {
  std::map<GroupKey, std::vector<const RunLog*>> groups;
  for (const RunLog& log : logs)
    groups[{log.config.function_id, log.config.dimension, log.config.infill}].push_back(&log);
  return groups;
}

std::vector<double> samples_at(const std::vector<const RunLog*>& runs, CurveField field,
                               std::size_t checkpoint) {
  std::vector<double> out;
  for (const RunLog* log : runs)
    if (auto v = value_at_checkpoint(*log, field, checkpoint)) out.push_back(*v);
  return out;
}

}  // namespace

std::vector<DominationCell> domination_matrix(std::span<const RunLog> logs, double alpha,
                                              std::span<const std::size_t> checkpoints) {
  const auto groups = group_logs(logs);
  std::map<std::pair<int, std::size_t>, std::pair<std::vector<const RunLog*>, std::vector<const RunLog*>>>
      paired;
  for (const auto& [key, runs] : groups) {
    const auto& [fid, dim, criterion] = key;
    if (criterion == InfillCriterion::kExpectedImprovement) paired[{fid, dim}].first = runs;
    if (criterion == InfillCriterion::kPredictedValue) paired[{fid, dim}].second = runs;
  }
  if (paired.empty()) throw InsufficientRuns("domination_matrix: no EI/PM runs to compare");

  std::vector<DominationCell> cells;
  for (const auto& [key, runs] : paired) {
    const auto& [ei_runs, pm_runs] = runs;
    if (ei_runs.size() < 2 || pm_runs.size() < 2)
      throw InsufficientRuns("domination_matrix: f" + std::to_string(key.first) + " d" +
                             std::to_string(key.second) + " needs >= 2 runs per criterion (EI " +
                             std::to_string(ei_runs.size()) + ", PM " + std::to_string(pm_runs.size()) + ")");
    for (std::size_t c : checkpoints) {
      const auto ei = samples_at(ei_runs, CurveField::kBestGap, c);
      const auto pm = samples_at(pm_runs, CurveField::kBestGap, c);
      DominationCell cell{key.first, key.second, c, Winner::kNone, 1.0};
      cell.p_value = wilcoxon_rank_sum(ei, pm).p_value;
      if (cell.p_value < alpha) {
        const double ei_median = quantile(ei, 0.5);
        const double pm_median = quantile(pm, 0.5);
        if (ei_median < pm_median) cell.winner = Winner::kEI;
        else if (pm_median < ei_median) cell.winner = Winner::kPM;
      }
      cells.push_back(cell);
    }
  }
  return cells;
}

std::vector<QuartileCurve> quartile_curves(std::span<const RunLog> logs, CurveField field,
                                           std::span<const std::size_t> checkpoints) {
  const auto groups = group_logs(logs);
  if (groups.empty()) throw InsufficientRuns("quartile_curves: no runs");
  std::vector<QuartileCurve> curves;
  for (const auto& [key, runs] : groups) {
    const auto& [fid, dim, criterion] = key;
    if (runs.size() < 2)
      throw InsufficientRuns("quartile_curves: group " + group_name(fid, dim, criterion) +
                             " has fewer than 2 runs");
    QuartileCurve curve;
    curve.group = group_name(fid, dim, criterion);
    curve.field = field;
    for (std::size_t c : checkpoints) {
      const auto values = samples_at(runs, field, c);
      if (values.empty()) continue;
      curve.checkpoints.push_back(c);
      curve.median.push_back(quantile(values, 0.5));
      curve.lower_quartile.push_back(quantile(values, 0.25));
      curve.upper_quartile.push_back(quantile(values, 0.75));
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

double pooled_median(std::span<const RunLog> logs, CurveField field, std::size_t first, std::size_t last) {
  std::vector<double> values;
  for (const RunLog& log : logs)
    for (const IterationRecord& r : log.records) {
      if (r.iteration < first || r.iteration > last) continue;
      if (field == CurveField::kBestGap) values.push_back(r.best_gap);
      else if (r.nn_distance) values.push_back(*r.nn_distance);
    }
  return quantile(std::move(values), 0.5);
}

// ---------------------------------------------------------------------------
// CSV artifacts
// ---------------------------------------------------------------------------

namespace {

std::vector<std::vector<std::string>> parse_table(std::string_view csv, std::string_view header,
                                                  std::size_t columns) {
  std::vector<std::vector<std::string>> rows;
  std::size_t pos = 0;
  bool first = true;
  while (pos < csv.size()) {
    std::size_t eol = csv.find('\n', pos);
    if (eol == std::string_view::npos) eol = csv.size();
    std::string_view line = csv.substr(pos, eol - pos);
    pos = eol + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (first) {
      if (line != header) throw ConfigParseError("unexpected header: " + std::string(line));
      first = false;
      continue;
    }
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      fields.emplace_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != columns) throw ConfigParseError("wrong field count in: " + std::string(line));
    rows.push_back(std::move(fields));
  }
  if (first) throw ConfigParseError("missing header: " + std::string(header));
  return rows;
}

double to_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw ConfigParseError("bad number '" + s + "'");
  return v;
}

long long to_integer(const std::string& s) {
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size()) throw ConfigParseError("bad integer '" + s + "'");
  return v;
}

constexpr std::string_view kDominationHeader = "function_id,dimension,checkpoint,winner,p_value";
constexpr std::string_view kCurvesHeader = "group,checkpoint,median,q1,q3";

}  // namespace

std::string domination_to_csv(std::span<const DominationCell> cells) {
  std::string out(kDominationHeader);
  out += '\n';
  for (const auto& c : cells) {
    out += std::to_string(c.function_id) + "," + std::to_string(c.dimension) + "," +
           std::to_string(c.checkpoint) + "," + std::string(to_string(c.winner)) + "," +
           format_double(c.p_value) + "\n";
  }
  return out;
}

std::vector<DominationCell> parse_domination_csv(std::string_view csv) {
  std::vector<DominationCell> cells;
  for (const auto& f : parse_table(csv, kDominationHeader, 5)) {
    DominationCell c;
    c.function_id = static_cast<int>(to_integer(f[0]));
    c.dimension = static_cast<std::size_t>(to_integer(f[1]));
    c.checkpoint = static_cast<std::size_t>(to_integer(f[2]));
    const auto w = parse_winner(f[3]);
    if (!w) throw ConfigParseError("bad winner '" + f[3] + "'");
    c.winner = *w;
    c.p_value = to_double(f[4]);
    cells.push_back(c);
  }
  return cells;
}

std::string curves_to_csv(std::span<const QuartileCurve> curves) {
  std::string out(kCurvesHeader);
  out += '\n';
  for (const auto& curve : curves)
    for (std::size_t i = 0; i < curve.checkpoints.size(); ++i)
      out += curve.group + "/" + std::string(to_string(curve.field)) + "," +
             std::to_string(curve.checkpoints[i]) + "," + format_double(curve.median[i]) + "," +
             format_double(curve.lower_quartile[i]) + "," + format_double(curve.upper_quartile[i]) + "\n";
  return out;
}

std::vector<QuartileCurve> parse_curves_csv(std::string_view csv) {
  std::vector<QuartileCurve> curves;
  for (const auto& f : parse_table(csv, kCurvesHeader, 5)) {
    const std::size_t slash = f[0].rfind('/');
    if (slash == std::string::npos) throw ConfigParseError("curve group lacks a field: " + f[0]);
    const std::string group = f[0].substr(0, slash);
    const std::string field_name = f[0].substr(slash + 1);
    CurveField field;
    if (field_name == "best_gap") field = CurveField::kBestGap;
    else if (field_name == "nn_distance") field = CurveField::kNnDistance;
    else throw ConfigParseError("unknown curve field: " + field_name);
    if (curves.empty() || curves.back().group != group || curves.back().field != field) {
      curves.emplace_back();
      curves.back().group = group;
      curves.back().field = field;
    }
    QuartileCurve& c = curves.back();
    c.checkpoints.push_back(static_cast<std::size_t>(to_integer(f[1])));
    c.median.push_back(to_double(f[2]));
    c.lower_quartile.push_back(to_double(f[3]));
    c.upper_quartile.push_back(to_double(f[4]));
  }
  return curves;
}

// ---------------------------------------------------------------------------
// Advice
// ---------------------------------------------------------------------------

std::optional<ModalityHint> parse_modality(std::string_view text) noexcept {
  if (text == "unimodal") return ModalityHint::kUnimodal;
  if (text == "multimodal") return ModalityHint::kMultimodal;
  if (text == "unknown") return ModalityHint::kUnknown;
  return std::nullopt;
}

Recommendation recommend_criterion(std::size_t dimension, std::size_t budget, ModalityHint modality) {
  if (dimension < 1 || budget < 1) throw std::invalid_argument("recommend_criterion: dimension and budget must be >= 1");
  using enum InfillCriterion;
  if (dimension >= 5)
    return {kPredictedValue,
            "dimension >= 5: exploitation via the predicted value performs better on most problems "
            "of five or more dimensions"};
  if (modality == ModalityHint::kUnimodal)
    return {kPredictedValue, "unimodal landscape: there are no local optima to escape, so exploitation suffices"};
  if (budget < kCriticalBudget)
    return {kPredictedValue,
            "budget < " + std::to_string(kCriticalBudget) +
                ": the predicted value converges faster in early iterations, before the critical budget"};
  if (dimension <= 3)
    return {kExpectedImprovement,
            "dimension <= 3 with budget >= " + std::to_string(kCriticalBudget) +
                " and a possibly multimodal landscape: expected improvement avoids stagnation in local optima"};
  if (modality == ModalityHint::kMultimodal)
    return {kExpectedImprovement, "dimension 4, multimodal: exploration still pays off on multimodal landscapes"};
  return {kPredictedValue, "dimension 4, modality unknown: leaning towards exploitation as dimension grows"};
}

}  // namespace smbo
