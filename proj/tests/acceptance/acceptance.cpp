// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance            all criteria
//   acceptance 1 3 6      a subset
//
// Criteria 6-9 run scaled-down campaigns through the library; the run logs
// are kept in memory. Exit status is nonzero if any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "smbo/analysis.hpp"
#include "smbo/campaign.hpp"
#include "smbo/design.hpp"
#include "smbo/infill.hpp"
#include "smbo/kriging.hpp"
#include "smbo/rng.hpp"
#include "smbo/smbo.hpp"

using namespace smbo;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

// ---------------------------------------------------------------------------

Outcome ei_oracle() {
  const auto t0 = Clock::now();
  Rng rng(derive_seed(2024, {1}));
  int ok = 0;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double m = rng.uniform(-10, 10);
    const double s = std::pow(10.0, rng.uniform(-3, 1));
    const double y_best = m + s * rng.uniform(-3, 3);
    const auto mc = oracle::expected_improvement_mc(m, s, y_best, 10'000'000, derive_seed(2024, {2, std::uint64_t(i)}));
    const double err = std::fabs(expected_improvement(m, s, y_best) - mc.mean);
    const double z = mc.standard_error > 0 ? err / mc.standard_error : (err == 0 ? 0 : INFINITY);
    worst = std::max(worst, z);
    ok += z <= 3.0;
  }
  const double t = seconds_since(t0);
  return {ok == 100 && t < 60.0, fmt("%d/100 within 3 SE (worst %.2f SE), %.1f s", ok, worst, t)};
}

Outcome kriging_oracle() {
  Rng rng(derive_seed(2024, {3}));
  double worst_nll = 0, worst_pred = 0, worst_interp = 0;
  int failures = 0;
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t d = 1 + rng.below(3);
    const std::size_t n = 3 + rng.below(18);
    Dataset data;
    data.x = latin_hypercube(n, BoxBounds::uniform(d, -5, 5), rng.next_u64());
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0;
      for (double v : data.x.row(i)) s += std::sin(v) + 0.1 * v * v;
      data.y.push_back(s + 0.1 * rng.normal());
    }
    const KrigingModel model = fit(data, rng.next_u64());
    const oracle::KrigingReference ref(data, model.params());
    const auto rel = [](double a, long double b) {
      return static_cast<double>(std::fabs(a - b) / std::max(1.0L, std::fabs(b)));
    };
    worst_nll = std::max({worst_nll, rel(model.neg_log_likelihood(), ref.nll), rel(model.mu_hat(), ref.mu),
                          rel(model.sigma2_hat(), ref.sigma2)});
    const Matrix q = uniform_random(20, BoxBounds::uniform(d, -5, 5), rng.next_u64());
    for (std::size_t i = 0; i < q.rows(); ++i) {
      const auto [mean, var] = ref.predict(q.row(i));
      const auto p = model.predict(q.row(i));
      worst_pred = std::max({worst_pred, rel(p.mean, mean),
                             static_cast<double>(std::fabs(p.variance - var) / std::max(1.0L, ref.sigma2))});
    }
    const auto [lo, hi] = std::minmax_element(data.y.begin(), data.y.end());
    for (std::size_t i = 0; i < n; ++i) {
      const double e = std::fabs(model.predict(data.x.row(i)).mean - data.y[i]) / (*hi - *lo);
      worst_interp = std::max(worst_interp, e);
    }
    failures += model.params().lambda > 1e-4;
  }
  const bool pass = worst_nll <= 1e-8 && worst_pred <= 1e-8 && worst_interp <= 1e-3 && failures == 0;
  return {pass, fmt("max rel err likelihood %.2e, prediction %.2e; max interpolation err %.2e of range", worst_nll,
                    worst_pred, worst_interp)};
}

Outcome wilcoxon_exact() {
  Rng rng(derive_seed(2024, {4}));
  double worst = 0;
  int cases = 0;
  while (cases < 500) {
    const std::size_t m = 1 + rng.below(8);
    std::set<int> values;
    while (values.size() < 2 * m) values.insert(static_cast<int>(rng.below(1000)));
    std::vector<double> pool(values.begin(), values.end());
    rng.shuffle(std::span<double>(pool));
    const std::vector<double> a(pool.begin(), pool.begin() + m), b(pool.begin() + m, pool.end());
    const auto r = wilcoxon_rank_sum(a, b);
    if (!r.exact) return {false, "normal approximation used for a tie-free case"};
    worst = std::max(worst, std::fabs(r.p_value - oracle::rank_sum_permutation_p(a, b, true)));
    ++cases;
  }
  return {worst <= 1e-10, fmt("500 cases, max |p - p_enum| = %.2e", worst)};
}

Outcome lhs_stratification() {
  int checked = 0, bad = 0;
  for (std::size_t n = 2; n <= 50; ++n)
    for (std::size_t d = 1; d <= 10; ++d) {
      const auto bounds = BoxBounds::uniform(d, -5, 5);
      const Matrix x = latin_hypercube(n, bounds, derive_seed(2024, {5, n, d}));
      bool ok = x.rows() == n && x.cols() == d;
      for (std::size_t j = 0; ok && j < d; ++j) {
        std::vector<int> hits(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
          const double u = (x(i, j) + 5.0) / 10.0;
          if (!(u > 0.0 && u < 1.0)) { ok = false; break; }
          ++hits[std::min(n - 1, static_cast<std::size_t>(u * n))];
        }
        ok = ok && std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; });
      }
      ++checked;
      bad += !ok;
    }
  return {bad == 0, fmt("%d (n, d) pairs, %d violations", checked, bad)};
}

Outcome budget_accounting() {
  CampaignConfig c;
  c.functions = {1, 3};
  c.dimensions = {2, 3};
  c.instances = {1};
  c.criteria = {InfillCriterion::kExpectedImprovement, InfillCriterion::kPredictedValue};
  c.total_budget = 14;
  c.record_wall_time = false;
  std::size_t runs = 0, bad = 0;
  for (const RunConfig& cfg : plan_runs(c)) {
    const RunLog log = run(cfg);
    const std::size_t d = cfg.dimension, proposals = cfg.total_budget - cfg.initial_design_size;
    bool ok = log.counters.objective_evaluations == cfg.total_budget && log.records.size() == cfg.total_budget;
    ok = ok && log.counters.likelihood_evaluations_per_fit.size() == proposals;
    ok = ok && log.counters.model_evaluations_per_proposal.size() == proposals;
    for (auto e : log.counters.likelihood_evaluations_per_fit) ok = ok && e == 500 * (2 * d + 1);
    for (auto e : log.counters.model_evaluations_per_proposal) ok = ok && e == 1000 * d;
    ++runs;
    bad += !ok;
  }
  return {bad == 0, fmt("%zu runs, %zu with counter mismatches", runs, bad)};
}

// ---------------------------------------------------------------------------
// Desk-scale campaigns

std::vector<RunLog> campaign(int fid, std::size_t d, int runs, std::size_t budget, std::size_t mle_factor,
                             InfillCriterion criterion) {
  CampaignConfig c;
  c.functions = {fid};
  c.dimensions = {d};
  for (int i = 1; i <= runs; ++i) c.instances.push_back(i);
  c.criteria = {criterion};
  c.total_budget = budget;
  c.mle_evaluations_per_parameter = mle_factor;
  c.base_seed = 2024;
  c.record_wall_time = false;
  std::vector<RunLog> logs;
  const auto t0 = Clock::now();
  for (const RunConfig& cfg : plan_runs(c)) logs.push_back(run(cfg));
  std::fprintf(stderr, "  f%d d%zu %s: %d runs in %.0f s\n", fid, d, std::string(to_string(criterion)).c_str(), runs,
               seconds_since(t0));
  return logs;
}

std::vector<double> final_gaps(const std::vector<RunLog>& logs) {
  std::vector<double> v;
  for (const auto& l : logs) v.push_back(l.records.back().best_gap);
  return v;
}

struct Store {
  std::map<std::string, std::vector<RunLog>> logs;
  const std::vector<RunLog>& get(int fid, std::size_t d, int runs, std::size_t budget, std::size_t mle,
                                 InfillCriterion c) {
    const std::string key = group_name(fid, d, c) + fmt("_b%zu_m%zu_r%d", budget, mle, runs);
    auto it = logs.find(key);
    if (it == logs.end()) it = logs.emplace(key, campaign(fid, d, runs, budget, mle, c)).first;
    return it->second;
  }
};

constexpr auto kEI = InfillCriterion::kExpectedImprovement;
constexpr auto kPM = InfillCriterion::kPredictedValue;
constexpr int kRastrigin = 3, kSharpRidge = 13, kSphere = 1;

Outcome low_dim_ei(Store& s) {
  const auto ei = final_gaps(s.get(kRastrigin, 2, 15, 150, 500, kEI));
  const auto pm = final_gaps(s.get(kRastrigin, 2, 15, 150, 500, kPM));
  const auto r = wilcoxon_rank_sum(ei, pm, Alternative::kLess);
  return {r.p_value < 0.05, fmt("2-d Rastrigin median best gap EI %.4g vs PM %.4g, one-sided p = %.4g", median(ei),
                                median(pm), r.p_value)};
}

Outcome high_dim_pm(Store& s) {
  bool pm_not_worse_somewhere = false, never_significantly_worse = true;
  std::string detail;
  for (int fid : {kRastrigin, kSharpRidge}) {
    const auto ei = final_gaps(s.get(fid, 10, 10, 150, 100, kEI));
    const auto pm = final_gaps(s.get(fid, 10, 10, 150, 100, kPM));
    const double me = median(ei), mp = median(pm);
    const auto r = wilcoxon_rank_sum(pm, ei);
    const bool worse = r.p_value < 0.05 && mp > me;
    pm_not_worse_somewhere |= mp <= me;
    never_significantly_worse &= !worse;
    detail += fmt("f%d: PM %.4g vs EI %.4g (p = %.3g)%s", fid, mp, me, r.p_value, fid == kRastrigin ? "; " : "");
  }
  return {pm_not_worse_somewhere && never_significantly_worse, detail};
}

double late_nn(const std::vector<RunLog>& logs, std::size_t budget) {
  return pooled_median(logs, CurveField::kNnDistance, budget - 49, budget);
}

Outcome exploration_trend(Store& s) {
  const double ei2 = late_nn(s.get(kRastrigin, 2, 15, 150, 500, kEI), 150);
  const double pm2 = late_nn(s.get(kRastrigin, 2, 15, 150, 500, kPM), 150);
  const double ratio2 = pm2 / ei2;
  bool larger = true;
  std::string detail = fmt("2-d nn PM %.3g vs EI %.3g (ratio %.3g)", pm2, ei2, ratio2);
  for (int fid : {kRastrigin, kSharpRidge}) {
    const double ei = late_nn(s.get(fid, 10, 10, 150, 100, kEI), 150);
    const double pm = late_nn(s.get(fid, 10, 10, 150, 100, kPM), 150);
    larger &= pm / ei > ratio2;
    detail += fmt("; 10-d f%d ratio %.3g", fid, pm / ei);
  }
  return {pm2 < ei2 && larger, detail};
}

Outcome random_baseline(Store& s) {
  const double ei = median(final_gaps(s.get(kSphere, 5, 10, 100, 500, kEI)));
  const double pm = median(final_gaps(s.get(kSphere, 5, 10, 100, 500, kPM)));
  const double rs = median(final_gaps(s.get(kSphere, 5, 10, 100, 500, InfillCriterion::kRandomSearch)));
  return {ei * 10 <= rs && pm * 10 <= rs,
          fmt("5-d sphere median gap EI %.3g, PM %.3g, random %.3g", ei, pm, rs)};
}

}  // namespace

int main(int argc, char** argv) {
  Store store;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"EI closed form vs 1e7-sample Monte Carlo", ei_oracle},
      {"Kriging vs dense-inverse oracle", kriging_oracle},
      {"rank-sum exact p-values vs enumeration", wilcoxon_exact},
      {"LHS stratification sweep", lhs_stratification},
      {"budget accounting", budget_accounting},
      {"low-dimensional EI advantage", [&] { return low_dim_ei(store); }},
      {"high-dimensional PM advantage", [&] { return high_dim_pm(store); }},
      {"exploration distance trend", [&] { return exploration_trend(store); }},
      {"random-search baseline", [&] { return random_baseline(store); }},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!selected.empty() && !selected.contains(static_cast<int>(i + 1))) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("[%s] criterion %zu: %s -- %s (%.0f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
