// Independent reference computations used by the unit and acceptance tests.
// Nothing here shares a code path with the library beyond the kernel
// definition itself.
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "smbo/kriging.hpp"
#include "smbo/rng.hpp"

namespace oracle {

using LMatrix = std::vector<std::vector<long double>>;

/// Gauss-Jordan inverse with partial pivoting in long double. Also returns
/// ln|det| through `log_det`.
inline LMatrix dense_inverse(LMatrix a, long double* log_det = nullptr) {
  const std::size_t n = a.size();
  LMatrix inv(n, std::vector<long double>(n, 0.0L));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0L;
  long double ld = 0.0L;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
    if (a[piv][c] == 0.0L) throw std::runtime_error("dense_inverse: singular");
    std::swap(a[piv], a[c]);
    std::swap(inv[piv], inv[c]);
    const long double p = a[c][c];
    ld += std::log(std::fabs(p));
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] /= p;
      inv[c][j] /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const long double f = a[r][c];
      if (f == 0.0L) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  if (log_det) *log_det = ld;
  return inv;
}

inline long double kernel(std::span<const double> a, std::span<const double> b,
                          const smbo::KrigingHyperparameters& h) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += static_cast<long double>(h.theta[i]) *
         std::pow(std::fabs(static_cast<long double>(a[i]) - b[i]), static_cast<long double>(h.p[i]));
  return std::exp(-s);
}

/// Kriging quantities by explicit inversion of K + lambda I.
struct KrigingReference {
  long double mu = 0, sigma2 = 0, nll = 0;
  LMatrix inverse;
  std::vector<long double> weights;  // K^-1 (y - mu)
  const smbo::Dataset* data = nullptr;
  smbo::KrigingHyperparameters params;

  KrigingReference(const smbo::Dataset& d, const smbo::KrigingHyperparameters& h) : data(&d), params(h) {
    const std::size_t n = d.size();
    LMatrix k(n, std::vector<long double>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        k[i][j] = kernel(d.x.row(i), d.x.row(j), h) + (i == j ? static_cast<long double>(h.lambda) : 0.0L);
    long double log_det = 0;
    inverse = dense_inverse(k, &log_det);
    long double one_k_one = 0, one_k_y = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        one_k_one += inverse[i][j];
        one_k_y += inverse[i][j] * d.y[j];
      }
    mu = one_k_y / one_k_one;
    weights.assign(n, 0.0L);
    long double quad = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) weights[i] += inverse[i][j] * (d.y[j] - mu);
    for (std::size_t i = 0; i < n; ++i) quad += (d.y[i] - mu) * weights[i];
    sigma2 = std::max(quad / n, 1e-12L);
    nll = 0.5L * n * std::log(sigma2) + 0.5L * log_det;
  }

  std::pair<long double, long double> predict(std::span<const double> x) const {
    const std::size_t n = data->size();
    std::vector<long double> k(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto xi = data->x.row(i);
      k[i] = std::equal(x.begin(), x.end(), xi.begin()) ? 1.0L + params.lambda : kernel(x, xi, params);
    }
    long double mean = mu, explained = 0;
    for (std::size_t i = 0; i < n; ++i) {
      mean += k[i] * weights[i];
      for (std::size_t j = 0; j < n; ++j) explained += k[i] * inverse[i][j] * k[j];
    }
    const long double var = std::max(0.0L, sigma2 * (1.0L + params.lambda - explained));
    return {mean, var};
  }
};

/// Monte Carlo estimate of E[max(y_best - Y, 0)], Y ~ N(mean, sd^2), with
/// its standard error. Uses its own Box-Muller sampler on both branches.
struct MonteCarloEstimate {
  double mean = 0, standard_error = 0;
};
inline MonteCarloEstimate expected_improvement_mc(double mean, double sd, double y_best,
                                                  std::size_t samples, std::uint64_t seed) {
  smbo::Rng rng(seed);
  long double sum = 0, sum2 = 0;
  std::size_t drawn = 0;
  while (drawn < samples) {
    double u1 = rng.uniform();
    if (u1 <= 0) continue;
    const double u2 = rng.uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    for (double z : {r * std::cos(2 * M_PI * u2), r * std::sin(2 * M_PI * u2)}) {
      if (drawn == samples) break;
      const double imp = std::max(y_best - (mean + sd * z), 0.0);
      sum += imp;
      sum2 += static_cast<long double>(imp) * imp;
      ++drawn;
    }
  }
  const long double m = sum / samples;
  const long double var = (sum2 / samples - m * m) * samples / (samples - 1);
  return {static_cast<double>(m), static_cast<double>(std::sqrt(std::max(var, 0.0L) / samples))};
}

/// Two-sided rank-sum p-value by enumerating every assignment of the pooled
/// (mid)ranks to a sample of size |a|: P(|W - E W| >= |w - E W|).
/// For tie-free data this equals 2 min(P(W <= w), P(W >= w)) capped at 1.
inline double rank_sum_permutation_p(const std::vector<double>& a, const std::vector<double>& b,
                                     bool symmetric_tails) {
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::size_t total = pooled.size();
  const std::size_t m = a.size();
  std::vector<double> rank(total);
  for (std::size_t i = 0; i < total; ++i) {
    double less = 0, equal = 0;
    for (std::size_t j = 0; j < total; ++j) {
      less += pooled[j] < pooled[i];
      equal += pooled[j] == pooled[i];
    }
    rank[i] = less + (equal + 1.0) / 2.0;
  }
  double observed = 0;
  for (std::size_t i = 0; i < m; ++i) observed += rank[i];
  double count_le = 0, count_ge = 0, count_far = 0, count = 0;
  const double expected = m * (total + 1.0) / 2.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << total); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != m) continue;
    double s = 0;
    for (std::size_t i = 0; i < total; ++i)
      if (mask >> i & 1) s += rank[i];
    count += 1;
    count_le += s <= observed + 1e-9;
    count_ge += s >= observed - 1e-9;
    count_far += std::fabs(s - expected) >= std::fabs(observed - expected) - 1e-9;
  }
  if (symmetric_tails) return std::min(1.0, 2.0 * std::min(count_le, count_ge) / count);
  return count_far / count;
}

}  // namespace oracle
