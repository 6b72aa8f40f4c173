#include "fast_exp.hpp"

#include <cmath>

namespace smbo::detail {

void accumulate_powers(const double* log_dist, double theta, double p, double* sum, std::size_t n) noexcept {
  for (std::size_t i = 0; i < n; ++i) sum[i] += theta * std::exp(p * log_dist[i]);
}

void accumulate_abs_powers(const double* delta, double theta, double p, double* sum, std::size_t n) noexcept {
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::fabs(delta[i]);
    sum[i] += a > 0.0 ? theta * std::exp(p * std::log(a)) : 0.0;
  }
}

void exp_negated(const double* in, double* out, std::size_t n) noexcept {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(-in[i]);
}

}  // namespace smbo::detail
