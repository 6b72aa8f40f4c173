// Vectorized exp kernels for the likelihood inner loops. Built in their own
// translation unit with -ffast-math so the loops map onto the vector math
// library; results are deterministic per build but may differ from std::exp
// in the last ulps.
#pragma once

#include <cstddef>

namespace smbo::detail {

/// sum[i] += theta * exp(p * log_dist[i])
void accumulate_powers(const double* log_dist, double theta, double p, double* sum, std::size_t n) noexcept;

/// sum[i] += theta * |delta[i]|^p, with 0^p = 0
void accumulate_abs_powers(const double* delta, double theta, double p, double* sum, std::size_t n) noexcept;

/// out[i] = exp(-in[i])
void exp_negated(const double* in, double* out, std::size_t n) noexcept;

}  // namespace smbo::detail
