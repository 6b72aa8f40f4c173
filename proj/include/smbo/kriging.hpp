#pragma once

#include <cstdint>
#include <span>

#include "smbo/numerics.hpp"

namespace smbo {

/// Evaluated points (one row of `x` per point) and their objective values.
struct Dataset {
  Matrix x;
  Vector y;

  std::size_t size() const noexcept { return y.size(); }
  std::size_t dimension() const noexcept { return x.cols(); }
};

/// Drops every row within `tolerance` (infinity norm) of an earlier row.
Dataset deduplicate(const Dataset& data, double tolerance = 1e-12);

// Search ranges of the likelihood fit.
inline constexpr double kLog10ThetaMin = -3.0;
inline constexpr double kLog10ThetaMax = 2.0;
inline constexpr double kExponentMin = 0.01;
inline constexpr double kExponentMax = 2.0;
inline constexpr double kLog10NuggetMin = -8.0;
inline constexpr double kLog10NuggetMax = -4.0;
inline constexpr double kNuggetMin = 1e-8;
inline constexpr double kNuggetMax = 1e-4;

/// Returned by the likelihood when K + lambda I cannot be factored even at
/// the nugget cap.
inline constexpr double kLikelihoodPenalty = 1e10;
inline constexpr double kProcessVarianceFloor = 1e-12;

/// Kernel exp(-sum_i theta_i |x_i - x'_i|^{p_i}) plus nugget lambda.
struct KrigingHyperparameters {
  Vector theta;
  Vector p;
  double lambda = kNuggetMin;

  std::size_t dimension() const noexcept { return theta.size(); }
  /// theta_i > 0, p_i in [0.01, 2], lambda in [1e-8, 1e-4].
  void validate() const;
};

double correlation(std::span<const double> x, std::span<const double> x2,
                   const KrigingHyperparameters& params);

/// n x n correlation matrix K (no nugget).
Matrix correlation_matrix(const Matrix& x, const KrigingHyperparameters& params);

/// Concentrated likelihood with its by-products.
struct LikelihoodTerms {
  double neg_log_likelihood = kLikelihoodPenalty;
  double mu_hat = 0.0;
  double sigma2_hat = 0.0;
  /// Nugget that was actually factored after jitter escalation.
  double lambda_used = 0.0;
  /// Lower factor of K + lambda_used I; empty when penalized.
  Matrix chol;
  bool penalized = true;
};

/// Evaluates the concentrated negative log-likelihood
///   mu = 1'K^-1 y / 1'K^-1 1,  s2 = (y - mu)'K^-1(y - mu) / n,
///   NLL = n/2 ln s2 + 1/2 ln det(K + lambda I).
/// A failed factorization retries with lambda * 10 up to 1e-4; past that
/// the penalty value is returned.
LikelihoodTerms likelihood_terms(const Dataset& data, const KrigingHyperparameters& params);

double negative_log_likelihood(const Dataset& data, const KrigingHyperparameters& params);

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;
};

struct FitOptions {
  /// Likelihood budget is this factor times t = 2 d + 1.
  std::size_t evaluations_per_parameter = 500;
};

class KrigingModel;
KrigingModel fit(const Dataset& data, std::uint64_t seed, const FitOptions& options);

class KrigingModel {
 public:
  /// Builds the model at fixed hyperparameters. Throws DegenerateData for
  /// fewer than 2 points and NotPositiveDefinite if jitter escalation fails.
  static KrigingModel from_parameters(Dataset data, KrigingHyperparameters params);

  const Dataset& data() const noexcept { return data_; }
  /// Hyperparameters with lambda replaced by the nugget actually used.
  const KrigingHyperparameters& params() const noexcept { return params_; }
  const Matrix& chol() const noexcept { return chol_; }
  double mu_hat() const noexcept { return mu_hat_; }
  double sigma2_hat() const noexcept { return sigma2_hat_; }
  double neg_log_likelihood() const noexcept { return nll_; }
  /// Number of likelihood evaluations spent by fit(); 0 for from_parameters.
  std::size_t likelihood_evaluations() const noexcept { return likelihood_evaluations_; }

  /// m(x) = mu + k' K^-1 (y - 1 mu),  s2(x) = sigma2 (1 + lambda - k' K^-1 k), s2 >= 0.
  /// At a design point k is the matching column of K + lambda I, so m(x_i) = y_i.
  Prediction predict(std::span<const double> x) const;
  /// Mean only; bit-identical to predict(x).mean.
  double predict_mean(std::span<const double> x) const;

 private:
  friend KrigingModel fit(const Dataset&, std::uint64_t, const FitOptions&);
  void correlations_to(std::span<const double> x, Vector& k) const;

  Dataset data_;
  Matrix columns_;  // data_.x transposed, one row per dimension
  KrigingHyperparameters params_;
  Matrix chol_;
  Vector weights_;  // (K + lambda I)^-1 (y - 1 mu)
  double mu_hat_ = 0.0;
  double sigma2_hat_ = 0.0;
  double nll_ = 0.0;
  std::size_t likelihood_evaluations_ = 0;
};

/// Number of hyperparameters searched by fit(): t = 2 d + 1.
constexpr std::size_t hyperparameter_count(std::size_t dimension) noexcept {
  return 2 * dimension + 1;
}

/// Maximum likelihood fit by differential evolution over
/// (log10 theta in [-3, 2]^d, p in [0.01, 2]^d, log10 lambda in [-8, -4]),
/// spending exactly evaluations_per_parameter * (2 d + 1) likelihood
/// evaluations. Duplicate rows are dropped first. Throws DegenerateData for
/// n < 2 or constant y.
KrigingModel fit(const Dataset& data, std::uint64_t seed, const FitOptions& options = FitOptions{});

inline Prediction predict(const KrigingModel& model, std::span<const double> x) {
  return model.predict(x);
}

}  // namespace smbo
