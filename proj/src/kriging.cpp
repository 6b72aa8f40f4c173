#include "smbo/kriging.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fast_exp.hpp"
#include "smbo/de_optimizer.hpp"
#include "smbo/errors.hpp"

namespace smbo {

Dataset deduplicate(const Dataset& data, double tolerance) {
  Dataset out;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto xi = data.x.row(i);
    bool duplicate = false;
    for (std::size_t j = 0; j < out.size() && !duplicate; ++j) {
      const auto xj = out.x.row(j);
      double dist = 0.0;
      for (std::size_t k = 0; k < xi.size(); ++k) dist = std::max(dist, std::abs(xi[k] - xj[k]));
      duplicate = dist <= tolerance;
    }
    if (!duplicate) {
      out.x.append_row(xi);
      out.y.push_back(data.y[i]);
    }
  }
  return out;
}

void KrigingHyperparameters::validate() const {
  if (theta.empty() || theta.size() != p.size())
    throw std::invalid_argument("KrigingHyperparameters: theta/p size mismatch");
  for (double t : theta)
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("theta must be positive");
  for (double e : p)
    if (!(e >= kExponentMin && e <= kExponentMax))
      throw std::invalid_argument("p must lie in [0.01, 2]");
  if (!(lambda >= kNuggetMin && lambda <= kNuggetMax))
    throw std::invalid_argument("lambda must lie in [1e-8, 1e-4]");
}

double correlation(std::span<const double> x, std::span<const double> x2,
                   const KrigingHyperparameters& params) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    s += params.theta[i] * std::pow(std::abs(x[i] - x2[i]), params.p[i]);
  return std::exp(-s);
}

Matrix correlation_matrix(const Matrix& x, const KrigingHyperparameters& params) {
  const std::size_t n = x.rows();
  Matrix k(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    k(i, i) = 1.0;
    for (std::size_t j = 0; j < i; ++j) k(i, j) = k(j, i) = correlation(x.row(i), x.row(j), params);
  }
  return k;
}

namespace {

// Likelihood evaluation with the pairwise log-distances cached, so that
// |dx|^p = exp(p ln|dx|) costs one exp per pair and dimension. Only the
// lower triangle of the correlation matrix is formed.
class LikelihoodEvaluator {
 public:
  explicit LikelihoodEvaluator(const Dataset& data) : data_(data) {
    const std::size_t n = data.size();
    const std::size_t d = data.dimension();
    pairs_ = n * (n - 1) / 2;
    log_dist_.resize(d * pairs_);
    for (std::size_t k = 0; k < d; ++k) {
      double* out = &log_dist_[k * pairs_];
      std::size_t idx = 0;
      for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
          out[idx++] = std::log(std::abs(data.x(i, k) - data.x(j, k)));
    }
    exponent_sum_.resize(pairs_);
    correlation_.resize(pairs_);
    work_ = Matrix(n, n);
  }

  LikelihoodTerms operator()(const KrigingHyperparameters& params) {
    const std::size_t n = data_.size();
    const std::size_t d = data_.dimension();
    std::fill(exponent_sum_.begin(), exponent_sum_.end(), 0.0);
    for (std::size_t k = 0; k < d; ++k) {
      const double theta = params.theta[k];
      const double p = params.p[k];
      const double* ld = &log_dist_[k * pairs_];
      detail::accumulate_powers(ld, theta, p, exponent_sum_.data(), pairs_);
    }
    detail::exp_negated(exponent_sum_.data(), correlation_.data(), pairs_);

    LikelihoodTerms terms;
    double lambda = params.lambda;
    for (;;) {
      std::size_t idx = 0;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) work_(i, j) = correlation_[idx++];
        work_(i, i) = 1.0 + lambda;
      }
      if (cholesky_in_place(work_)) break;
      if (lambda >= kNuggetMax) return terms;
      lambda = std::min(lambda * 10.0, kNuggetMax);
    }

    const Vector ones(n, 1.0);
    const Vector u = solve_triangular(work_, ones);
    const Vector w = solve_triangular(work_, data_.y);
    double uu = 0.0, uw = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      uu += u[i] * u[i];
      uw += u[i] * w[i];
    }
    const double mu = uw / uu;
    double rr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = w[i] - mu * u[i];
      rr += r * r;
    }
    const double sigma2 = std::max(rr / static_cast<double>(n), kProcessVarianceFloor);
    double log_det = 0.0;
    for (std::size_t i = 0; i < n; ++i) log_det += std::log(work_(i, i));
    log_det *= 2.0;

    terms.neg_log_likelihood = 0.5 * static_cast<double>(n) * std::log(sigma2) + 0.5 * log_det;
    if (!std::isfinite(terms.neg_log_likelihood)) {
      terms.neg_log_likelihood = kLikelihoodPenalty;
      return terms;
    }
    terms.mu_hat = mu;
    terms.sigma2_hat = sigma2;
    terms.lambda_used = lambda;
    terms.penalized = false;
    return terms;
  }

  const Matrix& factor() const noexcept { return work_; }

 private:
  const Dataset& data_;
  std::size_t pairs_ = 0;
  std::vector<double> log_dist_;  // [dimension][pair], pairs in (i > j) row order
  std::vector<double> exponent_sum_;
  std::vector<double> correlation_;
  Matrix work_;
};

void require_fit_data(const Dataset& data) {
  if (data.x.rows() != data.y.size())
    throw std::invalid_argument("Dataset: x has " + std::to_string(data.x.rows()) + " rows, y has " +
                                std::to_string(data.y.size()) + " values");
  if (data.size() < 2) throw DegenerateData("at least two distinct points are required");
}

KrigingHyperparameters decode(std::span<const double> v, std::size_t d) {
  KrigingHyperparameters h;
  h.theta.resize(d);
  h.p.resize(d);
  for (std::size_t i = 0; i < d; ++i) {
    h.theta[i] = std::pow(10.0, v[i]);
    h.p[i] = v[d + i];
  }
  h.lambda = std::clamp(std::pow(10.0, v[2 * d]), kNuggetMin, kNuggetMax);
  return h;
}

}  // namespace

LikelihoodTerms likelihood_terms(const Dataset& data, const KrigingHyperparameters& params) {
  require_fit_data(data);
  LikelihoodEvaluator eval(data);
  LikelihoodTerms terms = eval(params);
  if (!terms.penalized) terms.chol = eval.factor();
  return terms;
}

double negative_log_likelihood(const Dataset& data, const KrigingHyperparameters& params) {
  require_fit_data(data);
  LikelihoodEvaluator eval(data);
  return eval(params).neg_log_likelihood;
}

KrigingModel KrigingModel::from_parameters(Dataset data, KrigingHyperparameters params) {
  require_fit_data(data);
  params.validate();
  if (params.dimension() != data.dimension())
    throw std::invalid_argument("KrigingModel: hyperparameter dimension mismatch");
  LikelihoodTerms terms = likelihood_terms(data, params);
  if (terms.penalized)
    throw NotPositiveDefinite("K + lambda I is not positive definite at the nugget cap");

  KrigingModel m;
  m.data_ = std::move(data);
  m.columns_ = m.data_.x.transposed();
  m.params_ = std::move(params);
  m.params_.lambda = terms.lambda_used;
  m.chol_ = std::move(terms.chol);
  m.mu_hat_ = terms.mu_hat;
  m.sigma2_hat_ = terms.sigma2_hat;
  m.nll_ = terms.neg_log_likelihood;
  Vector residual(m.data_.y);
  for (double& r : residual) r -= m.mu_hat_;
  m.weights_ = cholesky_solve(m.chol_, residual);
  return m;
}

void KrigingModel::correlations_to(std::span<const double> x, Vector& k) const {
  const std::size_t n = data_.size();
  const std::size_t d = data_.dimension();
  thread_local Vector sum, delta;
  sum.assign(n, 0.0);
  delta.resize(n);
  k.resize(n);
  for (std::size_t j = 0; j < d; ++j) {
    const double* column = columns_.row(j).data();
    for (std::size_t i = 0; i < n; ++i) delta[i] = x[j] - column[i];
    detail::accumulate_abs_powers(delta.data(), params_.theta[j], params_.p[j], sum.data(), n);
  }
  detail::exp_negated(sum.data(), k.data(), n);
  // Nugget effect: at a design point the correlation includes lambda, so
  // the predictor reproduces the observation exactly.
  for (std::size_t i = 0; i < n; ++i) {
    if (sum[i] != 0.0) continue;
    const auto xi = data_.x.row(i);
    if (std::equal(xi.begin(), xi.end(), x.begin())) k[i] = 1.0 + params_.lambda;
  }
}

double KrigingModel::predict_mean(std::span<const double> x) const {
  thread_local Vector k;
  correlations_to(x, k);
  double s = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) s += k[i] * weights_[i];
  return mu_hat_ + s;
}

Prediction KrigingModel::predict(std::span<const double> x) const {
  thread_local Vector k;
  correlations_to(x, k);
  double s = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) s += k[i] * weights_[i];

  // k' (K + lambda I)^-1 k = |L^-1 k|^2
  const std::size_t n = k.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double* li = chol_.row(i).data();
    double v = k[i];
    for (std::size_t j = 0; j < i; ++j) v -= li[j] * k[j];
    k[i] = v / li[i];
  }
  double explained = 0.0;
  for (double v : k) explained += v * v;

  Prediction out;
  out.mean = mu_hat_ + s;
  out.variance = std::max(0.0, sigma2_hat_ * (1.0 + params_.lambda - explained));
  return out;
}

KrigingModel fit(const Dataset& raw, std::uint64_t seed, const FitOptions& options) {
  if (raw.x.rows() != raw.y.size()) throw std::invalid_argument("Dataset: x/y size mismatch");
  Dataset data = deduplicate(raw);
  if (data.size() < 2) throw DegenerateData("fit: fewer than two distinct points");
  const auto [ymin, ymax] = std::minmax_element(data.y.begin(), data.y.end());
  if (*ymin == *ymax) throw DegenerateData("fit: all objective values are equal");

  const std::size_t d = data.dimension();
  const std::size_t t = hyperparameter_count(d);
  BoxBounds search;
  search.lower.assign(t, 0.0);
  search.upper.assign(t, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    search.lower[i] = kLog10ThetaMin;
    search.upper[i] = kLog10ThetaMax;
    search.lower[d + i] = kExponentMin;
    search.upper[d + i] = kExponentMax;
  }
  search.lower[2 * d] = kLog10NuggetMin;
  search.upper[2 * d] = kLog10NuggetMax;

  LikelihoodEvaluator eval(data);
  const auto objective = [&](std::span<const double> v) {
    return eval(decode(v, d)).neg_log_likelihood;
  };
  const DEConfig config = DEConfig::defaults(t, options.evaluations_per_parameter * t, seed);
  const DEResult best = minimize(objective, search, config);

  KrigingModel model = KrigingModel::from_parameters(std::move(data), decode(best.x_best, d));
  model.likelihood_evaluations_ = best.evaluations_used;
  return model;
}

}  // namespace smbo
