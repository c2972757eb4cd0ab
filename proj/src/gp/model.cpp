#include "grownet/gp/model.hpp"

#include <cmath>
#include <limits>

#include "grownet/numeric/lbfgs.hpp"
#include "grownet/numeric/normal.hpp"
#include "grownet/numeric/rng.hpp"

namespace grownet::gp {
namespace {

constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kMinScale = 1e-12;

Matrix stack_points(const std::vector<Observation>& observations) {
  const auto n = static_cast<Eigen::Index>(observations.size());
  if (n == 0) {
    throw std::invalid_argument("GpModel: needs at least one observation");
  }
  const Eigen::Index d = observations.front().point.size();
  Matrix points(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (observations[static_cast<std::size_t>(i)].point.size() != d) {
      throw numeric::DimensionMismatch("GpModel: inconsistent point dims");
    }
    points.row(i) = observations[static_cast<std::size_t>(i)].point;
  }
  return points;
}

void standardize(const std::vector<Observation>& observations, double& mean,
                 double& scale, Vector& standardized) {
  const auto n = static_cast<Eigen::Index>(observations.size());
  Vector rewards(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    rewards[i] = observations[static_cast<std::size_t>(i)].reward;
  }
  mean = rewards.mean();
  const double var = (rewards.array() - mean).square().mean();
  scale = std::sqrt(var);
  if (!(scale > kMinScale)) scale = 1.0;
  standardized = (rewards.array() - mean) / scale;
}

/// Entry-wise derivative of the noisy gram with respect to
/// log-parameters; index 0..d-1 lengthscales, d signal, d+1 noise.
Matrix gram_log_derivative(const Matrix& points, const KernelParams& params,
                           const Matrix& gram, Eigen::Index which) {
  const Eigen::Index n = points.rows();
  const Eigen::Index d = points.cols();
  const double sqrt5 = std::sqrt(5.0);
  Matrix out = Matrix::Zero(n, n);
  if (which == d) {
    out = gram;  // d K / d log sv = K (noise-free part)
  } else if (which == d + 1) {
    out.diagonal().setConstant(params.noise_variance);
  } else {
    const double l = params.lengthscale[which];
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        double d2 = 0.0;
        for (Eigen::Index k = 0; k < d; ++k) {
          const double r = (points(i, k) - points(j, k)) / params.lengthscale[k];
          d2 += r * r;
        }
        const double u = sqrt5 * std::sqrt(d2);
        const double r_w = points(i, which) - points(j, which);
        const double value = params.signal_variance * (1.0 + u) *
                             std::exp(-u) * (5.0 / 3.0) * r_w * r_w / (l * l);
        out(i, j) = value;
        out(j, i) = value;
      }
    }
  }
  return out;
}

struct LmlEvaluation {
  double value = 0.0;
  Vector gradient;  // with respect to log-parameters
};

LmlEvaluation lml_with_gradient(const Matrix& points, const Vector& y,
                                const KernelParams& params) {
  const Eigen::Index n = points.rows();
  Matrix gram = kernel_gram(points, params);
  Matrix noisy = gram;
  noisy.diagonal().array() += params.noise_variance;
  const numeric::CholeskyFactor chol = numeric::cholesky(noisy);
  const Vector alpha = chol.solve(y);

  LmlEvaluation eval;
  eval.value = -0.5 * y.dot(alpha) - chol.half_log_det() -
               0.5 * static_cast<double>(n) * kLog2Pi;

  const Matrix identity = Matrix::Identity(n, n);
  const Matrix kinv = chol.solve(identity);
  const Matrix weighted = alpha * alpha.transpose() - kinv;
  const Eigen::Index d = points.cols();
  eval.gradient.resize(d + 2);
  for (Eigen::Index w = 0; w < d + 2; ++w) {
    const Matrix dk = gram_log_derivative(points, params, gram, w);
    eval.gradient[w] = 0.5 * weighted.cwiseProduct(dk).sum();
  }
  return eval;
}

KernelParams params_from_log(const Vector& theta, Eigen::Index dim) {
  KernelParams params;
  params.lengthscale = theta.head(dim).array().exp();
  params.signal_variance = std::exp(theta[dim]);
  params.noise_variance = std::exp(theta[dim + 1]);
  return params;
}

Vector log_from_params(const KernelParams& params) {
  const Eigen::Index d = params.lengthscale.size();
  Vector theta(d + 2);
  theta.head(d) = params.lengthscale.array().log();
  theta[d] = std::log(params.signal_variance);
  theta[d + 1] = std::log(params.noise_variance);
  return theta;
}

numeric::BoundedBox log_bounds(Eigen::Index dim, const KernelBounds& bounds) {
  Vector lo(dim + 2);
  Vector hi(dim + 2);
  lo.head(dim).setConstant(std::log(bounds.lengthscale_min));
  hi.head(dim).setConstant(std::log(bounds.lengthscale_max));
  lo[dim] = std::log(bounds.signal_min);
  hi[dim] = std::log(bounds.signal_max);
  lo[dim + 1] = std::log(bounds.noise_min);
  hi[dim + 1] = std::log(bounds.noise_max);
  return numeric::BoundedBox(std::move(lo), std::move(hi));
}

}  // namespace

GpModel::GpModel(std::vector<Observation> observations, KernelParams params)
    : observations_(std::move(observations)), params_(std::move(params)) {
  train_points_ = stack_points(observations_);
  if (params_.lengthscale.size() != train_points_.cols()) {
    throw numeric::DimensionMismatch(
        "GpModel: lengthscale dimension does not match points");
  }
  standardize(observations_, reward_mean_, reward_scale_,
              standardized_rewards_);
  Matrix noisy = kernel_gram(train_points_, params_);
  noisy.diagonal().array() += params_.noise_variance;
  chol_ = numeric::cholesky(noisy);
  alpha_ = chol_.solve(standardized_rewards_);
  lml_ = -0.5 * standardized_rewards_.dot(alpha_) - chol_.half_log_det() -
         0.5 * static_cast<double>(train_points_.rows()) * kLog2Pi;
}

std::vector<KernelParams> GpModel::fit_starts(Eigen::Index dim,
                                              const KernelBounds& bounds) {
  const numeric::BoundedBox box = log_bounds(dim, bounds);
  std::vector<KernelParams> starts;

  // Moderate default: mid lengthscale, unit signal, small noise.
  KernelParams base;
  base.lengthscale = Vector::Constant(dim, 0.5);
  base.signal_variance = 1.0;
  base.noise_variance = 1e-3;
  starts.push_back(params_from_log(box.clamp(log_from_params(base)), dim));

  numeric::Rng rng(0x5eedf17u);
  for (const Vector& theta : numeric::latin_hypercube(rng, 3, box)) {
    starts.push_back(params_from_log(theta, dim));
  }
  return starts;
}

GpModel GpModel::fit(const std::vector<Observation>& observations,
                     const KernelBounds& bounds) {
  const Matrix points = stack_points(observations);
  double mean = 0.0;
  double scale = 1.0;
  Vector y;
  standardize(observations, mean, scale, y);

  const Eigen::Index dim = points.cols();
  const numeric::BoundedBox box = log_bounds(dim, bounds);
  const auto objective = [&](const Vector& theta, Vector& grad) {
    const LmlEvaluation eval =
        lml_with_gradient(points, y, params_from_log(theta, dim));
    grad = -eval.gradient;
    return -eval.value;
  };

  double best_value = std::numeric_limits<double>::infinity();
  Vector best_theta;
  for (const KernelParams& start : fit_starts(dim, bounds)) {
    const auto result = numeric::lbfgs_minimize(
        objective, log_from_params(start), box, 100, 1e-7);
    if (result.value < best_value) {
      best_value = result.value;
      best_theta = result.x;
    }
  }
  return GpModel(observations, params_from_log(best_theta, dim));
}

double GpModel::log_marginal_likelihood(
    const std::vector<Observation>& observations, const KernelParams& params) {
  return GpModel(observations, params).log_marginal_likelihood();
}

std::pair<double, Vector> GpModel::log_marginal_likelihood_gradient(
    const std::vector<Observation>& observations, const KernelParams& params) {
  const Matrix points = stack_points(observations);
  double mean = 0.0;
  double scale = 1.0;
  Vector y;
  standardize(observations, mean, scale, y);
  const LmlEvaluation eval = lml_with_gradient(points, y, params);
  return {eval.value, eval.gradient};
}

Posterior GpModel::posterior_standardized(const Vector& z) const {
  if (z.size() != dim()) {
    throw numeric::DimensionMismatch("posterior: point dimension mismatch");
  }
  const Vector cross = kernel_cross(train_points_, z, params_);
  const double mu = cross.dot(alpha_);
  const Vector v = chol_.lower().triangularView<Eigen::Lower>().solve(cross);
  const double sigma2 = params_.signal_variance - v.squaredNorm();
  return Posterior{mu, std::max(sigma2, 0.0)};
}

Posterior GpModel::posterior(const Vector& z) const {
  const Posterior standardized = posterior_standardized(z);
  return Posterior{reward_mean_ + reward_scale_ * standardized.mu,
                   reward_scale_ * reward_scale_ * standardized.sigma2};
}

PosteriorGradient GpModel::posterior_with_gradient(const Vector& z) const {
  if (z.size() != dim()) {
    throw numeric::DimensionMismatch("posterior: point dimension mismatch");
  }
  const Eigen::Index n = train_points_.rows();
  const Vector cross = kernel_cross(train_points_, z, params_);
  Matrix cross_grad(n, dim());  // row i: d k(z, x_i) / d z
  for (Eigen::Index i = 0; i < n; ++i) {
    cross_grad.row(i) = matern52_gradient(z, train_points_.row(i), params_);
  }

  const double mu = cross.dot(alpha_);
  const Vector kinv_cross = chol_.solve(cross);
  const double sigma2 =
      std::max(params_.signal_variance - cross.dot(kinv_cross), 0.0);

  PosteriorGradient out;
  const double s2 = reward_scale_ * reward_scale_;
  out.mu = reward_mean_ + reward_scale_ * mu;
  out.sigma2 = s2 * sigma2;
  out.dmu = reward_scale_ * (cross_grad.transpose() * alpha_);
  out.dsigma2 = s2 * (-2.0 * (cross_grad.transpose() * kinv_cross));
  return out;
}

double GpModel::best_observed_reward() const {
  double best = observations_.front().reward;
  for (const Observation& obs : observations_) {
    best = std::max(best, obs.reward);
  }
  return best;
}

const Vector& GpModel::best_observed_point() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < observations_.size(); ++i) {
    if (observations_[i].reward > observations_[best].reward) best = i;
  }
  return observations_[best].point;
}

}  // namespace grownet::gp
