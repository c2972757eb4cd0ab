#pragma once

#include <vector>

#include "grownet/gp/kernel.hpp"
#include "grownet/numeric/linalg.hpp"

namespace grownet::gp {

/// One search-space sample: point coordinates normalized to [0,1]
/// per dimension, with the observed reward in original units.
struct Observation {
  Vector point;
  double reward = 0.0;
};

struct Posterior {
  double mu = 0.0;
  double sigma2 = 0.0;
};

struct PosteriorGradient {
  double mu = 0.0;
  double sigma2 = 0.0;
  Vector dmu;
  Vector dsigma2;
};

/// Immutable Gaussian-process surrogate. Rewards are standardized to
/// zero mean / unit scale internally; posterior values are reported in
/// original reward units.
class GpModel {
public:
  GpModel(std::vector<Observation> observations, KernelParams params);

  /// Maximizes log marginal likelihood over the bounds with
  /// deterministic multi-start L-BFGS (see fit_starts).
  static GpModel fit(const std::vector<Observation>& observations,
                     const KernelBounds& bounds = {});

  /// The deterministic initial hyperparameters fit() starts from.
  static std::vector<KernelParams> fit_starts(Eigen::Index dim,
                                              const KernelBounds& bounds);

  Posterior posterior(const Vector& z) const;
  Posterior posterior_standardized(const Vector& z) const;
  PosteriorGradient posterior_with_gradient(const Vector& z) const;

  double log_marginal_likelihood() const { return lml_; }
  static double log_marginal_likelihood(
      const std::vector<Observation>& observations, const KernelParams& params);

  /// Likelihood and its gradient with respect to the log-parameters
  /// (lengthscales..., signal, noise); the fit objective.
  static std::pair<double, Vector> log_marginal_likelihood_gradient(
      const std::vector<Observation>& observations, const KernelParams& params);

  const std::vector<Observation>& observations() const { return observations_; }
  const KernelParams& params() const { return params_; }
  double reward_mean() const { return reward_mean_; }
  double reward_scale() const { return reward_scale_; }
  double best_observed_reward() const;
  const Vector& best_observed_point() const;
  Eigen::Index dim() const { return train_points_.cols(); }

private:
  std::vector<Observation> observations_;
  KernelParams params_;
  Matrix train_points_;
  Vector standardized_rewards_;
  double reward_mean_ = 0.0;
  double reward_scale_ = 1.0;
  numeric::CholeskyFactor chol_;
  Vector alpha_;
  double lml_ = 0.0;
};

}  // namespace grownet::gp
