#pragma once

#include <stdexcept>

#include "grownet/numeric/linalg.hpp"

namespace grownet::engine {

struct RewardBreakdown {
  double reward = 0.0;
  double penalty = 0.0;  // B_t <= 0
};

/// r = accuracy - sum_i z_i * alpha_i with alpha_i = alpha * P_i / sum_j P_j,
/// so the per-layer weights split `alpha` by relative parameter cost.
inline RewardBreakdown reward(double accuracy, const Vector& z,
                              const Vector& per_unit_params, double alpha) {
  if (z.size() != per_unit_params.size()) {
    throw std::invalid_argument("reward: z and parameter costs differ in size");
  }
  const double total = per_unit_params.sum();
  if (!(total > 0.0)) {
    throw std::invalid_argument("reward: parameter costs must be positive");
  }
  double penalty = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    penalty -= z[i] * alpha * per_unit_params[i] / total;
  }
  return RewardBreakdown{accuracy + penalty, penalty};
}

}  // namespace grownet::engine
