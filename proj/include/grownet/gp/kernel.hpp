#pragma once

#include "grownet/numeric/linalg.hpp"

namespace grownet::gp {

/// Matern-5/2 hyperparameters with one lengthscale per input dimension.
struct KernelParams {
  Vector lengthscale;
  double signal_variance = 1.0;
  double noise_variance = 1e-4;
};

/// Box constraints used when fitting KernelParams.
struct KernelBounds {
  double lengthscale_min = 0.05;
  double lengthscale_max = 10.0;
  double signal_min = 0.05;
  double signal_max = 20.0;
  double noise_min = 1e-6;
  double noise_max = 1e-1;
};

/// Matern-5/2 covariance between two points.
double matern52(const Vector& x, const Vector& y, const KernelParams& params);

/// Gradient of matern52 with respect to its first argument.
Vector matern52_gradient(const Vector& x, const Vector& y,
                         const KernelParams& params);

/// Noise-free gram matrix; points are rows.
Matrix kernel_gram(const Matrix& points, const KernelParams& params);

/// Covariances k(z, x_i) against every row of points.
Vector kernel_cross(const Matrix& points, const Vector& z,
                    const KernelParams& params);

}  // namespace grownet::gp
