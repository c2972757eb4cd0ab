#include "grownet/gp/kernel.hpp"

#include <cmath>

namespace grownet::gp {
namespace {

const double kSqrt5 = std::sqrt(5.0);

double scaled_distance(const Vector& x, const Vector& y,
                       const Vector& lengthscale) {
  double d2 = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double r = (x[i] - y[i]) / lengthscale[i];
    d2 += r * r;
  }
  return std::sqrt(d2);
}

}  // namespace

double matern52(const Vector& x, const Vector& y, const KernelParams& params) {
  if (x.size() != y.size() || x.size() != params.lengthscale.size()) {
    throw numeric::DimensionMismatch("matern52: dimension mismatch");
  }
  const double u = kSqrt5 * scaled_distance(x, y, params.lengthscale);
  return params.signal_variance * (1.0 + u + u * u / 3.0) * std::exp(-u);
}

Vector matern52_gradient(const Vector& x, const Vector& y,
                         const KernelParams& params) {
  if (x.size() != y.size() || x.size() != params.lengthscale.size()) {
    throw numeric::DimensionMismatch("matern52_gradient: dimension mismatch");
  }
  const double u = kSqrt5 * scaled_distance(x, y, params.lengthscale);
  // d k / d x_i = -(5/3) sv (1+u) e^{-u} (x_i - y_i) / l_i^2
  const double common =
      -(5.0 / 3.0) * params.signal_variance * (1.0 + u) * std::exp(-u);
  Vector grad(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double l = params.lengthscale[i];
    grad[i] = common * (x[i] - y[i]) / (l * l);
  }
  return grad;
}

Matrix kernel_gram(const Matrix& points, const KernelParams& params) {
  const Eigen::Index n = points.rows();
  Matrix gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    gram(i, i) = params.signal_variance;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double k = matern52(points.row(i), points.row(j), params);
      gram(i, j) = k;
      gram(j, i) = k;
    }
  }
  return gram;
}

Vector kernel_cross(const Matrix& points, const Vector& z,
                    const KernelParams& params) {
  Vector out(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    out[i] = matern52(points.row(i), z, params);
  }
  return out;
}

}  // namespace grownet::gp
