#pragma once

// Test-only reference implementations, written straight-line and kept
// independent of the library paths they check.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "grownet/numeric/linalg.hpp"

namespace oracles {

using grownet::Matrix;
using grownet::Vector;

/// Dense solve by Gaussian elimination with partial pivoting.
inline Vector gaussian_elimination_solve(Matrix a, Vector b) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index pivot = col;
    for (Eigen::Index row = col + 1; row < n; ++row) {
      if (std::abs(a(row, col)) > std::abs(a(pivot, col))) pivot = row;
    }
    if (pivot != col) {
      a.row(pivot).swap(a.row(col));
      std::swap(b[pivot], b[col]);
    }
    for (Eigen::Index row = col + 1; row < n; ++row) {
      const double factor = a(row, col) / a(col, col);
      a.row(row) -= factor * a.row(col);
      b[row] -= factor * b[col];
    }
  }
  Vector x(n);
  for (Eigen::Index row = n - 1; row >= 0; --row) {
    double acc = b[row];
    for (Eigen::Index col = row + 1; col < n; ++col) {
      acc -= a(row, col) * x[col];
    }
    x[row] = acc / a(row, row);
  }
  return x;
}

/// Dense inverse by Gauss-Jordan elimination.
inline Matrix gauss_jordan_inverse(Matrix a) {
  const Eigen::Index n = a.rows();
  Matrix inv = Matrix::Identity(n, n);
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index pivot = col;
    for (Eigen::Index row = col + 1; row < n; ++row) {
      if (std::abs(a(row, col)) > std::abs(a(pivot, col))) pivot = row;
    }
    a.row(pivot).swap(a.row(col));
    inv.row(pivot).swap(inv.row(col));
    const double scale = a(col, col);
    a.row(col) /= scale;
    inv.row(col) /= scale;
    for (Eigen::Index row = 0; row < n; ++row) {
      if (row == col) continue;
      const double factor = a(row, col);
      a.row(row) -= factor * a.row(col);
      inv.row(row) -= factor * inv.row(col);
    }
  }
  return inv;
}

/// Simpson integration of the standard normal density over [lo, hi].
inline double simpson_normal_mass(double lo, double hi, double step) {
  const auto pdf = [](double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
  };
  const auto intervals = static_cast<long>(std::ceil((hi - lo) / step));
  const long n = intervals % 2 == 0 ? intervals : intervals + 1;
  const double h = (hi - lo) / static_cast<double>(n);
  double total = pdf(lo) + pdf(hi);
  for (long i = 1; i < n; ++i) {
    total += pdf(lo + h * static_cast<double>(i)) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return total * h / 3.0;
}

/// Matern-5/2 evaluated independently (same closed form, no shared
/// code with the library).
inline double matern52_reference(const Vector& x, const Vector& y,
                                 const Vector& lengthscale, double sv) {
  double d2 = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double r = (x[i] - y[i]) / lengthscale[i];
    d2 += r * r;
  }
  const double d = std::sqrt(d2);
  const double u = std::sqrt(5.0) * d;
  return sv * (1.0 + u + u * u / 3.0) * std::exp(-u);
}

/// GP posterior through an explicit dense inverse.
struct NaivePosterior {
  double mu = 0.0;
  double sigma2 = 0.0;
};

inline NaivePosterior naive_gp_posterior(const Matrix& points,
                                         const Vector& rewards,
                                         const Vector& lengthscale, double sv,
                                         double noise, const Vector& z) {
  const Eigen::Index n = points.rows();
  const double mean = rewards.mean();
  double var = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    var += (rewards[i] - mean) * (rewards[i] - mean);
  }
  var /= static_cast<double>(n);
  double scale = std::sqrt(var);
  if (!(scale > 1e-12)) scale = 1.0;
  Vector y(n);
  for (Eigen::Index i = 0; i < n; ++i) y[i] = (rewards[i] - mean) / scale;

  Matrix gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      gram(i, j) =
          matern52_reference(points.row(i), points.row(j), lengthscale, sv);
    }
    gram(i, i) += noise;
  }
  const Matrix inv = gauss_jordan_inverse(gram);
  Vector cross(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    cross[i] = matern52_reference(points.row(i), z, lengthscale, sv);
  }
  NaivePosterior out;
  const double mu_std = cross.dot(inv * y);
  const double var_std = sv - cross.dot(inv * cross);
  out.mu = mean + scale * mu_std;
  out.sigma2 = scale * scale * std::max(var_std, 0.0);
  return out;
}

/// Log marginal likelihood via determinant and inverse, standardized
/// the same way.
inline double naive_lml(const Matrix& points, const Vector& rewards,
                        const Vector& lengthscale, double sv, double noise) {
  const Eigen::Index n = points.rows();
  const double mean = rewards.mean();
  double var = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    var += (rewards[i] - mean) * (rewards[i] - mean);
  }
  var /= static_cast<double>(n);
  double scale = std::sqrt(var);
  if (!(scale > 1e-12)) scale = 1.0;
  Vector y(n);
  for (Eigen::Index i = 0; i < n; ++i) y[i] = (rewards[i] - mean) / scale;

  Matrix gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      gram(i, j) =
          matern52_reference(points.row(i), points.row(j), lengthscale, sv);
    }
    gram(i, i) += noise;
  }
  const Matrix inv = gauss_jordan_inverse(gram);
  const double quad = y.dot(inv * y);
  const double log_det = std::log(gram.determinant());
  return -0.5 * quad - 0.5 * log_det -
         0.5 * static_cast<double>(n) * std::log(2.0 * M_PI);
}

}  // namespace oracles
