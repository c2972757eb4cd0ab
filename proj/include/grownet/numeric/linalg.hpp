#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace grownet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace numeric {

struct NotPositiveDefinite : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Lower-triangular factor L with L * L^T = a + jitter * I.
class CholeskyFactor {
public:
  CholeskyFactor() = default;
  CholeskyFactor(Matrix lower, double jitter)
      : lower_(std::move(lower)), jitter_(jitter) {}

  const Matrix& lower() const { return lower_; }
  double jitter() const { return jitter_; }
  Eigen::Index dim() const { return lower_.rows(); }

  /// Solves (L L^T) x = b by forward then back substitution.
  Vector solve(const Vector& b) const;
  Matrix solve(const Matrix& b) const;

  /// Sum of log-diagonal entries, i.e. 0.5 * log det(L L^T).
  double half_log_det() const;

private:
  Matrix lower_;
  double jitter_ = 0.0;
};

/// Factors a symmetric matrix, escalating diagonal jitter from
/// 1e-10*mean(diag) by factors of 10 up to 1e-4*mean(diag) when the
/// plain decomposition fails. Throws NotPositiveDefinite after the
/// last escalation.
CholeskyFactor cholesky(const Matrix& a);

inline Vector solve_psd(const CholeskyFactor& factor, const Vector& b) {
  if (b.size() != factor.dim()) {
    throw DimensionMismatch("solve_psd: rhs size does not match factor");
  }
  return factor.solve(b);
}

}  // namespace numeric
}  // namespace grownet
