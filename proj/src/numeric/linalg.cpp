#include "grownet/numeric/linalg.hpp"

#include <Eigen/Cholesky>

namespace grownet::numeric {

Vector CholeskyFactor::solve(const Vector& b) const {
  Vector y = lower_.triangularView<Eigen::Lower>().solve(b);
  return lower_.transpose().triangularView<Eigen::Upper>().solve(y);
}

Matrix CholeskyFactor::solve(const Matrix& b) const {
  Matrix y = lower_.triangularView<Eigen::Lower>().solve(b);
  return lower_.transpose().triangularView<Eigen::Upper>().solve(y);
}

double CholeskyFactor::half_log_det() const {
  return lower_.diagonal().array().log().sum();
}

CholeskyFactor cholesky(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw DimensionMismatch("cholesky: matrix is not square");
  }
  const double mean_diag = a.diagonal().mean();

  double jitter = 0.0;
  for (;;) {
    Matrix shifted = a;
    if (jitter > 0.0) {
      shifted.diagonal().array() += jitter;
    }
    Eigen::LLT<Matrix> llt(shifted);
    if (llt.info() == Eigen::Success) {
      return CholeskyFactor(llt.matrixL(), jitter);
    }
    if (mean_diag <= 0.0) break;
    if (jitter == 0.0) {
      jitter = 1e-10 * mean_diag;
    } else if (jitter < 1e-4 * mean_diag) {
      jitter = std::min(jitter * 10.0, 1e-4 * mean_diag);
    } else {
      break;
    }
  }
  throw NotPositiveDefinite(
      "cholesky: matrix not positive definite after jitter escalation");
}

}  // namespace grownet::numeric
