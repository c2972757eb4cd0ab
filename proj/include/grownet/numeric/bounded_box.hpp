#pragma once

#include <stdexcept>

#include "grownet/numeric/linalg.hpp"

namespace grownet::numeric {

/// Axis-aligned search domain with per-dimension [lower, upper] bounds.
class BoundedBox {
public:
  BoundedBox(Vector lower, Vector upper)
      : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.size() != upper_.size()) {
      throw DimensionMismatch("BoundedBox: bound vectors differ in size");
    }
    for (Eigen::Index i = 0; i < lower_.size(); ++i) {
      if (!(lower_[i] <= upper_[i])) {
        throw std::invalid_argument("BoundedBox: lower > upper");
      }
    }
  }

  /// [0,1]^dim.
  static BoundedBox unit(Eigen::Index dim) {
    return BoundedBox(Vector::Zero(dim), Vector::Ones(dim));
  }

  /// [0, cap]^dim with a shared integer cap per dimension.
  static BoundedBox zero_to(double cap, Eigen::Index dim) {
    return BoundedBox(Vector::Zero(dim), Vector::Constant(dim, cap));
  }

  Eigen::Index dim() const { return lower_.size(); }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }

  Vector clamp(Vector x) const {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      x[i] = std::min(std::max(x[i], lower_[i]), upper_[i]);
    }
    return x;
  }

  bool contains(const Vector& x, double tol = 0.0) const {
    if (x.size() != dim()) return false;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (x[i] < lower_[i] - tol || x[i] > upper_[i] + tol) return false;
    }
    return true;
  }

  /// Maps the box to [0,1] per dimension; degenerate dimensions map to 0.
  Vector normalize(const Vector& x) const {
    Vector out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double span = upper_[i] - lower_[i];
      out[i] = span > 0.0 ? (x[i] - lower_[i]) / span : 0.0;
    }
    return out;
  }

  Vector denormalize(const Vector& u) const {
    Vector out(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      out[i] = lower_[i] + u[i] * (upper_[i] - lower_[i]);
    }
    return out;
  }

  bool degenerate() const {
    return (upper_ - lower_).maxCoeff() <= 0.0;
  }

private:
  Vector lower_;
  Vector upper_;
};

}  // namespace grownet::numeric
