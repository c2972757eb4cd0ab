#pragma once

#include <functional>
#include <stdexcept>

#include "grownet/numeric/bounded_box.hpp"
#include "grownet/numeric/linalg.hpp"

namespace grownet::numeric {

struct NonFiniteObjective : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Objective callback: fills `grad` and returns the value at `x`.
using ObjectiveFn = std::function<double(const Vector& x, Vector& grad)>;

struct LbfgsResult {
  Vector x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Box-constrained quasi-Newton minimizer. Iterates and search
/// directions are projected onto the box; terminates when the
/// infinity norm of the projected gradient step drops below `tol`
/// or after `max_iters` iterations. The returned point is always
/// inside the box and its value never exceeds the starting value.
LbfgsResult lbfgs_minimize(const ObjectiveFn& objective, const Vector& x0,
                           const BoundedBox& bounds, int max_iters = 200,
                           double tol = 1e-8);

}  // namespace grownet::numeric
