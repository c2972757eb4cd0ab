#include "grownet/numeric/lbfgs.hpp"

#include <cmath>
#include <deque>

namespace grownet::numeric {
namespace {

constexpr int kHistorySize = 8;
constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 50;

struct Correction {
  Vector s;
  Vector y;
  double rho;
};

double evaluate(const ObjectiveFn& objective, const Vector& x, Vector& grad) {
  const double value = objective(x, grad);
  if (!std::isfinite(value) || !grad.allFinite()) {
    throw NonFiniteObjective("lbfgs_minimize: non-finite objective evaluation");
  }
  return value;
}

/// Two-loop recursion for the quasi-Newton direction -H*g.
Vector descent_direction(const Vector& grad,
                         const std::deque<Correction>& history) {
  Vector q = -grad;
  if (history.empty()) return q;

  std::vector<double> alpha(history.size());
  for (std::size_t i = history.size(); i-- > 0;) {
    alpha[i] = history[i].rho * history[i].s.dot(q);
    q -= alpha[i] * history[i].y;
  }
  const auto& last = history.back();
  const double gamma = last.s.dot(last.y) / last.y.squaredNorm();
  q *= gamma;
  for (std::size_t i = 0; i < history.size(); ++i) {
    const double beta = history[i].rho * history[i].y.dot(q);
    q += (alpha[i] - beta) * history[i].s;
  }
  return q;
}

/// Zeroes direction components that push against an active bound.
void mask_active_bounds(const Vector& x, const BoundedBox& bounds, Vector& d) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if ((x[i] <= bounds.lower()[i] && d[i] < 0.0) ||
        (x[i] >= bounds.upper()[i] && d[i] > 0.0)) {
      d[i] = 0.0;
    }
  }
}

}  // namespace

LbfgsResult lbfgs_minimize(const ObjectiveFn& objective, const Vector& x0,
                           const BoundedBox& bounds, int max_iters,
                           double tol) {
  Vector x = bounds.clamp(x0);
  Vector grad(x.size());
  double f = evaluate(objective, x, grad);

  LbfgsResult best{x, f, 0, false};
  std::deque<Correction> history;

  for (int iter = 0; iter < max_iters; ++iter) {
    const double pg_norm =
        (x - bounds.clamp(x - grad)).lpNorm<Eigen::Infinity>();
    if (pg_norm <= tol) {
      best.converged = true;
      best.iterations = iter;
      return best;
    }

    Vector d = descent_direction(grad, history);
    mask_active_bounds(x, bounds, d);
    if (!d.allFinite() || d.dot(grad) >= 0.0) {
      d = -grad;
      mask_active_bounds(x, bounds, d);
    }
    if (d.lpNorm<Eigen::Infinity>() == 0.0) break;

    double alpha = 1.0;
    if (history.empty()) {
      const double g_norm = grad.lpNorm<Eigen::Infinity>();
      if (g_norm > 1.0) alpha = 1.0 / g_norm;
    }

    Vector x_next;
    Vector grad_next(x.size());
    double f_next = f;
    bool accepted = false;
    for (int bt = 0; bt < kMaxBacktracks; ++bt) {
      x_next = bounds.clamp(x + alpha * d);
      const Vector step = x_next - x;
      if (step.lpNorm<Eigen::Infinity>() == 0.0) break;
      f_next = evaluate(objective, x_next, grad_next);
      const double slope = grad.dot(step);
      if (f_next <= f + kArmijo * std::min(slope, 0.0)) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;

    const Vector s = x_next - x;
    const Vector y = grad_next - grad;
    const double sy = s.dot(y);
    if (sy > 1e-10 * s.norm() * y.norm()) {
      history.push_back({s, y, 1.0 / sy});
      if (history.size() > kHistorySize) history.pop_front();
    }

    x = std::move(x_next);
    f = f_next;
    grad = std::move(grad_next);
    if (f < best.value) {
      best.x = x;
      best.value = f;
    }
    best.iterations = iter + 1;
  }
  return best;
}

}  // namespace grownet::numeric
