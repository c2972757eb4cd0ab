#include "grownet/acquisition/propose.hpp"

#include <cmath>
#include <limits>

#include "grownet/acquisition/expected_improvement.hpp"
#include "grownet/numeric/lbfgs.hpp"
#include "grownet/numeric/normal.hpp"

namespace grownet::acquisition {
namespace {

constexpr int kFallbackCandidates = 512;

bool same_point(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return false;
  }
  return true;
}

bool in_history(const Vector& point, const std::vector<Vector>& history) {
  for (const Vector& h : history) {
    if (same_point(point, h)) return true;
  }
  return false;
}

/// EI and its gradient with respect to normalized coordinates.
double ei_with_gradient(const gp::GpModel& model, double r_best,
                        const Vector& u, Vector* grad) {
  const gp::PosteriorGradient post = model.posterior_with_gradient(u);
  const double sigma = std::sqrt(post.sigma2);
  const double gap = post.mu - r_best;
  if (sigma < kSigmaFloor) {
    if (grad != nullptr) *grad = gap > 0.0 ? post.dmu : Vector::Zero(u.size());
    return std::max(0.0, gap);
  }
  const double t = gap / sigma;
  const double cdf = numeric::std_normal_cdf(t);
  const double pdf = numeric::std_normal_pdf(t);
  if (grad != nullptr) {
    const Vector dsigma = post.dsigma2 / (2.0 * sigma);
    *grad = cdf * post.dmu + pdf * dsigma;
  }
  return std::max(0.0, gap * cdf + sigma * pdf);
}

}  // namespace

Vector project_to_integer(const Vector& raw,
                          const numeric::BoundedBox& bounds) {
  Vector out(raw.size());
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    const double lo = std::ceil(bounds.lower()[i] - 1e-9);
    const double hi = std::floor(bounds.upper()[i] + 1e-9);
    double v = std::floor(raw[i] + 0.5);
    if (lo <= hi) {
      v = std::min(std::max(v, lo), hi);
    }
    out[i] = v;
  }
  return out;
}

Proposal propose_next(const gp::GpModel& model,
                      const numeric::BoundedBox& bounds,
                      const std::vector<Vector>& history, int n_starts,
                      numeric::Rng& rng) {
  const Eigen::Index dim = bounds.dim();
  const double r_best = model.best_observed_reward();

  if (bounds.degenerate()) {
    const Vector z = bounds.lower();
    const Vector u = bounds.normalize(z);
    return Proposal{z, z, ei_with_gradient(model, r_best, u, nullptr)};
  }

  const numeric::BoundedBox unit = numeric::BoundedBox::unit(dim);
  const auto negative_ei = [&](const Vector& u, Vector& grad) {
    Vector ei_grad;
    const double ei = ei_with_gradient(model, r_best, u, &ei_grad);
    grad = -ei_grad;
    return -ei;
  };

  std::vector<Vector> starts;
  if (n_starts > 1) {
    starts = numeric::latin_hypercube(
        rng, static_cast<std::size_t>(n_starts - 1), unit);
  }
  starts.push_back(unit.clamp(model.best_observed_point()));

  double best_ei = -std::numeric_limits<double>::infinity();
  Vector best_u;
  for (const Vector& start : starts) {
    const auto result =
        numeric::lbfgs_minimize(negative_ei, start, unit, 100, 1e-10);
    const double ei = -result.value;
    if (ei > best_ei) {
      best_ei = ei;
      best_u = result.x;
    }
  }

  Proposal proposal;
  proposal.raw_point = bounds.denormalize(best_u);
  proposal.point = project_to_integer(proposal.raw_point, bounds);
  proposal.ei_value = std::max(best_ei, 0.0);
  if (!in_history(proposal.point, history)) {
    return proposal;
  }

  // Duplicate projection: score a candidate pool and keep the best
  // whose projection is fresh.
  double fallback_ei = -std::numeric_limits<double>::infinity();
  Vector fallback_u;
  Vector fallback_point;
  for (const Vector& u :
       numeric::latin_hypercube(rng, kFallbackCandidates, unit)) {
    const Vector candidate = project_to_integer(bounds.denormalize(u), bounds);
    if (in_history(candidate, history)) continue;
    const double ei = ei_with_gradient(model, r_best, u, nullptr);
    if (ei > fallback_ei) {
      fallback_ei = ei;
      fallback_u = u;
      fallback_point = candidate;
    }
  }
  if (fallback_point.size() > 0) {
    proposal.raw_point = bounds.denormalize(fallback_u);
    proposal.point = fallback_point;
    proposal.ei_value = std::max(fallback_ei, 0.0);
  }
  return proposal;
}

}  // namespace grownet::acquisition
