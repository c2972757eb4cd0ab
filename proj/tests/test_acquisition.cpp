#include <doctest.h>

#include <cmath>

#include "grownet/acquisition/expected_improvement.hpp"
#include "grownet/acquisition/propose.hpp"
#include "grownet/gp/model.hpp"
#include "grownet/numeric/rng.hpp"

using namespace grownet;
using namespace grownet::acquisition;
using grownet::gp::GpModel;
using grownet::gp::KernelParams;
using grownet::gp::Observation;
using grownet::numeric::BoundedBox;
using grownet::numeric::Rng;

namespace {

std::vector<Observation> observations_1d(
    const std::vector<std::pair<double, double>>& pairs) {
  std::vector<Observation> obs;
  for (const auto& [x, r] : pairs) {
    Observation o;
    o.point = Vector::Constant(1, x);
    o.reward = r;
    obs.push_back(o);
  }
  return obs;
}

double monte_carlo_ei(double mu, double sigma, double r_best, long samples,
                      Rng& rng, double* standard_error) {
  double total = 0.0;
  double total_sq = 0.0;
  for (long i = 0; i < samples; ++i) {
    const double y = mu + sigma * rng.normal();
    const double imp = std::max(0.0, y - r_best);
    total += imp;
    total_sq += imp * imp;
  }
  const double mean = total / static_cast<double>(samples);
  const double var =
      total_sq / static_cast<double>(samples) - mean * mean;
  *standard_error = std::sqrt(std::max(var, 0.0) /
                              static_cast<double>(samples));
  return mean;
}

}  // namespace

TEST_CASE("expected improvement: pinned values and degenerate branch") {
  // mu == r_best with unit sigma collapses to the standard normal
  // density at zero.
  CHECK(expected_improvement(1.0, 1.0, 1.0) ==
        doctest::Approx(0.3989422804).epsilon(1e-9));
  CHECK(expected_improvement(-1.0, 0.0, 0.0) == 0.0);
  CHECK(expected_improvement(2.5, 0.0, 1.0) ==
        doctest::Approx(1.5).epsilon(1e-12));
  // Monte Carlo oracle for a representative triple.
  Rng rng(314);
  double se = 0.0;
  const double mc = monte_carlo_ei(1.0, 1.0, 0.0, 2000000, rng, &se);
  CHECK(std::abs(expected_improvement(1.0, 1.0, 0.0) - mc) <= 4.0 * se);
  CHECK(expected_improvement(1.0, 1.0, 0.0) ==
        doctest::Approx(1.0833154705876863).epsilon(1e-9));
}

TEST_CASE("expected improvement: monotonicity properties") {
  Rng rng(2718);
  for (int trial = 0; trial < 200; ++trial) {
    const double r_best = rng.uniform(-1.0, 1.0);
    const double sigma = rng.uniform(0.01, 3.0);
    const double mu_low = r_best + rng.uniform(-2.0, 2.0);
    const double mu_high = mu_low + rng.uniform(0.0, 1.0);
    CHECK(expected_improvement(mu_high, sigma, r_best) >=
          expected_improvement(mu_low, sigma, r_best) - 1e-12);

    // More uncertainty never hurts when the mean does not exceed the
    // incumbent.
    const double mu = r_best - rng.uniform(0.0, 2.0);
    const double sigma_high = sigma + rng.uniform(0.0, 2.0);
    CHECK(expected_improvement(mu, sigma_high, r_best) >=
          expected_improvement(mu, sigma, r_best) - 1e-12);
  }
}

TEST_CASE("project_to_integer: rounding, identity, clamping") {
  const BoundedBox box(Vector::Zero(2), Vector::Constant(2, 12.0));
  Vector raw(2);
  raw << 2.4, 7.5;
  Vector projected = project_to_integer(raw, box);
  CHECK(projected[0] == 2.0);
  CHECK(projected[1] == 8.0);

  raw << 0.0, 0.0;
  projected = project_to_integer(raw, box);
  CHECK(projected[0] == 0.0);
  CHECK(projected[1] == 0.0);

  raw << 11.7, 12.0;
  projected = project_to_integer(raw, box);
  CHECK(projected[0] == 12.0);
  CHECK(projected[1] == 12.0);
}

TEST_CASE("propose_next: beats a dense grid on 1-d fitted models") {
  Rng rng(99);
  const BoundedBox box(Vector::Zero(1), Vector::Ones(1));
  const auto obs = observations_1d({{0.2, 0.1}, {0.8, 0.9}});
  const GpModel model = GpModel::fit(obs);
  const Proposal proposal = propose_next(model, box, {}, 16, rng);

  double grid_best = 0.0;
  const double r_best = model.best_observed_reward();
  for (int i = 0; i <= 1000; ++i) {
    const Vector z = Vector::Constant(1, static_cast<double>(i) / 1000.0);
    const auto post = model.posterior(z);
    grid_best = std::max(grid_best,
                         expected_improvement(post.mu, std::sqrt(post.sigma2),
                                              r_best));
  }
  CHECK(proposal.ei_value >= grid_best - 1e-9);
}

TEST_CASE("propose_next: degenerate box returns its single point") {
  Rng rng(1);
  Vector fixed = Vector::Constant(2, 3.0);
  const BoundedBox box(fixed, fixed);
  std::vector<Observation> obs(1);
  obs[0].point = Vector::Constant(2, 0.0);
  obs[0].reward = 0.5;
  KernelParams params;
  params.lengthscale = Vector::Constant(2, 1.0);
  const GpModel model(obs, params);
  const Proposal proposal = propose_next(model, box, {}, 4, rng);
  CHECK(proposal.point[0] == 3.0);
  CHECK(proposal.point[1] == 3.0);
  CHECK(proposal.ei_value >= 0.0);
}

TEST_CASE("propose_next: explores away from a single noiseless point") {
  Rng rng(5);
  const BoundedBox box(Vector::Zero(1), Vector::Ones(1));
  std::vector<Observation> obs(1);
  obs[0].point = Vector::Constant(1, 0.5);
  obs[0].reward = 0.4;
  KernelParams params;
  params.lengthscale = Vector::Constant(1, 0.2);
  params.signal_variance = 1.0;
  params.noise_variance = 1e-6;
  const GpModel model(obs, params);
  const Proposal proposal = propose_next(model, box, {}, 16, rng);
  CHECK(std::abs(proposal.raw_point[0] - 0.5) > 0.05);
}

TEST_CASE("propose_next: duplicate projections fall back to fresh points") {
  Rng rng(8);
  const BoundedBox box(Vector::Zero(1), Vector::Constant(1, 3.0));
  const auto obs = observations_1d(
      {{0.0, 0.1}, {1.0 / 3.0, 0.5}, {2.0 / 3.0, 0.9}, {1.0, 0.2}});
  const GpModel model = GpModel::fit(obs);

  // Every grid point the optimizer could round to is history except 1.
  const std::vector<Vector> history = {Vector::Constant(1, 0.0),
                                       Vector::Constant(1, 2.0),
                                       Vector::Constant(1, 3.0)};
  const Proposal proposal = propose_next(model, box, history, 8, rng);
  CHECK(proposal.point[0] == 1.0);
}

TEST_CASE("propose_next: proposal EI never falls below the incumbent start") {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Observation> obs;
    const int n = 3 + static_cast<int>(rng.index(5));
    for (int i = 0; i < n; ++i) {
      Observation o;
      o.point = Vector::Constant(1, rng.uniform());
      o.reward = rng.uniform(0.0, 1.0);
      obs.push_back(o);
    }
    const GpModel model = GpModel::fit(obs);
    const BoundedBox box(Vector::Zero(1), Vector::Ones(1));
    const Proposal proposal = propose_next(model, box, {}, 8, rng);

    const auto post = model.posterior(model.best_observed_point());
    const double incumbent_ei = expected_improvement(
        post.mu, std::sqrt(post.sigma2), model.best_observed_reward());
    CHECK(proposal.ei_value >= incumbent_ei - 1e-9);
  }
}
