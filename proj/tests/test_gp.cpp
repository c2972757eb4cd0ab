#include <doctest.h>

#include <cmath>

#include "grownet/gp/kernel.hpp"
#include "grownet/gp/model.hpp"
#include "grownet/numeric/rng.hpp"
#include "support/oracles.hpp"

using namespace grownet;
using namespace grownet::gp;
using grownet::numeric::Rng;

namespace {

KernelParams unit_params(Eigen::Index dim, double noise = 1e-4) {
  KernelParams params;
  params.lengthscale = Vector::Constant(dim, 1.0);
  params.signal_variance = 1.0;
  params.noise_variance = noise;
  return params;
}

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

}  // namespace

TEST_CASE("matern52: zero distance, symmetry, frozen high-precision value") {
  KernelParams params = unit_params(3);
  params.signal_variance = 2.0;
  Vector x(3);
  x << 0.2, 0.5, 0.7;
  CHECK(matern52(x, x, params) == doctest::Approx(2.0).epsilon(1e-15));

  Rng rng(3);
  for (int i = 0; i < 10; ++i) {
    Vector a(3);
    Vector b(3);
    for (int d = 0; d < 3; ++d) {
      a[d] = rng.uniform(-2.0, 2.0);
      b[d] = rng.uniform(-2.0, 2.0);
    }
    CHECK(matern52(a, b, params) == matern52(b, a, params));
  }

  // Unit distance in 1-D: value computed at 50-digit precision.
  KernelParams one = unit_params(1);
  Vector p0 = Vector::Zero(1);
  Vector p1 = Vector::Ones(1);
  CHECK(matern52(p0, p1, one) ==
        doctest::Approx(0.52399410883182031).epsilon(1e-14));

  Vector wrong(2);
  CHECK_THROWS_AS(matern52(p0, wrong, one), numeric::DimensionMismatch);
}

TEST_CASE("matern52 gradient matches finite differences") {
  KernelParams params;
  params.lengthscale = Vector::Constant(2, 0.7);
  params.lengthscale[1] = 0.4;
  params.signal_variance = 1.5;
  Vector x(2);
  x << 0.3, 0.6;
  Vector y(2);
  y << 0.8, 0.1;
  const Vector grad = matern52_gradient(x, y, params);
  const double eps = 1e-6;
  for (int d = 0; d < 2; ++d) {
    Vector hi = x;
    Vector lo = x;
    hi[d] += eps;
    lo[d] -= eps;
    const double fd =
        (matern52(hi, y, params) - matern52(lo, y, params)) / (2.0 * eps);
    CHECK(grad[d] == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("gp fit: single observation interpolates its reward") {
  const auto obs = observations_1d({{0.4, 0.73}});
  const GpModel model = GpModel::fit(obs);
  const Posterior post = model.posterior(Vector::Constant(1, 0.4));
  CHECK(post.mu == doctest::Approx(0.73).epsilon(1e-9));
  CHECK(model.params().noise_variance ==
        doctest::Approx(KernelBounds{}.noise_min).epsilon(1e-3));
}

TEST_CASE("gp fit: refit recovers the generating lengthscale scale") {
  // Sample from a known 1-D GP, refit, and compare lengthscales; the
  // median over seeds must land within a factor of 3.
  const double true_lengthscale = 0.25;
  std::vector<double> fitted;
  for (int seed = 0; seed < 10; ++seed) {
    Rng rng(100 + static_cast<std::uint64_t>(seed));
    const int n = 15;
    Matrix points(n, 1);
    for (int i = 0; i < n; ++i) {
      points(i, 0) = rng.uniform();
    }
    KernelParams gen = unit_params(1, 1e-6);
    gen.lengthscale[0] = true_lengthscale;
    Matrix gram = kernel_gram(points, gen);
    gram.diagonal().array() += 1e-8;
    const numeric::CholeskyFactor chol = numeric::cholesky(gram);
    Vector normal(n);
    for (int i = 0; i < n; ++i) normal[i] = rng.normal();
    const Vector sample = chol.lower() * normal;

    std::vector<Observation> obs(n);
    for (int i = 0; i < n; ++i) {
      obs[static_cast<std::size_t>(i)].point = points.row(i);
      obs[static_cast<std::size_t>(i)].reward = sample[i];
    }
    fitted.push_back(GpModel::fit(obs).params().lengthscale[0]);
  }
  std::sort(fitted.begin(), fitted.end());
  const double median = 0.5 * (fitted[4] + fitted[5]);
  CHECK(median >= true_lengthscale / 3.0);
  CHECK(median <= true_lengthscale * 3.0);
}

TEST_CASE("gp fit: fitted likelihood dominates every start") {
  Rng rng(42);
  std::vector<Observation> obs;
  for (int i = 0; i < 5; ++i) {
    Observation o;
    o.point = Vector::Constant(1, static_cast<double>(i) / 4.0);
    o.reward = rng.uniform(-1.0, 1.0);
    obs.push_back(o);
  }
  const GpModel model = GpModel::fit(obs);
  const double fitted = model.log_marginal_likelihood();
  for (const KernelParams& start : GpModel::fit_starts(1, KernelBounds{})) {
    CHECK(fitted >= GpModel::log_marginal_likelihood(obs, start) - 1e-9);
  }
}

TEST_CASE("gp posterior: noiseless interpolation at a training point") {
  auto obs = observations_1d({{0.1, 0.3}, {0.5, 0.9}, {0.9, 0.2}});
  KernelParams params = unit_params(1, KernelBounds{}.noise_min);
  params.lengthscale[0] = 0.4;
  const GpModel model(obs, params);
  const Posterior post = model.posterior(Vector::Constant(1, 0.5));
  CHECK(post.mu == doctest::Approx(0.9).epsilon(1e-6));
}

TEST_CASE("gp posterior: reverts to prior far from data") {
  // Rewards standardized to mean 0, scale 1 for a direct comparison.
  auto obs = observations_1d({{0.45, -1.0}, {0.55, 1.0}});
  KernelParams params = unit_params(1, 1e-6);
  params.lengthscale[0] = 0.05;
  params.signal_variance = 1.7;
  const GpModel model(obs, params);
  const Posterior far = model.posterior(Vector::Constant(1, 40.0));
  CHECK(std::abs(far.mu - 0.0) <= 1e-3);
  CHECK(far.sigma2 == doctest::Approx(1.7).epsilon(1e-3));
}

TEST_CASE("gp posterior: matches dense-inverse oracle on a 3-point model") {
  auto obs = observations_1d({{0.2, 0.4}, {0.5, 0.8}, {0.7, 0.3}});
  KernelParams params = unit_params(1, 1e-3);
  params.lengthscale[0] = 0.3;
  params.signal_variance = 1.2;
  const GpModel model(obs, params);

  Matrix points(3, 1);
  points << 0.2, 0.5, 0.7;
  Vector rewards(3);
  rewards << 0.4, 0.8, 0.3;

  for (double z = 0.0; z <= 1.0; z += 0.13) {
    const Posterior post = model.posterior(Vector::Constant(1, z));
    const auto naive = oracles::naive_gp_posterior(
        points, rewards, params.lengthscale, params.signal_variance,
        params.noise_variance, Vector::Constant(1, z));
    CHECK(post.mu == doctest::Approx(naive.mu).epsilon(1e-8));
    CHECK(std::abs(post.sigma2 - naive.sigma2) <= 1e-8);
  }
}

TEST_CASE("log marginal likelihood: closed form, invariance, oracle") {
  // Single observation, reward 0, unit signal and noise.
  auto obs = observations_1d({{0.5, 0.0}});
  KernelParams params = unit_params(1, 1.0);
  CHECK(GpModel::log_marginal_likelihood(obs, params) ==
        doctest::Approx(-1.2655121234846454).epsilon(1e-10));

  // Constant reward shifts cancel in standardization.
  auto base = observations_1d({{0.1, 0.2}, {0.4, 0.9}, {0.8, 0.5}});
  auto shifted = base;
  for (Observation& o : shifted) o.reward += 11.0;
  KernelParams p2 = unit_params(1, 1e-2);
  CHECK(GpModel::log_marginal_likelihood(base, p2) ==
        doctest::Approx(GpModel::log_marginal_likelihood(shifted, p2))
            .epsilon(1e-12));

  // Four points against the determinant/inverse oracle.
  auto four =
      observations_1d({{0.05, 0.1}, {0.35, 0.7}, {0.6, 0.4}, {0.95, 0.9}});
  KernelParams p4 = unit_params(1, 5e-3);
  p4.lengthscale[0] = 0.45;
  p4.signal_variance = 0.8;
  Matrix pts(4, 1);
  pts << 0.05, 0.35, 0.6, 0.95;
  Vector rewards(4);
  rewards << 0.1, 0.7, 0.4, 0.9;
  const double naive =
      oracles::naive_lml(pts, rewards, p4.lengthscale, p4.signal_variance,
                         p4.noise_variance);
  CHECK(GpModel::log_marginal_likelihood(four, p4) ==
        doctest::Approx(naive).epsilon(1e-8));
}

TEST_CASE("gp properties: training variance bound, linearity, psd grams") {
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index dim = 1 + static_cast<Eigen::Index>(rng.index(3));
    const int n = 3 + static_cast<int>(rng.index(10));  // up to 12
    std::vector<Observation> obs;
    Matrix points(n, dim);
    for (int i = 0; i < n; ++i) {
      Observation o;
      o.point.resize(dim);
      for (Eigen::Index d = 0; d < dim; ++d) {
        o.point[d] = rng.uniform();
      }
      o.reward = rng.uniform(-2.0, 2.0);
      points.row(i) = o.point;
      obs.push_back(o);
    }
    KernelParams params;
    params.lengthscale = Vector::Constant(dim, rng.uniform(0.1, 2.0));
    params.signal_variance = rng.uniform(0.1, 5.0);
    params.noise_variance = rng.uniform(1e-6, 1e-2);
    const GpModel model(obs, params);

    // Posterior variance at a training point cannot exceed the noise
    // level (standardized units).
    for (const Observation& o : obs) {
      const Posterior post = model.posterior_standardized(o.point);
      CHECK(post.sigma2 <= params.noise_variance + 1e-6);
    }

    // Posterior mean is linear in rewards: shifting all rewards by c
    // shifts every posterior mean by c.
    const double c = 1.37;
    auto shifted = obs;
    for (Observation& o : shifted) o.reward += c;
    const GpModel shifted_model(shifted, params);
    Vector probe(dim);
    for (Eigen::Index d = 0; d < dim; ++d) probe[d] = rng.uniform();
    CHECK(shifted_model.posterior(probe).mu ==
          doctest::Approx(model.posterior(probe).mu + c).epsilon(1e-9));

    // Gram eigenvalues are nonnegative up to round-off.
    const Matrix gram = kernel_gram(points, params);
    Eigen::SelfAdjointEigenSolver<Matrix> eigen(gram);
    CHECK(eigen.eigenvalues().minCoeff() >= -1e-8);
  }
}

TEST_CASE("lml gradient used by fit matches finite differences") {
  // The fit objective's analytic gradient against central differences
  // over the log-parameters.
  Rng rng(19);
  std::vector<Observation> obs;
  for (int i = 0; i < 6; ++i) {
    Observation o;
    o.point = Vector::Constant(2, 0.0);
    o.point[0] = rng.uniform();
    o.point[1] = rng.uniform();
    o.reward = rng.uniform(-1.0, 1.0);
    obs.push_back(o);
  }
  KernelParams params;
  params.lengthscale = Vector::Constant(2, 0.6);
  params.lengthscale[1] = 0.3;
  params.signal_variance = 1.4;
  params.noise_variance = 3e-3;

  const auto [value, gradient] =
      GpModel::log_marginal_likelihood_gradient(obs, params);
  CHECK(value ==
        doctest::Approx(GpModel::log_marginal_likelihood(obs, params))
            .epsilon(1e-12));

  const auto lml_at = [&](const KernelParams& p) {
    return GpModel::log_marginal_likelihood(obs, p);
  };
  const double eps = 1e-6;
  for (int which = 0; which < 4; ++which) {
    KernelParams hi = params;
    KernelParams lo = params;
    double* hi_slot = which < 2 ? &hi.lengthscale[which]
                      : which == 2 ? &hi.signal_variance
                                   : &hi.noise_variance;
    double* lo_slot = which < 2 ? &lo.lengthscale[which]
                      : which == 2 ? &lo.signal_variance
                                   : &lo.noise_variance;
    *hi_slot = *hi_slot * std::exp(eps);
    *lo_slot = *lo_slot * std::exp(-eps);
    const double fd = (lml_at(hi) - lml_at(lo)) / (2.0 * eps);
    CHECK(gradient[which] == doctest::Approx(fd).epsilon(1e-5));
  }
}
