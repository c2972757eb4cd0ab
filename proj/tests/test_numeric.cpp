#include <doctest.h>

#include <cmath>

#include "grownet/numeric/bounded_box.hpp"
#include "grownet/numeric/lbfgs.hpp"
#include "grownet/numeric/linalg.hpp"
#include "grownet/numeric/normal.hpp"
#include "grownet/numeric/rng.hpp"
#include "support/oracles.hpp"

using namespace grownet;
using namespace grownet::numeric;

namespace {

Matrix random_spd(Rng& rng, Eigen::Index n) {
  Matrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      a(i, j) = rng.uniform(-1.0, 1.0);
    }
  }
  return a.transpose() * a + Matrix::Identity(n, n);
}

}  // namespace

TEST_CASE("cholesky: identity and closed-form 2x2") {
  const Matrix eye = Matrix::Identity(2, 2);
  const CholeskyFactor factor = cholesky(eye);
  CHECK(factor.lower().isApprox(eye, 0.0));
  CHECK(factor.jitter() == 0.0);

  Matrix a(2, 2);
  a << 4.0, 2.0, 2.0, 3.0;
  const CholeskyFactor f2 = cholesky(a);
  CHECK(f2.lower()(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(f2.lower()(0, 1) == 0.0);
  CHECK(f2.lower()(1, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(f2.lower()(1, 1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("cholesky: random SPD reconstructs within 1e-10") {
  Rng rng(11);
  const Matrix a = random_spd(rng, 5);
  const CholeskyFactor factor = cholesky(a);
  const Matrix reconstructed =
      factor.lower() * factor.lower().transpose();
  const double rel =
      (reconstructed - a).norm() / a.norm();
  CHECK(rel <= 1e-10);
}

TEST_CASE("cholesky: indefinite matrix fails after jitter escalation") {
  Matrix a(2, 2);
  a << 1.0, 2.0, 2.0, 1.0;  // eigenvalues 3 and -1
  CHECK_THROWS_AS(cholesky(a), NotPositiveDefinite);
}

TEST_CASE("solve_psd: identity, diagonal, and elimination oracle") {
  const CholeskyFactor eye = cholesky(Matrix::Identity(2, 2));
  Vector b(2);
  b << 1.0, 2.0;
  CHECK(solve_psd(eye, b).isApprox(b, 1e-15));

  Matrix diag(2, 2);
  diag << 4.0, 0.0, 0.0, 9.0;
  Vector rhs(2);
  rhs << 4.0, 9.0;
  const Vector x = solve_psd(cholesky(diag), rhs);
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-14));

  Rng rng(5);
  const Matrix a = random_spd(rng, 6);
  Vector b6(6);
  for (int i = 0; i < 6; ++i) b6[i] = rng.uniform(-2.0, 2.0);
  const Vector solved = solve_psd(cholesky(a), b6);
  const Vector reference = oracles::gaussian_elimination_solve(a, b6);
  CHECK((solved - reference).lpNorm<Eigen::Infinity>() <= 1e-9);

  Vector wrong(3);
  CHECK_THROWS_AS(solve_psd(cholesky(a), wrong), DimensionMismatch);
}

TEST_CASE("cholesky+solve residual property over random SPD systems") {
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const auto n = static_cast<Eigen::Index>(2 + rng.index(19));  // up to 20
    const Matrix a = random_spd(rng, n);
    Vector b(n);
    for (Eigen::Index i = 0; i < n; ++i) b[i] = rng.uniform(-3.0, 3.0);
    const Vector x = solve_psd(cholesky(a), b);
    CHECK((a * x - b).norm() <= 1e-8 * b.norm());
  }
}

TEST_CASE("std normal pdf and cdf values") {
  CHECK(std_normal_pdf(0.0) == doctest::Approx(0.3989422804).epsilon(1e-10));
  CHECK(std_normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));

  // Simpson quadrature of the density over [-12, 1].
  const double reference = oracles::simpson_normal_mass(-12.0, 1.0, 1e-4);
  CHECK(std_normal_cdf(1.0) == doctest::Approx(reference).epsilon(1e-10));
  CHECK(std_normal_cdf(1.0) ==
        doctest::Approx(0.8413447461).epsilon(1e-9));
}

TEST_CASE("cdf symmetry within 1e-12") {
  for (double x = -8.0; x <= 8.0; x += 0.37) {
    CHECK(std::abs(std_normal_cdf(x) + std_normal_cdf(-x) - 1.0) <= 1e-12);
  }
}

TEST_CASE("lbfgs: 1-d quadratic interior and clipped minima") {
  const auto objective = [](const Vector& x, Vector& grad) {
    grad.resize(1);
    grad[0] = 2.0 * (x[0] - 3.0);
    return (x[0] - 3.0) * (x[0] - 3.0);
  };
  Vector x0(1);
  x0 << 0.0;

  const BoundedBox wide(Vector::Constant(1, -10.0), Vector::Constant(1, 10.0));
  const auto interior = lbfgs_minimize(objective, x0, wide, 100, 1e-10);
  CHECK(std::abs(interior.x[0] - 3.0) <= 1e-6);

  const BoundedBox clipped(Vector::Constant(1, -10.0),
                           Vector::Constant(1, 2.0));
  const auto at_bound = lbfgs_minimize(objective, x0, clipped, 100, 1e-10);
  CHECK(at_bound.x[0] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("lbfgs: rosenbrock reaches f < 1e-6, agrees with descent oracle") {
  const auto rosenbrock = [](const Vector& x, Vector& grad) {
    const double a = x[0];
    const double b = x[1];
    grad.resize(2);
    grad[0] = -2.0 * (1.0 - a) - 400.0 * a * (b - a * a);
    grad[1] = 200.0 * (b - a * a);
    return (1.0 - a) * (1.0 - a) + 100.0 * (b - a * a) * (b - a * a);
  };
  Vector x0(2);
  x0 << -1.2, 1.0;
  const BoundedBox box(Vector::Constant(2, -5.0), Vector::Constant(2, 5.0));
  const auto result = lbfgs_minimize(rosenbrock, x0, box, 500, 1e-12);
  CHECK(result.value < 1e-6);

  // Long plain gradient descent lands at the same minimum.
  Vector x = x0;
  Vector grad(2);
  for (int i = 0; i < 400000; ++i) {
    rosenbrock(x, grad);
    x -= 2e-4 * grad;
  }
  CHECK(std::abs(x[0] - 1.0) < 0.05);
  CHECK(std::abs(x[1] - 1.0) < 0.1);
  CHECK(std::abs(result.x[0] - 1.0) < 1e-3);
  CHECK(std::abs(result.x[1] - 1.0) < 1e-3);
}

TEST_CASE("lbfgs: stays inside bounds and never exceeds start value") {
  Rng rng(77);
  for (int trial = 0; trial < 25; ++trial) {
    const Eigen::Index dim = 1 + static_cast<Eigen::Index>(rng.index(4));
    Vector lo(dim);
    Vector hi(dim);
    Vector center(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      lo[i] = rng.uniform(-4.0, 0.0);
      hi[i] = lo[i] + rng.uniform(0.5, 5.0);
      center[i] = rng.uniform(-6.0, 6.0);
    }
    const BoundedBox box(lo, hi);
    Matrix quad = random_spd(rng, dim);
    const auto objective = [&](const Vector& x, Vector& grad) {
      const Vector d = x - center;
      grad = 2.0 * quad * d;
      return d.dot(quad * d);
    };
    Vector x0 = box.clamp(center + Vector::Constant(dim, 0.3));
    Vector g0(dim);
    const double f0 = objective(x0, g0);
    const auto result = lbfgs_minimize(objective, x0, box, 150, 1e-9);
    CHECK(box.contains(result.x, 1e-12));
    CHECK(result.value <= f0 + 1e-15);
  }
}

TEST_CASE("lbfgs: non-finite objective raises") {
  const auto bad = [](const Vector& x, Vector& grad) {
    grad = Vector::Zero(x.size());
    return std::numeric_limits<double>::quiet_NaN();
  };
  Vector x0 = Vector::Zero(1);
  const BoundedBox box(Vector::Constant(1, -1.0), Vector::Constant(1, 1.0));
  CHECK_THROWS_AS(lbfgs_minimize(bad, x0, box, 10, 1e-8), NonFiniteObjective);
}

TEST_CASE("rng determinism and ranges") {
  Rng a(123);
  Rng b(123);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.bits() == b.bits());
  }
  Rng r(9);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(r.index(7) < 7);
  }
}

TEST_CASE("latin hypercube strata cover the box") {
  Rng rng(4);
  const BoundedBox box(Vector::Constant(2, 1.0), Vector::Constant(2, 3.0));
  const auto points = latin_hypercube(rng, 8, box);
  REQUIRE(points.size() == 8);
  for (Eigen::Index d = 0; d < 2; ++d) {
    std::vector<bool> seen(8, false);
    for (const Vector& p : points) {
      CHECK(p[d] >= 1.0);
      CHECK(p[d] <= 3.0);
      const auto stratum = static_cast<std::size_t>((p[d] - 1.0) / 2.0 * 8.0);
      seen[std::min<std::size_t>(stratum, 7)] = true;
    }
    for (const bool s : seen) CHECK(s);
  }
}
