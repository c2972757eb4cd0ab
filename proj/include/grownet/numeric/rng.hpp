#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "grownet/numeric/bounded_box.hpp"
#include "grownet/numeric/linalg.hpp"

namespace grownet::numeric {

/// SplitMix64 step; used to derive stream seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) {
  std::uint64_t s = master ^ (tag * 0xd1342543de82ef95ULL);
  return splitmix64(s);
}

/// Seeded generator with platform-stable draw helpers. The standard
/// distributions are implementation-defined, so all sampling goes
/// through these instead.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

  /// Uniform index in [0, n); n must be positive.
  std::size_t index(std::size_t n) {
    // Rejection sampling keeps the draw unbiased.
    const std::uint64_t limit = ~0ULL - ~0ULL % n;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return static_cast<std::size_t>(v % n);
  }

  /// Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  Vector uniform_in(const BoundedBox& box) {
    Vector x(box.dim());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      x[i] = uniform(box.lower()[i], box.upper()[i]);
    }
    return x;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[index(i)]);
    }
  }

  /// Child generator for an independent, reproducible stream.
  Rng split(std::uint64_t tag) {
    const std::uint64_t s = engine_() ^ (tag * 0x9e3779b97f4a7c15ULL);
    std::uint64_t state = s;
    return Rng(splitmix64(state));
  }

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// One point per stratum and dimension, strata order shuffled per
/// dimension independently.
inline std::vector<Vector> latin_hypercube(Rng& rng, std::size_t count,
                                           const BoundedBox& box) {
  const auto dim = static_cast<std::size_t>(box.dim());
  std::vector<Vector> points(count, Vector::Zero(box.dim()));
  for (std::size_t d = 0; d < dim; ++d) {
    std::vector<std::size_t> strata(count);
    for (std::size_t i = 0; i < count; ++i) strata[i] = i;
    rng.shuffle(strata);
    for (std::size_t i = 0; i < count; ++i) {
      const double u = (static_cast<double>(strata[i]) + rng.uniform()) /
                       static_cast<double>(count);
      points[i][static_cast<Eigen::Index>(d)] =
          box.lower()[static_cast<Eigen::Index>(d)] +
          u * (box.upper()[static_cast<Eigen::Index>(d)] -
               box.lower()[static_cast<Eigen::Index>(d)]);
    }
  }
  return points;
}

}  // namespace grownet::numeric
