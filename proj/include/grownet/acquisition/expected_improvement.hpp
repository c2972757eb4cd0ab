#pragma once

#include <algorithm>

#include "grownet/numeric/normal.hpp"

namespace grownet::acquisition {

/// Below this sigma the closed-form degenerate branch applies.
inline constexpr double kSigmaFloor = 1e-12;

/// Expected improvement of N(mu, sigma^2) above the incumbent best
/// reward; maximization-oriented.
inline double expected_improvement(double mu, double sigma, double r_best) {
  const double gap = mu - r_best;
  if (sigma < kSigmaFloor) {
    return std::max(0.0, gap);
  }
  const double u = gap / sigma;
  const double ei = gap * numeric::std_normal_cdf(u) +
                    sigma * numeric::std_normal_pdf(u);
  return std::max(0.0, ei);
}

}  // namespace grownet::acquisition
