#pragma once

#include <cmath>

namespace grownet::numeric {

inline constexpr double kInvSqrt2Pi = 0.3989422804014326779;
inline constexpr double kInvSqrt2 = 0.7071067811865475244;

inline double std_normal_pdf(double x) {
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

/// Standard normal CDF via erfc; accurate to ~1e-16 relative over the
/// range the acquisition needs.
inline double std_normal_cdf(double x) {
  return 0.5 * std::erfc(-x * kInvSqrt2);
}

}  // namespace grownet::numeric
