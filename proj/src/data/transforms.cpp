#include "grownet/data/transforms.hpp"

#include <cmath>

#include "grownet/numeric/rng.hpp"

namespace grownet::data {

std::vector<int> permutation_from_seed(int n, std::uint64_t seed) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  numeric::Rng rng(seed);
  rng.shuffle(perm);
  return perm;
}

std::vector<int> inverse_permutation(const std::vector<int>& perm) {
  std::vector<int> inverse(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    inverse[static_cast<std::size_t>(perm[i])] = static_cast<int>(i);
  }
  return inverse;
}

LabeledSet apply_permutation(const LabeledSet& set,
                             const std::vector<int>& perm) {
  if (static_cast<Eigen::Index>(perm.size()) != set.images.cols()) {
    throw std::invalid_argument("apply_permutation: size mismatch");
  }
  LabeledSet out = set;
  for (Eigen::Index p = 0; p < out.images.cols(); ++p) {
    out.images.col(p) = set.images.col(perm[static_cast<std::size_t>(p)]);
  }
  return out;
}

LabeledSet permute_pixels(const LabeledSet& set, std::uint64_t seed) {
  return apply_permutation(
      set, permutation_from_seed(static_cast<int>(set.images.cols()), seed));
}

LabeledSet rotate_images(const LabeledSet& set, double angle_degrees) {
  if (angle_degrees < 0.0 || angle_degrees > 180.0) {
    throw AngleOutOfRange("rotate_images: angle outside [0, 180]");
  }
  const double theta = angle_degrees * M_PI / 180.0;
  const double cos_t = std::cos(theta);
  const double sin_t = std::sin(theta);
  const int width = set.width;
  const int height = set.height;
  const int plane = width * height;
  const double cx = (width - 1) / 2.0;
  const double cy = (height - 1) / 2.0;

  LabeledSet out = set;
  for (Eigen::Index i = 0; i < set.size(); ++i) {
    for (int c = 0; c < set.channels; ++c) {
      const int base = c * plane;
      for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
          const double dx = x - cx;
          const double dy = y - cy;
          // Inverse map: sample the source rotated by -theta.
          const double sx = cx + cos_t * dx + sin_t * dy;
          const double sy = cy - sin_t * dx + cos_t * dy;
          const int x0 = static_cast<int>(std::floor(sx));
          const int y0 = static_cast<int>(std::floor(sy));
          const double fx = sx - x0;
          const double fy = sy - y0;
          double value = 0.0;
          for (int oy = 0; oy <= 1; ++oy) {
            for (int ox = 0; ox <= 1; ++ox) {
              const int px = x0 + ox;
              const int py = y0 + oy;
              if (px < 0 || px >= width || py < 0 || py >= height) continue;
              const double weight =
                  (ox == 1 ? fx : 1.0 - fx) * (oy == 1 ? fy : 1.0 - fy);
              value += weight * set.images(i, base + py * width + px);
            }
          }
          out.images(i, base + y * width + x) = value;
        }
      }
    }
  }
  return out;
}

}  // namespace grownet::data
