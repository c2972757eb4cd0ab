#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "grownet/data/labeled_set.hpp"

namespace grownet::data {

struct AngleOutOfRange : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Seeded Fisher-Yates permutation of 0..n-1.
std::vector<int> permutation_from_seed(int n, std::uint64_t seed);

std::vector<int> inverse_permutation(const std::vector<int>& perm);

/// New pixel p takes the value of old pixel perm[p], for every image.
LabeledSet apply_permutation(const LabeledSet& set,
                             const std::vector<int>& perm);

LabeledSet permute_pixels(const LabeledSet& set, std::uint64_t seed);

/// Rotates about the image center with bilinear interpolation and
/// zero fill; angle must lie in [0, 180] degrees.
LabeledSet rotate_images(const LabeledSet& set, double angle_degrees);

}  // namespace grownet::data
