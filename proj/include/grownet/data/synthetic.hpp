#pragma once

#include <cstdint>

#include "grownet/data/labeled_set.hpp"

namespace grownet::data {

/// Procedural digit-like dataset: one smooth random prototype per
/// class, sampled with small shifts, intensity jitter, and pixel
/// noise. Deterministic in the seed.
struct SyntheticSpec {
  int image_size = 14;
  int classes = 10;
  int train_count = 6000;
  int test_count = 2000;
  double noise = 0.12;
  int max_shift = 2;
  std::uint64_t seed = 7;
};

struct SyntheticData {
  LabeledSet train;
  LabeledSet test;
};

SyntheticData make_synthetic_digits(const SyntheticSpec& spec);

}  // namespace grownet::data
