#pragma once

#include <stdexcept>
#include <string>

#include "grownet/data/labeled_set.hpp"

namespace grownet::data {

struct BadMagic : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TruncatedFile : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CountMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses the big-endian IDX pair (image magic 0x00000803, label
/// magic 0x00000801); pixels are scaled by 1/255.
LabeledSet load_idx(const std::string& images_path,
                    const std::string& labels_path);

/// Writes the set back out in the same container format.
void save_idx(const LabeledSet& set, const std::string& images_path,
              const std::string& labels_path);

}  // namespace grownet::data
