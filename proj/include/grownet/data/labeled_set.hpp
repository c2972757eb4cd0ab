#pragma once

#include <vector>

#include "grownet/numeric/linalg.hpp"

namespace grownet::data {

/// Images flattened channel-major (channel, row, column) with pixel
/// values in [0,1]; one row per sample.
struct LabeledSet {
  Matrix images;
  std::vector<int> labels;
  int width = 0;
  int height = 0;
  int channels = 1;
  int class_count = 10;

  Eigen::Index size() const { return images.rows(); }
  int pixel_count() const { return width * height * channels; }

  LabeledSet subset(const std::vector<Eigen::Index>& indices) const {
    LabeledSet out = *this;
    out.images.resize(static_cast<Eigen::Index>(indices.size()),
                      images.cols());
    out.labels.resize(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
      out.images.row(static_cast<Eigen::Index>(i)) = images.row(indices[i]);
      out.labels[i] = labels[static_cast<std::size_t>(indices[i])];
    }
    return out;
  }
};

}  // namespace grownet::data
