#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace grownet::net {

struct InvalidSpec : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ShapeMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BoundsViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyDataset : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class LayerKind { dense, conv2d };
enum class Activation { relu, none };

/// One hidden layer of the base architecture. Sizes here are the
/// task-1 widths; later tasks grow the unit/filter counts without
/// touching the spec.
struct LayerSpec {
  LayerKind kind = LayerKind::dense;
  Activation activation = Activation::relu;

  // dense
  int in_units = 0;
  int out_units = 0;

  // conv2d
  int in_width = 0;
  int in_height = 0;
  int in_channels = 0;
  int filters = 0;
  int kernel = 0;
  int stride = 1;

  static LayerSpec dense_layer(int in_units, int out_units,
                               Activation activation = Activation::relu);
  static LayerSpec conv_layer(int in_width, int in_height, int in_channels,
                              int filters, int kernel, int stride = 1,
                              Activation activation = Activation::relu);

  int out_width() const {
    return kind == LayerKind::conv2d ? (in_width - kernel) / stride + 1 : 1;
  }
  int out_height() const {
    return kind == LayerKind::conv2d ? (in_height - kernel) / stride + 1 : 1;
  }
  /// Spatial positions per unit: 1 for dense, output plane for conv.
  int plane() const {
    return kind == LayerKind::conv2d ? out_width() * out_height() : 1;
  }
  /// Base width: task-1 units or filters.
  int base_width() const {
    return kind == LayerKind::dense ? out_units : filters;
  }
  /// Flattened feature count contributed by `width` units.
  int feature_dim(int width) const { return width * plane(); }
  /// Flattened input feature count at base widths.
  int input_dim() const {
    return kind == LayerKind::dense ? in_units
                                    : in_width * in_height * in_channels;
  }
};

struct NetworkSpec {
  std::vector<LayerSpec> layers;
  int class_count = 0;

  /// Throws InvalidSpec when layers are missing or dimensions do not
  /// chain.
  void validate() const;
  int input_dim() const { return layers.front().input_dim(); }
  int layer_count() const { return static_cast<int>(layers.size()); }
};

/// Dense chain: sizes = {input, hidden..., classes}; needs at least
/// one hidden layer.
NetworkSpec dense_spec(const std::vector<int>& sizes);

}  // namespace grownet::net
