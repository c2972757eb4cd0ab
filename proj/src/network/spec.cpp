#include "grownet/network/spec.hpp"

namespace grownet::net {

LayerSpec LayerSpec::dense_layer(int in_units, int out_units,
                                 Activation activation) {
  LayerSpec spec;
  spec.kind = LayerKind::dense;
  spec.activation = activation;
  spec.in_units = in_units;
  spec.out_units = out_units;
  return spec;
}

LayerSpec LayerSpec::conv_layer(int in_width, int in_height, int in_channels,
                                int filters, int kernel, int stride,
                                Activation activation) {
  LayerSpec spec;
  spec.kind = LayerKind::conv2d;
  spec.activation = activation;
  spec.in_width = in_width;
  spec.in_height = in_height;
  spec.in_channels = in_channels;
  spec.filters = filters;
  spec.kernel = kernel;
  spec.stride = stride;
  return spec;
}

void NetworkSpec::validate() const {
  if (layers.empty()) {
    throw InvalidSpec("network spec: needs at least one hidden layer");
  }
  if (class_count < 2) {
    throw InvalidSpec("network spec: class_count must be at least 2");
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const LayerSpec& layer = layers[i];
    if (layer.kind == LayerKind::dense) {
      if (layer.in_units <= 0 || layer.out_units <= 0) {
        throw InvalidSpec("network spec: dense layer sizes must be positive");
      }
    } else {
      if (layer.in_width <= 0 || layer.in_height <= 0 ||
          layer.in_channels <= 0 || layer.filters <= 0 || layer.kernel <= 0 ||
          layer.stride <= 0) {
        throw InvalidSpec("network spec: conv layer sizes must be positive");
      }
      if (layer.kernel > layer.in_width || layer.kernel > layer.in_height) {
        throw InvalidSpec("network spec: conv kernel exceeds input extent");
      }
    }
    if (i == 0) continue;
    const LayerSpec& prev = layers[i - 1];
    if (layer.kind == LayerKind::conv2d) {
      if (prev.kind != LayerKind::conv2d) {
        throw InvalidSpec("network spec: conv after dense is unsupported");
      }
      if (layer.in_channels != prev.filters ||
          layer.in_width != prev.out_width() ||
          layer.in_height != prev.out_height()) {
        throw InvalidSpec("network spec: conv chain dimensions do not match");
      }
    } else {
      const int expected = prev.feature_dim(prev.base_width());
      if (layer.in_units != expected) {
        throw InvalidSpec("network spec: dense input does not match previous "
                          "layer output");
      }
    }
  }
}

NetworkSpec dense_spec(const std::vector<int>& sizes) {
  if (sizes.size() < 3) {
    throw InvalidSpec("dense spec: needs input, at least one hidden layer, "
                      "and class count");
  }
  NetworkSpec spec;
  for (std::size_t i = 0; i + 2 < sizes.size(); ++i) {
    spec.layers.push_back(LayerSpec::dense_layer(sizes[i], sizes[i + 1]));
  }
  spec.class_count = sizes.back();
  spec.validate();
  return spec;
}

}  // namespace grownet::net
