#pragma once

#include "grownet/network/spec.hpp"
#include "grownet/numeric/linalg.hpp"

namespace grownet::net {

/// Sigmoid-bounded multipliers over the prior-task feature slice of
/// one layer. Channel-wise gates pool each channel plane to a scalar
/// first; node-wise gates read the feature vector directly.
struct AttentionGate {
  int owner = 0;
  int layer = 0;
  bool channel_wise = false;
  int plane = 1;        // spatial positions per gated channel
  int prior_width = 0;  // gated channels/nodes
  int bottleneck = 0;
  Matrix reduce_weight;  // bottleneck x prior_width
  Vector reduce_bias;
  Matrix gate_weight;  // prior_width x bottleneck
  Vector gate_bias;
};

struct GateCache {
  Matrix pooled;      // batch x prior_width
  Matrix hidden_pre;  // batch x bottleneck
  Matrix beta;        // batch x prior_width, each entry in (0,1)
};

struct GateGradients {
  Matrix reduce_weight;
  Vector reduce_bias;
  Matrix gate_weight;
  Vector gate_bias;

  void zero_like(const AttentionGate& gate);
};

/// Applies the gate to a batch of flattened features (channel-major
/// for conv features). Fills `cache` when given.
Matrix gate_forward(const AttentionGate& gate, const Matrix& features,
                    GateCache* cache = nullptr);

/// Accumulates parameter gradients given the loss gradient with
/// respect to the gated output. Frozen producers need no feature
/// gradient, so none is returned.
void gate_backward(const AttentionGate& gate, const Matrix& features,
                   const GateCache& cache, const Matrix& d_output,
                   GateGradients& grads);

/// Single-sample channel attention over a W*H*C feature map
/// (channel-major flattening).
Vector attention_channel(const Vector& features, const AttentionGate& gate);

/// Single-sample node attention over a feature vector.
Vector attention_node(const Vector& features, const AttentionGate& gate);

}  // namespace grownet::net
