#include "grownet/network/attention.hpp"

#include <cmath>

namespace grownet::net {
namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

void GateGradients::zero_like(const AttentionGate& gate) {
  reduce_weight = Matrix::Zero(gate.reduce_weight.rows(),
                               gate.reduce_weight.cols());
  reduce_bias = Vector::Zero(gate.reduce_bias.size());
  gate_weight = Matrix::Zero(gate.gate_weight.rows(), gate.gate_weight.cols());
  gate_bias = Vector::Zero(gate.gate_bias.size());
}

Matrix gate_forward(const AttentionGate& gate, const Matrix& features,
                    GateCache* cache) {
  const Eigen::Index batch = features.rows();
  const Eigen::Index width = gate.prior_width;
  const Eigen::Index plane = gate.plane;
  if (features.cols() != width * plane) {
    throw ShapeMismatch("attention: feature width does not match gate");
  }

  Matrix pooled(batch, width);
  if (gate.channel_wise) {
    for (Eigen::Index c = 0; c < width; ++c) {
      pooled.col(c) = features.middleCols(c * plane, plane).rowwise().mean();
    }
  } else {
    pooled = features;
  }

  Matrix hidden_pre =
      (pooled * gate.reduce_weight.transpose()).rowwise() +
      gate.reduce_bias.transpose();
  const Matrix hidden = hidden_pre.cwiseMax(0.0);
  const Matrix gate_pre = (hidden * gate.gate_weight.transpose()).rowwise() +
                          gate.gate_bias.transpose();
  const Matrix beta = gate_pre.unaryExpr([](double x) { return sigmoid(x); });

  Matrix output(batch, features.cols());
  for (Eigen::Index c = 0; c < width; ++c) {
    output.middleCols(c * plane, plane) =
        features.middleCols(c * plane, plane).array().colwise() *
        beta.col(c).array();
  }

  if (cache != nullptr) {
    cache->pooled = std::move(pooled);
    cache->hidden_pre = std::move(hidden_pre);
    cache->beta = beta;
  }
  return output;
}

void gate_backward(const AttentionGate& gate, const Matrix& features,
                   const GateCache& cache, const Matrix& d_output,
                   GateGradients& grads) {
  const Eigen::Index batch = features.rows();
  const Eigen::Index width = gate.prior_width;
  const Eigen::Index plane = gate.plane;

  Matrix d_beta(batch, width);
  for (Eigen::Index c = 0; c < width; ++c) {
    d_beta.col(c) = (d_output.middleCols(c * plane, plane).array() *
                     features.middleCols(c * plane, plane).array())
                        .rowwise()
                        .sum();
  }

  const Matrix d_gate_pre =
      d_beta.array() * cache.beta.array() * (1.0 - cache.beta.array());
  const Matrix hidden = cache.hidden_pre.cwiseMax(0.0);
  grads.gate_weight += d_gate_pre.transpose() * hidden;
  grads.gate_bias += d_gate_pre.colwise().sum().transpose();

  Matrix d_hidden = d_gate_pre * gate.gate_weight;
  d_hidden = d_hidden.cwiseProduct(
      (cache.hidden_pre.array() > 0.0).cast<double>().matrix());
  grads.reduce_weight += d_hidden.transpose() * cache.pooled;
  grads.reduce_bias += d_hidden.colwise().sum().transpose();
}

Vector attention_channel(const Vector& features, const AttentionGate& gate) {
  if (!gate.channel_wise) {
    throw ShapeMismatch("attention_channel: gate is node-wise");
  }
  return gate_forward(gate, features.transpose()).row(0);
}

Vector attention_node(const Vector& features, const AttentionGate& gate) {
  if (gate.channel_wise) {
    throw ShapeMismatch("attention_node: gate is channel-wise");
  }
  return gate_forward(gate, features.transpose()).row(0);
}

}  // namespace grownet::net
