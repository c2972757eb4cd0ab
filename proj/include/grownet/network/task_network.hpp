#pragma once

#include <vector>

#include "grownet/network/attention.hpp"
#include "grownet/network/spec.hpp"
#include "grownet/numeric/rng.hpp"

namespace grownet::net {

/// Units one task added to one layer, with their incoming weights.
/// Dense blocks: weight is units x visible input features. Conv
/// blocks: weight is filters x kernel*kernel*visible input channels.
struct ParamBlock {
  int owner = 0;
  int layer = 0;
  int units = 0;
  int in_visible = 0;  // input units/channels visible when created
  Matrix weight;
  Vector bias;

  long parameter_count() const {
    return static_cast<long>(weight.size()) + static_cast<long>(bias.size());
  }
};

struct OutputHead {
  int owner = 0;
  int in_features = 0;
  Matrix weight;  // class_count x in_features
  Vector bias;

  long parameter_count() const {
    return static_cast<long>(weight.size()) + static_cast<long>(bias.size());
  }
};

struct TrainHyper {
  double learning_rate = 0.1;
  double weight_decay = 1e-4;
  int epochs = 5;
  int batch_size = 32;
};

/// Per-layer gradients for one task's trainable parameters; entries
/// are empty where the task owns nothing.
struct TaskGradients {
  std::vector<Matrix> block_weight;
  std::vector<Vector> block_bias;
  std::vector<GateGradients> gate;
  std::vector<bool> has_gate;
  Matrix head_weight;
  Vector head_bias;
};

/// Layered parameter store with per-task ownership. Parameters owned
/// by finished tasks are frozen; forward passes for task t use only
/// owner <= t parameters, which keeps earlier tasks' outputs
/// bit-identical across later expansion and training.
class TaskNetwork {
public:
  /// Builds the task-1 base network; all parameters owner 1.
  TaskNetwork(NetworkSpec spec, numeric::Rng& rng, bool attention = true);

  const NetworkSpec& spec() const { return spec_; }
  int task_count() const { return task_count_; }
  bool attention_enabled() const { return attention_; }

  /// Adds z[n] units to layer n owned by `task`, one attention gate
  /// per layer over the prior-task features, and a fresh output head.
  /// Earlier owners are untouched.
  void expand(int task, const Vector& z, numeric::Rng& rng);

  /// Logits for `task`; uses exactly the owner <= task subgraph.
  Matrix forward(int task, const Matrix& inputs) const;

  /// Mean softmax cross-entropy of task logits against labels.
  double loss(int task, const Matrix& inputs,
              const std::vector<int>& labels) const;

  /// Full-batch gradients of the loss for task-owned parameters.
  TaskGradients gradients(int task, const Matrix& inputs,
                          const std::vector<int>& labels) const;

  /// Minibatch SGD with decoupled weight decay on task-owned
  /// parameters only; returns validation accuracy.
  double train_task(int task, const Matrix& train_x,
                    const std::vector<int>& train_y, const Matrix& val_x,
                    const std::vector<int>& val_y, const TrainHyper& hyper,
                    numeric::Rng& rng);

  /// Fraction of argmax-correct predictions.
  double evaluate(int task, const Matrix& inputs,
                  const std::vector<int>& labels) const;

  /// Total units/filters in `layer` owned by tasks <= max_owner.
  int layer_width(int layer, int max_owner) const;

  long parameter_count() const;
  long owner_parameter_count(int owner) const;

  /// Per-unit parameter cost of each layer at current widths.
  Vector per_unit_params() const;

  const std::vector<std::vector<ParamBlock>>& blocks() const { return blocks_; }
  std::vector<std::vector<ParamBlock>>& blocks() { return blocks_; }
  const std::vector<std::vector<AttentionGate>>& gates() const {
    return gates_;
  }
  std::vector<std::vector<AttentionGate>>& gates() { return gates_; }
  const std::vector<OutputHead>& heads() const { return heads_; }
  std::vector<OutputHead>& heads() { return heads_; }

  const AttentionGate* find_gate(int layer, int owner) const;
  const ParamBlock* find_block(int layer, int owner) const;

private:
  friend class TaskNetworkCodec;

  struct ForwardCache;
  Matrix forward_impl(int task, const Matrix& inputs,
                      ForwardCache* cache) const;
  void backward_impl(int task, const Matrix& d_logits,
                     const ForwardCache& cache, TaskGradients& grads) const;
  void apply_sgd(int task, const TaskGradients& grads, double lr,
                 double weight_decay);
  TaskGradients make_zero_gradients(int task) const;

  TaskNetwork() = default;  // codec use

  NetworkSpec spec_;
  bool attention_ = true;
  int task_count_ = 1;
  std::vector<std::vector<ParamBlock>> blocks_;
  std::vector<std::vector<AttentionGate>> gates_;
  std::vector<OutputHead> heads_;
};

/// Parameters contributed by one additional unit/filter in `layer`
/// given current per-layer widths: own fan-in plus bias plus the
/// downstream consumers at current widths.
long params_added_per_unit(const NetworkSpec& spec,
                           const std::vector<int>& widths, int layer);

}  // namespace grownet::net
