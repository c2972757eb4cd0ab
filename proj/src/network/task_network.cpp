#include "grownet/network/task_network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace grownet::net {
namespace {

void fill_uniform(numeric::Rng& rng, Matrix& m, double scale) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      m(r, c) = rng.uniform(-scale, scale);
    }
  }
}

/// Patch matrix for valid-padding convolution. Input features are
/// channel-major flattened; the patch columns are channel-major too,
/// matching the conv weight layout.
Matrix im2col(const Matrix& features, int width, int height, int channels,
              int kernel, int stride, int out_w, int out_h) {
  const Eigen::Index batch = features.rows();
  const int plane = width * height;
  Matrix cols(batch * out_h * out_w, kernel * kernel * channels);
  for (Eigen::Index b = 0; b < batch; ++b) {
    for (int oy = 0; oy < out_h; ++oy) {
      for (int ox = 0; ox < out_w; ++ox) {
        const Eigen::Index row = (b * out_h + oy) * out_w + ox;
        for (int c = 0; c < channels; ++c) {
          for (int ky = 0; ky < kernel; ++ky) {
            for (int kx = 0; kx < kernel; ++kx) {
              const int col = (c * kernel + ky) * kernel + kx;
              const int src = c * plane + (oy * stride + ky) * width +
                              (ox * stride + kx);
              cols(row, col) = features(b, src);
            }
          }
        }
      }
    }
  }
  return cols;
}

Matrix col2im(const Matrix& d_cols, Eigen::Index batch, int width, int height,
              int channels, int kernel, int stride, int out_w, int out_h) {
  const int plane = width * height;
  Matrix d_features = Matrix::Zero(batch, channels * plane);
  for (Eigen::Index b = 0; b < batch; ++b) {
    for (int oy = 0; oy < out_h; ++oy) {
      for (int ox = 0; ox < out_w; ++ox) {
        const Eigen::Index row = (b * out_h + oy) * out_w + ox;
        for (int c = 0; c < channels; ++c) {
          for (int ky = 0; ky < kernel; ++ky) {
            for (int kx = 0; kx < kernel; ++kx) {
              const int col = (c * kernel + ky) * kernel + kx;
              const int dst = c * plane + (oy * stride + ky) * width +
                              (ox * stride + kx);
              d_features(b, dst) += d_cols(row, col);
            }
          }
        }
      }
    }
  }
  return d_features;
}

/// Rows (b*OH+oy)*OW+ox by unit -> channel-major feature layout.
Matrix rows_to_features(const Matrix& rows, Eigen::Index batch, int units,
                        int out_w, int out_h) {
  const int plane = out_w * out_h;
  Matrix features(batch, units * plane);
  for (Eigen::Index b = 0; b < batch; ++b) {
    for (int u = 0; u < units; ++u) {
      for (int p = 0; p < plane; ++p) {
        features(b, u * plane + p) = rows(b * plane + p, u);
      }
    }
  }
  return features;
}

Matrix features_to_rows(const Matrix& features, Eigen::Index batch, int units,
                        int out_w, int out_h) {
  const int plane = out_w * out_h;
  Matrix rows(batch * plane, units);
  for (Eigen::Index b = 0; b < batch; ++b) {
    for (int u = 0; u < units; ++u) {
      for (int p = 0; p < plane; ++p) {
        rows(b * plane + p, u) = features(b, u * plane + p);
      }
    }
  }
  return rows;
}

struct SoftmaxLoss {
  double value = 0.0;
  Matrix d_logits;
};

SoftmaxLoss softmax_cross_entropy(const Matrix& logits,
                                  const std::vector<int>& labels) {
  const Eigen::Index batch = logits.rows();
  SoftmaxLoss out;
  out.d_logits.resize(batch, logits.cols());
  double total = 0.0;
  for (Eigen::Index b = 0; b < batch; ++b) {
    const double peak = logits.row(b).maxCoeff();
    Eigen::RowVectorXd shifted =
        (logits.row(b).array() - peak).exp().matrix();
    const double norm = shifted.sum();
    shifted /= norm;
    total -= std::log(std::max(shifted[labels[static_cast<std::size_t>(b)]],
                               1e-300));
    out.d_logits.row(b) = shifted;
    out.d_logits(b, labels[static_cast<std::size_t>(b)]) -= 1.0;
  }
  const double inv = 1.0 / static_cast<double>(batch);
  out.value = total * inv;
  out.d_logits *= inv;
  return out;
}

}  // namespace

struct TaskNetwork::ForwardCache {
  Matrix input;
  std::vector<Matrix> features;     // per layer, owners <= task
  std::vector<Matrix> block_input;  // per layer, task-owned block
  std::vector<Matrix> block_preact;
  std::vector<GateCache> gate_cache;  // per layer, task-owned gate
  std::vector<Matrix> gate_prior;     // raw prior slice fed to that gate
  std::vector<bool> gate_used;
  Matrix head_input;
};

TaskNetwork::TaskNetwork(NetworkSpec spec, numeric::Rng& rng, bool attention)
    : spec_(std::move(spec)), attention_(attention) {
  spec_.validate();
  const int layer_total = spec_.layer_count();
  blocks_.resize(layer_total);
  gates_.resize(layer_total);

  for (int n = 0; n < layer_total; ++n) {
    const LayerSpec& layer = spec_.layers[static_cast<std::size_t>(n)];
    ParamBlock block;
    block.owner = 1;
    block.layer = n;
    block.units = layer.base_width();
    if (layer.kind == LayerKind::dense) {
      block.in_visible = layer.in_units;
      block.weight.resize(block.units, layer.in_units);
    } else {
      block.in_visible = layer.in_channels;
      block.weight.resize(block.units,
                          layer.kernel * layer.kernel * layer.in_channels);
    }
    block.bias = Vector::Zero(block.units);
    fill_uniform(rng, block.weight,
                 1.0 / std::sqrt(static_cast<double>(block.weight.cols())));
    blocks_[static_cast<std::size_t>(n)].push_back(std::move(block));
  }

  OutputHead head;
  head.owner = 1;
  const LayerSpec& last = spec_.layers.back();
  head.in_features = last.feature_dim(last.base_width());
  head.weight.resize(spec_.class_count, head.in_features);
  head.bias = Vector::Zero(spec_.class_count);
  fill_uniform(rng, head.weight,
               1.0 / std::sqrt(static_cast<double>(head.in_features)));
  heads_.push_back(std::move(head));
}

int TaskNetwork::layer_width(int layer, int max_owner) const {
  int width = 0;
  for (const ParamBlock& block : blocks_[static_cast<std::size_t>(layer)]) {
    if (block.owner <= max_owner) width += block.units;
  }
  return width;
}

const AttentionGate* TaskNetwork::find_gate(int layer, int owner) const {
  for (const AttentionGate& gate : gates_[static_cast<std::size_t>(layer)]) {
    if (gate.owner == owner) return &gate;
  }
  return nullptr;
}

const ParamBlock* TaskNetwork::find_block(int layer, int owner) const {
  for (const ParamBlock& block : blocks_[static_cast<std::size_t>(layer)]) {
    if (block.owner == owner) return &block;
  }
  return nullptr;
}

void TaskNetwork::expand(int task, const Vector& z, numeric::Rng& rng) {
  if (task != task_count_ + 1) {
    throw std::invalid_argument("expand: tasks must arrive in order");
  }
  const int layer_total = spec_.layer_count();
  if (z.size() != layer_total) {
    throw ShapeMismatch("expand: z dimension does not match layer count");
  }
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (z[i] < 0.0 || z[i] != std::floor(z[i])) {
      throw BoundsViolation("expand: z must hold nonnegative integers");
    }
  }

  std::vector<int> prior_width(static_cast<std::size_t>(layer_total));
  for (int n = 0; n < layer_total; ++n) {
    prior_width[static_cast<std::size_t>(n)] = layer_width(n, task - 1);
  }

  if (attention_) {
    for (int n = 0; n < layer_total; ++n) {
      const LayerSpec& layer = spec_.layers[static_cast<std::size_t>(n)];
      AttentionGate gate;
      gate.owner = task;
      gate.layer = n;
      gate.channel_wise = layer.kind == LayerKind::conv2d;
      gate.plane = layer.plane();
      gate.prior_width = prior_width[static_cast<std::size_t>(n)];
      gate.bottleneck = std::max(4, (gate.prior_width + 3) / 4);
      gate.reduce_weight.resize(gate.bottleneck, gate.prior_width);
      gate.reduce_bias = Vector::Zero(gate.bottleneck);
      gate.gate_weight.resize(gate.prior_width, gate.bottleneck);
      // Positive output bias starts the gate near pass-through.
      gate.gate_bias = Vector::Ones(gate.prior_width);
      fill_uniform(rng, gate.reduce_weight,
                   1.0 / std::sqrt(static_cast<double>(gate.prior_width)));
      fill_uniform(rng, gate.gate_weight,
                   1.0 / std::sqrt(static_cast<double>(gate.bottleneck)));
      gates_[static_cast<std::size_t>(n)].push_back(std::move(gate));
    }
  }

  for (int n = 0; n < layer_total; ++n) {
    const int units = static_cast<int>(z[n]);
    if (units == 0) continue;
    const LayerSpec& layer = spec_.layers[static_cast<std::size_t>(n)];
    ParamBlock block;
    block.owner = task;
    block.layer = n;
    block.units = units;
    if (n == 0) {
      block.in_visible = layer.kind == LayerKind::dense ? layer.in_units
                                                        : layer.in_channels;
    } else {
      block.in_visible = prior_width[static_cast<std::size_t>(n - 1)] +
                         static_cast<int>(z[n - 1]);
    }
    if (layer.kind == LayerKind::dense) {
      const int in_features =
          n == 0 ? layer.in_units
                 : spec_.layers[static_cast<std::size_t>(n - 1)].feature_dim(
                       block.in_visible);
      block.weight.resize(units, in_features);
    } else {
      block.weight.resize(units,
                          layer.kernel * layer.kernel * block.in_visible);
    }
    block.bias = Vector::Zero(units);
    fill_uniform(rng, block.weight,
                 1.0 / std::sqrt(static_cast<double>(block.weight.cols())));
    blocks_[static_cast<std::size_t>(n)].push_back(std::move(block));
  }

  OutputHead head;
  head.owner = task;
  const LayerSpec& last = spec_.layers.back();
  head.in_features = last.feature_dim(
      prior_width[static_cast<std::size_t>(layer_total - 1)] +
      static_cast<int>(z[layer_total - 1]));
  head.weight.resize(spec_.class_count, head.in_features);
  head.bias = Vector::Zero(spec_.class_count);
  fill_uniform(rng, head.weight,
               1.0 / std::sqrt(static_cast<double>(head.in_features)));
  heads_.push_back(std::move(head));

  task_count_ = task;
}

Matrix TaskNetwork::forward_impl(int task, const Matrix& inputs,
                                 ForwardCache* cache) const {
  if (task < 1 || task > task_count_) {
    throw std::invalid_argument("forward: unknown task");
  }
  if (inputs.cols() != spec_.input_dim()) {
    throw ShapeMismatch("forward: input feature count does not match spec");
  }
  const int layer_total = spec_.layer_count();
  if (cache != nullptr) {
    cache->input = inputs;
    cache->features.resize(static_cast<std::size_t>(layer_total));
    cache->block_input.assign(static_cast<std::size_t>(layer_total), Matrix());
    cache->block_preact.assign(static_cast<std::size_t>(layer_total),
                               Matrix());
    cache->gate_cache.assign(static_cast<std::size_t>(layer_total),
                             GateCache());
    cache->gate_prior.assign(static_cast<std::size_t>(layer_total), Matrix());
    cache->gate_used.assign(static_cast<std::size_t>(layer_total), false);
  }

  const Eigen::Index batch = inputs.rows();
  Matrix previous = inputs;
  for (int n = 0; n < layer_total; ++n) {
    const LayerSpec& layer = spec_.layers[static_cast<std::size_t>(n)];
    const int total_width = layer_width(n, task);
    Matrix features(batch, layer.feature_dim(total_width));
    Eigen::Index col = 0;
    for (const ParamBlock& block : blocks_[static_cast<std::size_t>(n)]) {
      if (block.owner > task) continue;

      // Assemble this owner's input: for layers past the first, the
      // prior-task slice (gated for owners >= 2) followed by the
      // owner's own slice of the previous layer.
      Matrix block_in;
      if (n == 0) {
        block_in = previous;
      } else {
        const LayerSpec& prev_layer =
            spec_.layers[static_cast<std::size_t>(n - 1)];
        const int prior_w = layer_width(n - 1, block.owner - 1);
        const int prior_dim = prev_layer.feature_dim(prior_w);
        const int own_dim =
            prev_layer.feature_dim(block.in_visible) - prior_dim;
        block_in.resize(batch, prior_dim + own_dim);
        if (prior_dim > 0) {
          const Matrix prior = previous.leftCols(prior_dim);
          if (attention_) {
            const AttentionGate* gate = find_gate(n - 1, block.owner);
            const bool cache_gate =
                cache != nullptr && block.owner == task;
            block_in.leftCols(prior_dim) = gate_forward(
                *gate, prior,
                cache_gate ? &cache->gate_cache[static_cast<std::size_t>(n - 1)]
                           : nullptr);
            if (cache_gate) {
              cache->gate_prior[static_cast<std::size_t>(n - 1)] = prior;
              cache->gate_used[static_cast<std::size_t>(n - 1)] = true;
            }
          } else {
            block_in.leftCols(prior_dim) = prior;
          }
        }
        block_in.rightCols(own_dim) = previous.middleCols(prior_dim, own_dim);
      }

      Matrix preact;
      if (layer.kind == LayerKind::dense) {
        preact = block_in * block.weight.transpose();
        preact.rowwise() += block.bias.transpose();
      } else {
        const Matrix cols =
            im2col(block_in, layer.in_width, layer.in_height, block.in_visible,
                   layer.kernel, layer.stride, layer.out_width(),
                   layer.out_height());
        Matrix rows = cols * block.weight.transpose();
        rows.rowwise() += block.bias.transpose();
        preact = rows_to_features(rows, batch, block.units, layer.out_width(),
                                  layer.out_height());
      }
      Matrix activated = layer.activation == Activation::relu
                             ? preact.cwiseMax(0.0).eval()
                             : preact;
      if (cache != nullptr && block.owner == task) {
        cache->block_input[static_cast<std::size_t>(n)] = std::move(block_in);
        cache->block_preact[static_cast<std::size_t>(n)] = std::move(preact);
      }
      features.middleCols(col, activated.cols()) = activated;
      col += activated.cols();
    }
    previous = std::move(features);
    if (cache != nullptr) {
      cache->features[static_cast<std::size_t>(n)] = previous;
    }
  }

  // Head: all units of the last hidden layer, prior slice gated.
  const OutputHead& head = heads_[static_cast<std::size_t>(task - 1)];
  const LayerSpec& last = spec_.layers.back();
  const int prior_w = layer_width(layer_total - 1, task - 1);
  const int prior_dim = last.feature_dim(prior_w);
  Matrix head_in(batch, head.in_features);
  if (prior_dim > 0) {
    const Matrix prior = previous.leftCols(prior_dim);
    if (attention_) {
      const AttentionGate* gate = find_gate(layer_total - 1, task);
      head_in.leftCols(prior_dim) = gate_forward(
          *gate, prior,
          cache != nullptr
              ? &cache->gate_cache[static_cast<std::size_t>(layer_total - 1)]
              : nullptr);
      if (cache != nullptr) {
        cache->gate_prior[static_cast<std::size_t>(layer_total - 1)] = prior;
        cache->gate_used[static_cast<std::size_t>(layer_total - 1)] = true;
      }
    } else {
      head_in.leftCols(prior_dim) = prior;
    }
  }
  head_in.rightCols(head.in_features - prior_dim) =
      previous.middleCols(prior_dim, head.in_features - prior_dim);

  Matrix logits = head_in * head.weight.transpose();
  logits.rowwise() += head.bias.transpose();
  if (cache != nullptr) {
    cache->head_input = std::move(head_in);
  }
  return logits;
}

Matrix TaskNetwork::forward(int task, const Matrix& inputs) const {
  return forward_impl(task, inputs, nullptr);
}

TaskGradients TaskNetwork::make_zero_gradients(int task) const {
  const int layer_total = spec_.layer_count();
  TaskGradients grads;
  grads.block_weight.resize(static_cast<std::size_t>(layer_total));
  grads.block_bias.resize(static_cast<std::size_t>(layer_total));
  grads.gate.resize(static_cast<std::size_t>(layer_total));
  grads.has_gate.assign(static_cast<std::size_t>(layer_total), false);
  for (int n = 0; n < layer_total; ++n) {
    if (const ParamBlock* block = find_block(n, task)) {
      grads.block_weight[static_cast<std::size_t>(n)] =
          Matrix::Zero(block->weight.rows(), block->weight.cols());
      grads.block_bias[static_cast<std::size_t>(n)] =
          Vector::Zero(block->bias.size());
    }
    if (attention_ && task >= 2) {
      if (const AttentionGate* gate = find_gate(n, task)) {
        grads.gate[static_cast<std::size_t>(n)].zero_like(*gate);
        grads.has_gate[static_cast<std::size_t>(n)] = true;
      }
    }
  }
  const OutputHead& head = heads_[static_cast<std::size_t>(task - 1)];
  grads.head_weight = Matrix::Zero(head.weight.rows(), head.weight.cols());
  grads.head_bias = Vector::Zero(head.bias.size());
  return grads;
}

void TaskNetwork::backward_impl(int task, const Matrix& d_logits,
                                const ForwardCache& cache,
                                TaskGradients& grads) const {
  const int layer_total = spec_.layer_count();
  const Eigen::Index batch = d_logits.rows();
  const OutputHead& head = heads_[static_cast<std::size_t>(task - 1)];
  const LayerSpec& last = spec_.layers.back();

  grads.head_weight += d_logits.transpose() * cache.head_input;
  grads.head_bias += d_logits.colwise().sum().transpose();
  const Matrix d_head_in = d_logits * head.weight;

  const int head_prior_dim = last.feature_dim(layer_width(layer_total - 1,
                                                          task - 1));
  if (head_prior_dim > 0 && attention_ && task >= 2) {
    gate_backward(*find_gate(layer_total - 1, task),
                  cache.gate_prior[static_cast<std::size_t>(layer_total - 1)],
                  cache.gate_cache[static_cast<std::size_t>(layer_total - 1)],
                  d_head_in.leftCols(head_prior_dim),
                  grads.gate[static_cast<std::size_t>(layer_total - 1)]);
  }

  // Gradient with respect to the task-owned feature slice, walked
  // from the last hidden layer down.
  Matrix d_own = d_head_in.rightCols(d_head_in.cols() - head_prior_dim);
  for (int n = layer_total - 1; n >= 0; --n) {
    const LayerSpec& layer = spec_.layers[static_cast<std::size_t>(n)];
    const ParamBlock* block = find_block(n, task);

    Matrix d_own_next;
    if (n > 0) {
      const LayerSpec& prev_layer =
          spec_.layers[static_cast<std::size_t>(n - 1)];
      const ParamBlock* prev_block = find_block(n - 1, task);
      d_own_next = Matrix::Zero(
          batch,
          prev_layer.feature_dim(prev_block != nullptr ? prev_block->units
                                                       : 0));
    }

    if (block != nullptr && d_own.cols() > 0) {
      const Matrix& preact = cache.block_preact[static_cast<std::size_t>(n)];
      Matrix d_z =
          layer.activation == Activation::relu
              ? d_own.cwiseProduct(
                        (preact.array() > 0.0).cast<double>().matrix())
                    .eval()
              : d_own;
      const Matrix& block_in = cache.block_input[static_cast<std::size_t>(n)];

      Matrix d_input;
      if (layer.kind == LayerKind::dense) {
        grads.block_weight[static_cast<std::size_t>(n)] +=
            d_z.transpose() * block_in;
        grads.block_bias[static_cast<std::size_t>(n)] +=
            d_z.colwise().sum().transpose();
        d_input = d_z * block->weight;
      } else {
        const Matrix d_rows = features_to_rows(d_z, batch, block->units,
                                               layer.out_width(),
                                               layer.out_height());
        const Matrix cols = im2col(block_in, layer.in_width, layer.in_height,
                                   block->in_visible, layer.kernel,
                                   layer.stride, layer.out_width(),
                                   layer.out_height());
        grads.block_weight[static_cast<std::size_t>(n)] +=
            d_rows.transpose() * cols;
        grads.block_bias[static_cast<std::size_t>(n)] +=
            d_rows.colwise().sum().transpose();
        const Matrix d_cols = d_rows * block->weight;
        d_input = col2im(d_cols, batch, layer.in_width, layer.in_height,
                         block->in_visible, layer.kernel, layer.stride,
                         layer.out_width(), layer.out_height());
      }

      if (n > 0) {
        const LayerSpec& prev_layer =
            spec_.layers[static_cast<std::size_t>(n - 1)];
        const int prior_dim =
            prev_layer.feature_dim(layer_width(n - 1, task - 1));
        if (prior_dim > 0 && attention_ && task >= 2) {
          gate_backward(*find_gate(n - 1, task),
                        cache.gate_prior[static_cast<std::size_t>(n - 1)],
                        cache.gate_cache[static_cast<std::size_t>(n - 1)],
                        d_input.leftCols(prior_dim),
                        grads.gate[static_cast<std::size_t>(n - 1)]);
        }
        d_own_next += d_input.rightCols(d_input.cols() - prior_dim);
      }
    }
    d_own = std::move(d_own_next);
  }
}

double TaskNetwork::loss(int task, const Matrix& inputs,
                         const std::vector<int>& labels) const {
  const Matrix logits = forward(task, inputs);
  return softmax_cross_entropy(logits, labels).value;
}

TaskGradients TaskNetwork::gradients(int task, const Matrix& inputs,
                                     const std::vector<int>& labels) const {
  ForwardCache cache;
  const Matrix logits = forward_impl(task, inputs, &cache);
  const SoftmaxLoss loss = softmax_cross_entropy(logits, labels);
  TaskGradients grads = make_zero_gradients(task);
  backward_impl(task, loss.d_logits, cache, grads);
  return grads;
}

void TaskNetwork::apply_sgd(int task, const TaskGradients& grads, double lr,
                            double weight_decay) {
  const int layer_total = spec_.layer_count();
  for (int n = 0; n < layer_total; ++n) {
    for (ParamBlock& block : blocks_[static_cast<std::size_t>(n)]) {
      if (block.owner != task) continue;
      block.weight -= lr * grads.block_weight[static_cast<std::size_t>(n)] +
                      (lr * weight_decay) * block.weight;
      block.bias -= lr * grads.block_bias[static_cast<std::size_t>(n)] +
                    (lr * weight_decay) * block.bias;
    }
    if (!grads.has_gate[static_cast<std::size_t>(n)]) continue;
    for (AttentionGate& gate : gates_[static_cast<std::size_t>(n)]) {
      if (gate.owner != task) continue;
      const GateGradients& g = grads.gate[static_cast<std::size_t>(n)];
      gate.reduce_weight -=
          lr * g.reduce_weight + (lr * weight_decay) * gate.reduce_weight;
      gate.reduce_bias -=
          lr * g.reduce_bias + (lr * weight_decay) * gate.reduce_bias;
      gate.gate_weight -=
          lr * g.gate_weight + (lr * weight_decay) * gate.gate_weight;
      gate.gate_bias -=
          lr * g.gate_bias + (lr * weight_decay) * gate.gate_bias;
    }
  }
  OutputHead& head = heads_[static_cast<std::size_t>(task - 1)];
  head.weight -= lr * grads.head_weight + (lr * weight_decay) * head.weight;
  head.bias -= lr * grads.head_bias + (lr * weight_decay) * head.bias;
}

double TaskNetwork::train_task(int task, const Matrix& train_x,
                               const std::vector<int>& train_y,
                               const Matrix& val_x,
                               const std::vector<int>& val_y,
                               const TrainHyper& hyper, numeric::Rng& rng) {
  if (train_x.rows() == 0 || val_x.rows() == 0) {
    throw EmptyDataset("train_task: empty train or validation set");
  }
  if (train_x.rows() != static_cast<Eigen::Index>(train_y.size())) {
    throw ShapeMismatch("train_task: image and label counts differ");
  }

  const auto n = static_cast<std::size_t>(train_x.rows());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  const int decay_epoch = std::max(1, (2 * hyper.epochs) / 3);
  TaskGradients grads = make_zero_gradients(task);
  ForwardCache cache;

  for (int epoch = 0; epoch < hyper.epochs; ++epoch) {
    const double lr = hyper.learning_rate * (epoch >= decay_epoch ? 0.3 : 1.0);
    rng.shuffle(order);
    for (std::size_t start = 0; start < n;
         start += static_cast<std::size_t>(hyper.batch_size)) {
      const std::size_t count =
          std::min(static_cast<std::size_t>(hyper.batch_size), n - start);
      Matrix batch_x(static_cast<Eigen::Index>(count), train_x.cols());
      std::vector<int> batch_y(count);
      for (std::size_t i = 0; i < count; ++i) {
        batch_x.row(static_cast<Eigen::Index>(i)) =
            train_x.row(static_cast<Eigen::Index>(order[start + i]));
        batch_y[i] = train_y[order[start + i]];
      }

      const Matrix logits = forward_impl(task, batch_x, &cache);
      const SoftmaxLoss batch_loss = softmax_cross_entropy(logits, batch_y);

      for (auto& m : grads.block_weight) m.setZero();
      for (auto& v : grads.block_bias) v.setZero();
      for (std::size_t g = 0; g < grads.gate.size(); ++g) {
        if (!grads.has_gate[g]) continue;
        grads.gate[g].reduce_weight.setZero();
        grads.gate[g].reduce_bias.setZero();
        grads.gate[g].gate_weight.setZero();
        grads.gate[g].gate_bias.setZero();
      }
      grads.head_weight.setZero();
      grads.head_bias.setZero();

      backward_impl(task, batch_loss.d_logits, cache, grads);
      apply_sgd(task, grads, lr, hyper.weight_decay);
    }
  }
  return evaluate(task, val_x, val_y);
}

double TaskNetwork::evaluate(int task, const Matrix& inputs,
                             const std::vector<int>& labels) const {
  if (inputs.rows() == 0) {
    throw EmptyDataset("evaluate: empty dataset");
  }
  if (inputs.rows() != static_cast<Eigen::Index>(labels.size())) {
    throw ShapeMismatch("evaluate: image and label counts differ");
  }
  const Eigen::Index n = inputs.rows();
  const Eigen::Index chunk = 512;
  Eigen::Index correct = 0;
  for (Eigen::Index start = 0; start < n; start += chunk) {
    const Eigen::Index count = std::min(chunk, n - start);
    const Matrix logits = forward(task, inputs.middleRows(start, count));
    for (Eigen::Index i = 0; i < count; ++i) {
      Eigen::Index argmax = 0;
      logits.row(i).maxCoeff(&argmax);
      if (static_cast<int>(argmax) ==
          labels[static_cast<std::size_t>(start + i)]) {
        ++correct;
      }
    }
  }
  return static_cast<double>(correct) / static_cast<double>(n);
}

long TaskNetwork::parameter_count() const {
  long total = 0;
  for (const auto& layer_blocks : blocks_) {
    for (const ParamBlock& block : layer_blocks) {
      total += block.parameter_count();
    }
  }
  for (const auto& layer_gates : gates_) {
    for (const AttentionGate& gate : layer_gates) {
      total += static_cast<long>(gate.reduce_weight.size()) +
               static_cast<long>(gate.reduce_bias.size()) +
               static_cast<long>(gate.gate_weight.size()) +
               static_cast<long>(gate.gate_bias.size());
    }
  }
  for (const OutputHead& head : heads_) {
    total += head.parameter_count();
  }
  return total;
}

long TaskNetwork::owner_parameter_count(int owner) const {
  long total = 0;
  for (const auto& layer_blocks : blocks_) {
    for (const ParamBlock& block : layer_blocks) {
      if (block.owner == owner) total += block.parameter_count();
    }
  }
  for (const auto& layer_gates : gates_) {
    for (const AttentionGate& gate : layer_gates) {
      if (gate.owner != owner) continue;
      total += static_cast<long>(gate.reduce_weight.size()) +
               static_cast<long>(gate.reduce_bias.size()) +
               static_cast<long>(gate.gate_weight.size()) +
               static_cast<long>(gate.gate_bias.size());
    }
  }
  for (const OutputHead& head : heads_) {
    if (head.owner == owner) total += head.parameter_count();
  }
  return total;
}

Vector TaskNetwork::per_unit_params() const {
  const int layer_total = spec_.layer_count();
  std::vector<int> widths(static_cast<std::size_t>(layer_total));
  for (int n = 0; n < layer_total; ++n) {
    widths[static_cast<std::size_t>(n)] = layer_width(n, task_count_);
  }
  Vector out(layer_total);
  for (int n = 0; n < layer_total; ++n) {
    out[n] = static_cast<double>(params_added_per_unit(spec_, widths, n));
  }
  return out;
}

long params_added_per_unit(const NetworkSpec& spec,
                           const std::vector<int>& widths, int layer) {
  if (layer < 0 || layer >= spec.layer_count()) {
    throw std::invalid_argument("params_added_per_unit: bad layer index");
  }
  const LayerSpec& own = spec.layers[static_cast<std::size_t>(layer)];

  long own_cost = 0;
  if (own.kind == LayerKind::dense) {
    const long fan_in =
        layer == 0
            ? own.in_units
            : spec.layers[static_cast<std::size_t>(layer - 1)].feature_dim(
                  widths[static_cast<std::size_t>(layer - 1)]);
    own_cost = fan_in + 1;
  } else {
    const long channels_in =
        layer == 0 ? own.in_channels
                   : widths[static_cast<std::size_t>(layer - 1)];
    own_cost = static_cast<long>(own.kernel) * own.kernel * channels_in + 1;
  }

  long downstream = 0;
  if (layer + 1 < spec.layer_count()) {
    const LayerSpec& next = spec.layers[static_cast<std::size_t>(layer + 1)];
    const long next_width = widths[static_cast<std::size_t>(layer + 1)];
    if (next.kind == LayerKind::conv2d) {
      downstream = static_cast<long>(next.kernel) * next.kernel * next_width;
    } else {
      downstream = static_cast<long>(own.plane()) * next_width;
    }
  } else {
    downstream = static_cast<long>(own.plane()) * spec.class_count;
  }
  return own_cost + downstream;
}

}  // namespace grownet::net
