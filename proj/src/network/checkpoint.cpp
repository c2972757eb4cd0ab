#include "grownet/network/checkpoint.hpp"

#include <cstdint>
#include <fstream>

namespace grownet::net {
namespace {

constexpr char kMagic[8] = {'G', 'N', 'E', 'T', 'C', 'K', 'P', '1'};

void write_i32(std::ostream& out, std::int32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void write_matrix(std::ostream& out, const Matrix& m) {
  write_i32(out, static_cast<std::int32_t>(m.rows()));
  write_i32(out, static_cast<std::int32_t>(m.cols()));
  out.write(reinterpret_cast<const char*>(m.data()),
            static_cast<std::streamsize>(sizeof(double) * m.size()));
}

void write_vector(std::ostream& out, const Vector& v) {
  write_i32(out, static_cast<std::int32_t>(v.size()));
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(sizeof(double) * v.size()));
}

std::int32_t read_i32(std::istream& in) {
  std::int32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw std::runtime_error("checkpoint: truncated file");
  return v;
}

Matrix read_matrix(std::istream& in) {
  const std::int32_t rows = read_i32(in);
  const std::int32_t cols = read_i32(in);
  Matrix m(rows, cols);
  in.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(sizeof(double) * m.size()));
  if (!in) throw std::runtime_error("checkpoint: truncated file");
  return m;
}

Vector read_vector(std::istream& in) {
  const std::int32_t size = read_i32(in);
  Vector v(size);
  in.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(sizeof(double) * v.size()));
  if (!in) throw std::runtime_error("checkpoint: truncated file");
  return v;
}

}  // namespace

class TaskNetworkCodec {
public:
  static void save(const TaskNetwork& net, std::ostream& out) {
    out.write(kMagic, sizeof kMagic);
    write_i32(out, net.attention_ ? 1 : 0);
    write_i32(out, net.task_count_);
    write_i32(out, net.spec_.class_count);
    write_i32(out, net.spec_.layer_count());
    for (const LayerSpec& layer : net.spec_.layers) {
      write_i32(out, layer.kind == LayerKind::dense ? 0 : 1);
      write_i32(out, layer.activation == Activation::relu ? 0 : 1);
      write_i32(out, layer.in_units);
      write_i32(out, layer.out_units);
      write_i32(out, layer.in_width);
      write_i32(out, layer.in_height);
      write_i32(out, layer.in_channels);
      write_i32(out, layer.filters);
      write_i32(out, layer.kernel);
      write_i32(out, layer.stride);
    }

    std::int32_t block_count = 0;
    for (const auto& layer_blocks : net.blocks_) {
      block_count += static_cast<std::int32_t>(layer_blocks.size());
    }
    write_i32(out, block_count);
    for (const auto& layer_blocks : net.blocks_) {
      for (const ParamBlock& block : layer_blocks) {
        write_i32(out, block.owner);
        write_i32(out, block.layer);
        write_i32(out, block.units);
        write_i32(out, block.in_visible);
        write_matrix(out, block.weight);
        write_vector(out, block.bias);
      }
    }

    std::int32_t gate_count = 0;
    for (const auto& layer_gates : net.gates_) {
      gate_count += static_cast<std::int32_t>(layer_gates.size());
    }
    write_i32(out, gate_count);
    for (const auto& layer_gates : net.gates_) {
      for (const AttentionGate& gate : layer_gates) {
        write_i32(out, gate.owner);
        write_i32(out, gate.layer);
        write_i32(out, gate.channel_wise ? 1 : 0);
        write_i32(out, gate.plane);
        write_i32(out, gate.prior_width);
        write_i32(out, gate.bottleneck);
        write_matrix(out, gate.reduce_weight);
        write_vector(out, gate.reduce_bias);
        write_matrix(out, gate.gate_weight);
        write_vector(out, gate.gate_bias);
      }
    }

    write_i32(out, static_cast<std::int32_t>(net.heads_.size()));
    for (const OutputHead& head : net.heads_) {
      write_i32(out, head.owner);
      write_i32(out, head.in_features);
      write_matrix(out, head.weight);
      write_vector(out, head.bias);
    }
  }

  static TaskNetwork load(std::istream& in) {
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || !std::equal(std::begin(magic), std::end(magic),
                           std::begin(kMagic))) {
      throw std::runtime_error("checkpoint: bad magic");
    }
    TaskNetwork net;
    net.attention_ = read_i32(in) != 0;
    net.task_count_ = read_i32(in);
    net.spec_.class_count = read_i32(in);
    const std::int32_t layer_total = read_i32(in);
    for (std::int32_t i = 0; i < layer_total; ++i) {
      LayerSpec layer;
      layer.kind = read_i32(in) == 0 ? LayerKind::dense : LayerKind::conv2d;
      layer.activation =
          read_i32(in) == 0 ? Activation::relu : Activation::none;
      layer.in_units = read_i32(in);
      layer.out_units = read_i32(in);
      layer.in_width = read_i32(in);
      layer.in_height = read_i32(in);
      layer.in_channels = read_i32(in);
      layer.filters = read_i32(in);
      layer.kernel = read_i32(in);
      layer.stride = read_i32(in);
      net.spec_.layers.push_back(layer);
    }
    net.spec_.validate();
    net.blocks_.resize(static_cast<std::size_t>(layer_total));
    net.gates_.resize(static_cast<std::size_t>(layer_total));

    const std::int32_t block_count = read_i32(in);
    for (std::int32_t i = 0; i < block_count; ++i) {
      ParamBlock block;
      block.owner = read_i32(in);
      block.layer = read_i32(in);
      block.units = read_i32(in);
      block.in_visible = read_i32(in);
      block.weight = read_matrix(in);
      block.bias = read_vector(in);
      if (block.layer < 0 || block.layer >= layer_total) {
        throw std::runtime_error("checkpoint: block layer out of range");
      }
      net.blocks_[static_cast<std::size_t>(block.layer)].push_back(
          std::move(block));
    }

    const std::int32_t gate_count = read_i32(in);
    for (std::int32_t i = 0; i < gate_count; ++i) {
      AttentionGate gate;
      gate.owner = read_i32(in);
      gate.layer = read_i32(in);
      gate.channel_wise = read_i32(in) != 0;
      gate.plane = read_i32(in);
      gate.prior_width = read_i32(in);
      gate.bottleneck = read_i32(in);
      gate.reduce_weight = read_matrix(in);
      gate.reduce_bias = read_vector(in);
      gate.gate_weight = read_matrix(in);
      gate.gate_bias = read_vector(in);
      if (gate.layer < 0 || gate.layer >= layer_total) {
        throw std::runtime_error("checkpoint: gate layer out of range");
      }
      net.gates_[static_cast<std::size_t>(gate.layer)].push_back(
          std::move(gate));
    }

    const std::int32_t head_count = read_i32(in);
    for (std::int32_t i = 0; i < head_count; ++i) {
      OutputHead head;
      head.owner = read_i32(in);
      head.in_features = read_i32(in);
      head.weight = read_matrix(in);
      head.bias = read_vector(in);
      net.heads_.push_back(std::move(head));
    }
    if (net.heads_.size() != static_cast<std::size_t>(net.task_count_)) {
      throw std::runtime_error("checkpoint: head count does not match tasks");
    }
    return net;
  }
};

void save_checkpoint(const TaskNetwork& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("checkpoint: cannot open " + path);
  TaskNetworkCodec::save(net, out);
  if (!out) throw std::runtime_error("checkpoint: write failed for " + path);
}

TaskNetwork load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open " + path);
  return TaskNetworkCodec::load(in);
}

}  // namespace grownet::net
