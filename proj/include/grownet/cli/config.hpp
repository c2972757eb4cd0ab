#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "grownet/network/spec.hpp"

namespace grownet::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flat key-value experiment configuration (schema version 1).
/// Unknown keys are hard errors.
struct ExperimentConfig {
  int schema_version = 1;
  std::string mode = "bocl";  // bocl | sn | bocl-no-attention | random-search
  std::string dataset = "permutations";  // permutations | mix
  std::string source = "synthetic";      // synthetic | idx
  std::string data_dir;                  // idx source; env fallback
  int tasks = 5;
  int train_per_task = 2000;
  int val_per_task = 500;
  int test_per_task = 500;
  int image_size = 14;
  double synthetic_noise = 0.12;
  std::string arch = "196-64-32-10";
  double alpha = 0.02;
  int trials = 20;
  int patience = 5;
  int warmstart = 3;
  double z_max = 30.0;
  int epochs = 5;
  int batch_size = 32;
  double learning_rate = 0.1;
  double weight_decay = 1e-4;
  std::uint64_t seed = 1;
  std::string out_dir = "run-out";

  void validate() const;  // throws ConfigError naming the offending key
  std::uint64_t digest() const;
  net::NetworkSpec parse_arch() const;

  /// Applies one "key=value" assignment; throws ConfigError for
  /// unknown keys or unparsable values.
  void set(const std::string& key, const std::string& value);

  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_entries(
      const std::vector<std::pair<std::string, std::string>>& entries);

  /// Ordered key -> value view of the full schema (for digests and
  /// summary echo).
  std::vector<std::pair<std::string, std::string>> entries() const;
};

/// The data directory environment variable consulted when
/// source=idx and data_dir is empty.
inline constexpr const char* kDataDirEnv = "GROWNET_DATA_DIR";

}  // namespace grownet::cli
