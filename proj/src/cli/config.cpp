#include "grownet/cli/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace grownet::cli {
namespace {

std::uint64_t fnv1a64(const std::string& text,
                      std::uint64_t hash = 0xcbf29ce484222325ULL) {
  for (const char c : text) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const int parsed = std::stoi(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects an integer, got '" +
                      value + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const unsigned long long parsed = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects an integer, got '" +
                      value + "'");
  }
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double parsed = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects a number, got '" +
                      value + "'");
  }
}

std::string trim(const std::string& text) {
  const auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (key == "schema_version") {
    schema_version = parse_int(key, value);
  } else if (key == "mode") {
    mode = value;
  } else if (key == "dataset") {
    dataset = value;
  } else if (key == "source") {
    source = value;
  } else if (key == "data_dir") {
    data_dir = value;
  } else if (key == "tasks") {
    tasks = parse_int(key, value);
  } else if (key == "train_per_task") {
    train_per_task = parse_int(key, value);
  } else if (key == "val_per_task") {
    val_per_task = parse_int(key, value);
  } else if (key == "test_per_task") {
    test_per_task = parse_int(key, value);
  } else if (key == "image_size") {
    image_size = parse_int(key, value);
  } else if (key == "synthetic_noise") {
    synthetic_noise = parse_double(key, value);
  } else if (key == "arch") {
    arch = value;
  } else if (key == "alpha") {
    alpha = parse_double(key, value);
  } else if (key == "trials") {
    trials = parse_int(key, value);
  } else if (key == "patience") {
    patience = parse_int(key, value);
  } else if (key == "warmstart") {
    warmstart = parse_int(key, value);
  } else if (key == "z_max") {
    z_max = parse_double(key, value);
  } else if (key == "epochs") {
    epochs = parse_int(key, value);
  } else if (key == "batch_size") {
    batch_size = parse_int(key, value);
  } else if (key == "learning_rate") {
    learning_rate = parse_double(key, value);
  } else if (key == "weight_decay") {
    weight_decay = parse_double(key, value);
  } else if (key == "seed") {
    seed = parse_u64(key, value);
  } else if (key == "out_dir") {
    out_dir = value;
  } else {
    throw ConfigError("config: unknown key '" + key + "'");
  }
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::entries()
    const {
  return {
      {"schema_version", std::to_string(schema_version)},
      {"mode", mode},
      {"dataset", dataset},
      {"source", source},
      {"data_dir", data_dir},
      {"tasks", std::to_string(tasks)},
      {"train_per_task", std::to_string(train_per_task)},
      {"val_per_task", std::to_string(val_per_task)},
      {"test_per_task", std::to_string(test_per_task)},
      {"image_size", std::to_string(image_size)},
      {"synthetic_noise", format_double(synthetic_noise)},
      {"arch", arch},
      {"alpha", format_double(alpha)},
      {"trials", std::to_string(trials)},
      {"patience", std::to_string(patience)},
      {"warmstart", std::to_string(warmstart)},
      {"z_max", format_double(z_max)},
      {"epochs", std::to_string(epochs)},
      {"batch_size", std::to_string(batch_size)},
      {"learning_rate", format_double(learning_rate)},
      {"weight_decay", format_double(weight_decay)},
      {"seed", std::to_string(seed)},
      {"out_dir", out_dir},
  };
}

void ExperimentConfig::validate() const {
  if (schema_version != 1) {
    throw ConfigError("config: key 'schema_version' must be 1");
  }
  if (mode != "bocl" && mode != "sn" && mode != "bocl-no-attention" &&
      mode != "random-search") {
    throw ConfigError("config: key 'mode' must be one of bocl, sn, "
                      "bocl-no-attention, random-search");
  }
  if (dataset != "permutations" && dataset != "mix") {
    throw ConfigError("config: key 'dataset' must be permutations or mix");
  }
  if (source != "synthetic" && source != "idx") {
    throw ConfigError("config: key 'source' must be synthetic or idx");
  }
  if (source == "idx" && data_dir.empty() &&
      std::getenv(kDataDirEnv) == nullptr) {
    throw ConfigError(std::string("config: key 'data_dir' required for "
                                  "source=idx (or set ") +
                      kDataDirEnv + ")");
  }
  if (tasks < 1) throw ConfigError("config: key 'tasks' must be >= 1");
  if (train_per_task < 1 || val_per_task < 1 || test_per_task < 1) {
    throw ConfigError("config: key 'train_per_task'/'val_per_task'/"
                      "'test_per_task' must be positive");
  }
  if (image_size < 4) {
    throw ConfigError("config: key 'image_size' must be >= 4");
  }
  if (alpha < 0.0) throw ConfigError("config: key 'alpha' must be >= 0");
  if (warmstart < 1) throw ConfigError("config: key 'warmstart' must be >= 1");
  if (trials < warmstart) {
    throw ConfigError("config: key 'trials' must be >= warmstart");
  }
  if (patience < 1) throw ConfigError("config: key 'patience' must be >= 1");
  if (z_max < 0.0) throw ConfigError("config: key 'z_max' must be >= 0");
  if (epochs < 1) throw ConfigError("config: key 'epochs' must be >= 1");
  if (batch_size < 1) {
    throw ConfigError("config: key 'batch_size' must be >= 1");
  }
  if (learning_rate <= 0.0) {
    throw ConfigError("config: key 'learning_rate' must be > 0");
  }
  if (weight_decay < 0.0) {
    throw ConfigError("config: key 'weight_decay' must be >= 0");
  }
  if (out_dir.empty()) throw ConfigError("config: key 'out_dir' is empty");
  parse_arch();
}

std::uint64_t ExperimentConfig::digest() const {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const auto& [key, value] : entries()) {
    hash = fnv1a64(key, hash);
    hash = fnv1a64("=", hash);
    hash = fnv1a64(value, hash);
    hash = fnv1a64("\n", hash);
  }
  return hash;
}

net::NetworkSpec ExperimentConfig::parse_arch() const {
  std::vector<int> sizes;
  std::stringstream stream(arch);
  std::string part;
  while (std::getline(stream, part, '-')) {
    try {
      sizes.push_back(parse_int("arch", part));
    } catch (const ConfigError&) {
      throw ConfigError("config: key 'arch' must look like 196-64-32-10");
    }
  }
  if (sizes.size() < 3) {
    throw ConfigError("config: key 'arch' needs input, hidden..., classes");
  }
  try {
    return net::dense_spec(sizes);
  } catch (const net::InvalidSpec& e) {
    throw ConfigError(std::string("config: key 'arch' invalid: ") + e.what());
  }
}

ExperimentConfig ExperimentConfig::from_entries(
    const std::vector<std::pair<std::string, std::string>>& entries) {
  ExperimentConfig config;
  for (const auto& [key, value] : entries) {
    config.set(key, value);
  }
  return config;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("config: cannot open " + path);
  }
  ExperimentConfig config;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: line " + std::to_string(line_number) +
                        " is not 'key = value'");
    }
    config.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return config;
}

}  // namespace grownet::cli
