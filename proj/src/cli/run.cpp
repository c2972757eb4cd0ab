#include "grownet/cli/run.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "grownet/data/idx.hpp"
#include "grownet/data/synthetic.hpp"

namespace grownet::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

/// Exclusive lock file; "wx" fails when the file already exists.
class DirectoryLock {
public:
  explicit DirectoryLock(const fs::path& dir) : path_(dir / ".lock") {
    std::FILE* handle = std::fopen(path_.string().c_str(), "wx");
    if (handle == nullptr) {
      throw std::runtime_error("run: output directory is locked (" +
                               path_.string() + " exists)");
    }
    std::fclose(handle);
  }
  ~DirectoryLock() {
    std::error_code ec;
    fs::remove(path_, ec);
  }

private:
  fs::path path_;
};

json point_to_json(const Vector& point) {
  json out = json::array();
  for (Eigen::Index i = 0; i < point.size(); ++i) {
    out.push_back(static_cast<long>(point[i]));
  }
  return out;
}

}  // namespace

data::TaskSequence build_task_sequence(const ExperimentConfig& config) {
  data::LabeledSet train_pool;
  data::LabeledSet test_pool;
  if (config.source == "synthetic") {
    data::SyntheticSpec spec;
    spec.image_size = config.image_size;
    spec.noise = config.synthetic_noise;
    // Pools leave room for per-task subsampling variety.
    spec.train_count = std::max(2 * (config.train_per_task +
                                     config.val_per_task),
                                4000);
    spec.test_count = std::max(2 * config.test_per_task, 2000);
    spec.seed = numeric::derive_seed(config.seed, 0xDA7A);
    data::SyntheticData data = data::make_synthetic_digits(spec);
    train_pool = std::move(data.train);
    test_pool = std::move(data.test);
  } else {
    std::string dir = config.data_dir;
    if (dir.empty()) {
      const char* env = std::getenv(kDataDirEnv);
      if (env == nullptr) {
        throw ConfigError("config: key 'data_dir' unset and no environment "
                          "fallback");
      }
      dir = env;
    }
    train_pool = data::load_idx(dir + "/train-images-idx3-ubyte",
                                dir + "/train-labels-idx1-ubyte");
    test_pool = data::load_idx(dir + "/t10k-images-idx3-ubyte",
                               dir + "/t10k-labels-idx1-ubyte");
  }

  const data::SequenceKind kind = config.dataset == "mix"
                                      ? data::SequenceKind::mix
                                      : data::SequenceKind::permutations;
  data::SplitSizes sizes;
  sizes.train = config.train_per_task;
  sizes.val = config.val_per_task;
  sizes.test = config.test_per_task;
  return data::build_sequence(train_pool, test_pool, kind, config.tasks,
                              sizes, numeric::derive_seed(config.seed, 0x5E9));
}

engine::SequenceResult execute(const ExperimentConfig& config,
                               const data::TaskSequence& sequence) {
  const net::NetworkSpec spec = config.parse_arch();

  net::TrainHyper training;
  training.learning_rate = config.learning_rate;
  training.weight_decay = config.weight_decay;
  training.epochs = config.epochs;
  training.batch_size = config.batch_size;

  if (config.mode == "sn") {
    return engine::run_sn_sequence(sequence, spec, training, config.seed);
  }

  engine::EngineConfig engine;
  engine.alpha = config.alpha;
  engine.z_max = config.z_max;
  engine.trial_budget = config.trials;
  engine.patience = config.patience;
  engine.warmstart = config.warmstart;
  engine.training = training;
  engine.attention = config.mode != "bocl-no-attention";
  engine.method = config.mode == "random-search"
                      ? engine::SearchMethod::random
                      : engine::SearchMethod::bayesopt;
  return engine::run_sequence(sequence, spec, engine, config.seed);
}

int run_experiment(const ExperimentConfig& config) {
  config.validate();

  const fs::path out_dir(config.out_dir);
  fs::create_directories(out_dir);
  DirectoryLock lock(out_dir);

  const data::TaskSequence sequence = build_task_sequence(config);
  const engine::SequenceResult result = execute(config, sequence);

  // One record per trial, newline-delimited.
  std::ofstream trials(out_dir / "trials.jsonl");
  for (const engine::TrialRecord& record : result.trials) {
    json row;
    row["task"] = record.task;
    row["trial"] = record.trial;
    row["z"] = point_to_json(record.point);
    row["accuracy"] = record.accuracy;
    row["penalty"] = record.penalty;
    row["reward"] = record.reward;
    row["params_added"] = record.params_added;
    row["seconds"] = record.seconds;
    trials << row.dump() << "\n";
  }
  trials.close();

  const int task_total = sequence.task_count();
  json matrix = json::array();
  for (int i = 0; i < task_total; ++i) {
    json row = json::array();
    for (int j = 0; j <= i; ++j) {
      row.push_back(result.accuracy(i, j));
    }
    matrix.push_back(row);
  }

  double final_mean = 0.0;
  for (int j = 0; j < task_total; ++j) {
    final_mean += result.accuracy(task_total - 1, j);
  }
  final_mean /= task_total;

  json summary;
  summary["schema_version"] = 1;
  summary["mode"] = config.mode;
  summary["seed"] = config.seed;
  summary["config_digest"] = config.digest();
  json echoed;
  for (const auto& [key, value] : config.entries()) {
    echoed[key] = value;
  }
  summary["config"] = echoed;
  summary["accuracy_matrix"] = matrix;
  summary["average_final_accuracy"] = final_mean;
  summary["total_parameters"] = result.total_parameters;
  json tasks = json::array();
  for (const engine::TaskSummary& task : result.tasks) {
    json row;
    row["task"] = task.task;
    row["trials"] = task.trials;
    row["best_reward"] = task.best_reward;
    row["best_accuracy"] = task.best_accuracy;
    row["best_penalty"] = task.best_penalty;
    row["params_added"] = task.params_added;
    row["meta_feature"] = task.meta_feature;
    row["seconds"] = task.seconds;
    row["best_point"] = point_to_json(task.best_point);
    tasks.push_back(row);
  }
  summary["tasks"] = tasks;

  std::ofstream summary_file(out_dir / "summary.json");
  summary_file << summary.dump(2) << "\n";
  summary_file.close();

  std::ofstream matrix_file(out_dir / "accuracy_matrix.tsv");
  for (int i = 0; i < task_total; ++i) {
    for (int j = 0; j <= i; ++j) {
      matrix_file << (j > 0 ? "\t" : "") << result.accuracy(i, j);
    }
    matrix_file << "\n";
  }
  matrix_file.close();

  std::cout << "wrote " << (out_dir / "summary.json").string() << "\n"
            << "wrote " << (out_dir / "trials.jsonl").string() << "\n"
            << "wrote " << (out_dir / "accuracy_matrix.tsv").string() << "\n"
            << "average final accuracy " << final_mean << "\n"
            << "total parameters " << result.total_parameters << "\n";
  return 0;
}

}  // namespace grownet::cli
