#include "grownet/engine/controller.hpp"

#include <chrono>

#include "grownet/engine/reward.hpp"

namespace grownet::engine {
namespace {

numeric::BoundedBox expansion_box(const net::NetworkSpec& spec,
                                  double z_max) {
  return numeric::BoundedBox::zero_to(z_max, spec.layer_count());
}

double now_seconds(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

}  // namespace

MetaFeatureResult meta_feature(const data::TaskData& task,
                               const net::NetworkSpec& base_spec,
                               const net::TaskNetwork& frozen,
                               const EngineConfig& config, numeric::Rng& rng) {
  MetaFeatureResult result;

  numeric::Rng scratch_rng = rng.split(1);
  net::TaskNetwork scratch(base_spec, scratch_rng, config.attention);
  result.scratch_accuracy =
      scratch.train_task(1, task.train.images, task.train.labels,
                         task.val.images, task.val.labels, config.training,
                         scratch_rng);

  numeric::Rng transfer_rng = rng.split(2);
  net::TaskNetwork transfer = frozen;
  const int next_task = transfer.task_count() + 1;
  transfer.expand(next_task, Vector::Zero(base_spec.layer_count()),
                  transfer_rng);
  result.transfer_accuracy =
      transfer.train_task(next_task, task.train.images, task.train.labels,
                          task.val.images, task.val.labels, config.training,
                          transfer_rng);

  result.value = result.scratch_accuracy - result.transfer_accuracy;
  return result;
}

ExpansionResult run_expansion(int task, const data::TaskData& data,
                              const net::TaskNetwork& frozen,
                              EpisodicMemory& memory,
                              const EngineConfig& config, numeric::Rng& rng) {
  if (task != frozen.task_count() + 1) {
    throw std::invalid_argument("run_expansion: task out of order");
  }
  const numeric::BoundedBox box = expansion_box(frozen.spec(), config.z_max);
  const Vector per_unit = frozen.per_unit_params();

  const MetaFeatureResult meta =
      meta_feature(data, frozen.spec(), frozen, config, rng);

  numeric::Rng warmstart_rng = rng.split(3);
  const std::vector<Vector> initial = warmstart_select(
      memory, meta.value, config.warmstart, box, warmstart_rng);

  // The evaluator trains one child network per candidate and keeps
  // the argmax-reward network alive.
  net::TaskNetwork best_net = frozen;
  double best_reward = -std::numeric_limits<double>::infinity();
  numeric::Rng trial_rng = rng.split(4);
  int trial_index = 0;
  const auto evaluate = [&](const Vector& z) {
    ++trial_index;
    numeric::Rng child_rng =
        trial_rng.split(static_cast<std::uint64_t>(trial_index));
    net::TaskNetwork child = frozen;
    child.expand(task, z, child_rng);
    const long added = child.owner_parameter_count(task);
    const double accuracy =
        child.train_task(task, data.train.images, data.train.labels,
                         data.val.images, data.val.labels, config.training,
                         child_rng);
    const RewardBreakdown breakdown =
        reward(accuracy, z, per_unit, config.alpha);
    if (breakdown.reward > best_reward) {
      best_reward = breakdown.reward;
      best_net = std::move(child);
    }
    TrialOutcome outcome;
    outcome.value = breakdown.reward;
    outcome.accuracy = accuracy;
    outcome.penalty = breakdown.penalty;
    outcome.params_added = added;
    return outcome;
  };

  SearchConfig search;
  search.total_budget = config.trial_budget;
  search.patience = config.patience;
  search.proposal_starts = config.proposal_starts;
  search.integer_points = true;
  search.method = config.method;

  numeric::Rng search_rng = rng.split(5);
  const std::vector<SearchRecord> records =
      run_search(box, initial, evaluate, search, search_rng);

  std::vector<TrialRecord> trials;
  trials.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    TrialRecord record;
    record.task = task;
    record.trial = static_cast<int>(i + 1);
    record.point = records[i].point;
    record.accuracy = records[i].outcome.accuracy;
    record.penalty = records[i].outcome.penalty;
    record.reward = records[i].outcome.value;
    record.params_added = records[i].outcome.params_added;
    record.seconds = records[i].seconds;
    trials.push_back(std::move(record));
  }
  const TrialRecord best = trials[best_record(records)];
  memory.add(MemoryEntry{task, meta.value, best.point});
  return ExpansionResult{std::move(best_net), best, std::move(trials), meta};
}

SequenceResult run_sequence(const data::TaskSequence& sequence,
                            const net::NetworkSpec& base_spec,
                            const EngineConfig& config, std::uint64_t seed) {
  const int task_total = sequence.task_count();
  Matrix accuracy = Matrix::Zero(task_total, task_total);
  std::vector<TrialRecord> all_trials;
  std::vector<TaskSummary> summaries;

  numeric::Rng rng(seed);
  EpisodicMemory memory;

  const auto start = std::chrono::steady_clock::now();
  numeric::Rng base_rng = rng.split(100);
  net::TaskNetwork net(base_spec, base_rng, config.attention);
  const data::TaskData& first = sequence.tasks.front();
  const double first_acc =
      net.train_task(1, first.train.images, first.train.labels,
                     first.val.images, first.val.labels, config.training,
                     base_rng);

  TaskSummary first_summary;
  first_summary.task = 1;
  first_summary.trials = 1;
  first_summary.best_reward = first_acc;
  first_summary.best_accuracy = first_acc;
  first_summary.params_added = net.parameter_count();
  first_summary.best_point = Vector::Zero(base_spec.layer_count());
  first_summary.seconds = now_seconds(start);
  summaries.push_back(first_summary);

  TrialRecord first_trial;
  first_trial.task = 1;
  first_trial.trial = 1;
  first_trial.point = Vector::Zero(base_spec.layer_count());
  first_trial.accuracy = first_acc;
  first_trial.reward = first_acc;
  first_trial.params_added = net.parameter_count();
  first_trial.seconds = first_summary.seconds;
  all_trials.push_back(first_trial);

  accuracy(0, 0) = net.evaluate(1, first.test.images, first.test.labels);

  for (int t = 2; t <= task_total; ++t) {
    const auto task_start = std::chrono::steady_clock::now();
    numeric::Rng task_rng = rng.split(static_cast<std::uint64_t>(t));
    ExpansionResult expansion =
        run_expansion(t, sequence.tasks[static_cast<std::size_t>(t - 1)], net,
                      memory, config, task_rng);
    net = std::move(expansion.network);

    TaskSummary summary;
    summary.task = t;
    summary.trials = static_cast<int>(expansion.trials.size());
    summary.best_reward = expansion.best.reward;
    summary.best_accuracy = expansion.best.accuracy;
    summary.best_penalty = expansion.best.penalty;
    summary.params_added = net.owner_parameter_count(t);
    summary.meta_feature = expansion.meta.value;
    summary.best_point = expansion.best.point;
    summary.seconds = now_seconds(task_start);
    summaries.push_back(summary);

    for (TrialRecord& record : expansion.trials) {
      all_trials.push_back(std::move(record));
    }
    for (int j = 0; j < t; ++j) {
      accuracy(t - 1, j) = net.evaluate(
          j + 1, sequence.tasks[static_cast<std::size_t>(j)].test.images,
          sequence.tasks[static_cast<std::size_t>(j)].test.labels);
    }
  }

  const long total = net.parameter_count();
  return SequenceResult{std::move(accuracy), std::move(all_trials),
                        std::move(summaries), total, std::move(net)};
}

SequenceResult run_sn_sequence(const data::TaskSequence& sequence,
                               const net::NetworkSpec& base_spec,
                               const net::TrainHyper& training,
                               std::uint64_t seed) {
  const int task_total = sequence.task_count();
  Matrix accuracy = Matrix::Zero(task_total, task_total);
  std::vector<TrialRecord> all_trials;
  std::vector<TaskSummary> summaries;

  numeric::Rng rng(seed);
  numeric::Rng base_rng = rng.split(100);
  net::TaskNetwork net(base_spec, base_rng, false);

  for (int t = 1; t <= task_total; ++t) {
    const auto start = std::chrono::steady_clock::now();
    const data::TaskData& task = sequence.tasks[static_cast<std::size_t>(t - 1)];
    numeric::Rng task_rng = rng.split(static_cast<std::uint64_t>(t));
    // Everything stays owned by task 1, so each round fine-tunes the
    // whole network on the new task through the shared head.
    const double val_accuracy =
        net.train_task(1, task.train.images, task.train.labels,
                       task.val.images, task.val.labels, training, task_rng);

    TaskSummary summary;
    summary.task = t;
    summary.trials = 1;
    summary.best_reward = val_accuracy;
    summary.best_accuracy = val_accuracy;
    summary.best_point = Vector::Zero(base_spec.layer_count());
    summary.seconds = now_seconds(start);
    summaries.push_back(summary);

    TrialRecord record;
    record.task = t;
    record.trial = 1;
    record.point = Vector::Zero(base_spec.layer_count());
    record.accuracy = val_accuracy;
    record.reward = val_accuracy;
    record.seconds = summary.seconds;
    all_trials.push_back(record);

    for (int j = 0; j < t; ++j) {
      accuracy(t - 1, j) = net.evaluate(
          1, sequence.tasks[static_cast<std::size_t>(j)].test.images,
          sequence.tasks[static_cast<std::size_t>(j)].test.labels);
    }
  }

  const long total = net.parameter_count();
  return SequenceResult{std::move(accuracy), std::move(all_trials),
                        std::move(summaries), total, std::move(net)};
}

}  // namespace grownet::engine
