#pragma once

#include <cstdint>
#include <vector>

#include "grownet/data/sequence.hpp"
#include "grownet/engine/memory.hpp"
#include "grownet/engine/search.hpp"
#include "grownet/network/task_network.hpp"

namespace grownet::engine {

struct EngineConfig {
  double alpha = 0.02;
  double z_max = 30.0;  // per expandable layer
  int trial_budget = 20;  // N, including warmstart trials
  int patience = 5;       // H
  int warmstart = 3;      // m
  int proposal_starts = 16;
  bool attention = true;
  SearchMethod method = SearchMethod::bayesopt;
  net::TrainHyper training;
};

struct TrialRecord {
  int task = 0;
  int trial = 0;  // 1-based within the task
  Vector point;
  double accuracy = 0.0;
  double penalty = 0.0;
  double reward = 0.0;
  long params_added = 0;
  double seconds = 0.0;
};

struct MetaFeatureResult {
  double scratch_accuracy = 0.0;   // fresh base network on the task
  double transfer_accuracy = 0.0;  // frozen features + new gates/head
  double value = 0.0;              // scratch - transfer
};

/// Accuracy gap between a freshly trained base network and
/// attention-only transfer on the frozen network; measures how much
/// expansion the task needs.
MetaFeatureResult meta_feature(const data::TaskData& task,
                               const net::NetworkSpec& base_spec,
                               const net::TaskNetwork& frozen,
                               const EngineConfig& config, numeric::Rng& rng);

struct ExpansionResult {
  net::TaskNetwork network;  // argmax-reward expansion, trained
  TrialRecord best;
  std::vector<TrialRecord> trials;
  MetaFeatureResult meta;
};

/// One task's search: warmstart points from memory, then the trial
/// loop; appends this task's (meta-feature, best point) to memory.
ExpansionResult run_expansion(int task, const data::TaskData& data,
                              const net::TaskNetwork& frozen,
                              EpisodicMemory& memory,
                              const EngineConfig& config, numeric::Rng& rng);

struct TaskSummary {
  int task = 0;
  int trials = 0;
  double best_reward = 0.0;
  double best_accuracy = 0.0;
  double best_penalty = 0.0;
  long params_added = 0;
  double meta_feature = 0.0;
  double seconds = 0.0;
  Vector best_point;
};

struct SequenceResult {
  Matrix accuracy;  // accuracy(i,j): test accuracy on task j+1 after task i+1
  std::vector<TrialRecord> trials;
  std::vector<TaskSummary> tasks;
  long total_parameters = 0;
  net::TaskNetwork network;
};

/// Task 1 trains the base network; later tasks search expansions.
SequenceResult run_sequence(const data::TaskSequence& sequence,
                            const net::NetworkSpec& base_spec,
                            const EngineConfig& config, std::uint64_t seed);

/// Single fixed network fine-tuned across every task (the forgetting
/// baseline); one shared head.
SequenceResult run_sn_sequence(const data::TaskSequence& sequence,
                               const net::NetworkSpec& base_spec,
                               const net::TrainHyper& training,
                               std::uint64_t seed);

}  // namespace grownet::engine
