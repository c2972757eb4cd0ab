#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "grownet/data/labeled_set.hpp"

namespace grownet::data {

enum class SequenceKind { permutations, mix };

struct TaskProvenance {
  std::string transform;  // "permute" or "rotate"
  int task_index = 0;     // 1-based
  std::uint64_t seed = 0;
  double angle = 0.0;
  std::uint64_t digest = 0;
};

struct TaskData {
  LabeledSet train;
  LabeledSet val;
  LabeledSet test;
  TaskProvenance provenance;
};

struct TaskSequence {
  SequenceKind kind = SequenceKind::permutations;
  std::uint64_t master_seed = 0;
  std::vector<TaskData> tasks;

  int task_count() const { return static_cast<int>(tasks.size()); }
};

struct SplitSizes {
  int train = 6000;
  int val = 1000;
  int test = 1000;
};

/// Builds T tasks from the base pools. Permutation sequences permute
/// pixels per task; mix sequences alternate permutations (odd task
/// positions) and rotations (even positions) with angles evenly
/// spaced in (0, 180]. Deterministic in the master seed.
TaskSequence build_sequence(const LabeledSet& train_pool,
                            const LabeledSet& test_pool, SequenceKind kind,
                            int task_count, const SplitSizes& sizes,
                            std::uint64_t master_seed);

std::uint64_t provenance_digest(SequenceKind kind, int task_index,
                                std::uint64_t seed, double angle);

}  // namespace grownet::data
