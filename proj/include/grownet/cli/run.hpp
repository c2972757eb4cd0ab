#pragma once

#include "grownet/cli/config.hpp"
#include "grownet/data/sequence.hpp"
#include "grownet/engine/controller.hpp"

namespace grownet::cli {

/// Builds the task sequence an experiment config describes
/// (synthetic base or IDX files plus the configured transform
/// sequence).
data::TaskSequence build_task_sequence(const ExperimentConfig& config);

/// Executes the configured mode end-to-end and returns the result;
/// no files touched.
engine::SequenceResult execute(const ExperimentConfig& config,
                               const data::TaskSequence& sequence);

/// Full run: validate, lock the output directory, execute, write
/// trials.jsonl / summary.json / accuracy_matrix.tsv, release the
/// lock. Returns the process exit status.
int run_experiment(const ExperimentConfig& config);

}  // namespace grownet::cli
