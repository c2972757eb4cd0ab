#pragma once

#include <string>
#include <vector>

#include "grownet/numeric/linalg.hpp"

namespace grownet::cli {

/// Synthetic acquisition benchmark: Branin (continuous, minimized) or
/// an integer quadratic with a known optimum (maximized).
struct BenchConfig {
  std::string function = "branin";  // branin | synthetic-quadratic
  std::string method = "bo";        // bo | random
  int trials = 40;
  int seeds = 10;
  int initial_points = 5;
  std::string out_dir;  // empty: nothing written
};

struct BenchResult {
  // best_so_far[seed][trial]: minimization-oriented for branin
  // (function value), maximization-oriented for the quadratic.
  std::vector<std::vector<double>> best_so_far;
  std::vector<double> median_best;  // per trial index
};

double branin(double x1, double x2);

BenchResult run_bench(const BenchConfig& config);

/// CLI entry: runs the benchmark, writes trajectories.tsv and
/// summary.tsv into out_dir when set.
int run_bench_command(const BenchConfig& config);

}  // namespace grownet::cli
