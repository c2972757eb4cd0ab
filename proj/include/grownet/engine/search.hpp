#pragma once

#include <functional>
#include <vector>

#include "grownet/gp/kernel.hpp"
#include "grownet/numeric/bounded_box.hpp"
#include "grownet/numeric/rng.hpp"

namespace grownet::engine {

enum class SearchMethod { bayesopt, random };

struct TrialOutcome {
  double value = 0.0;  // the quantity being maximized
  double accuracy = 0.0;
  double penalty = 0.0;
  long params_added = 0;
};

using TrialEvaluator = std::function<TrialOutcome(const Vector& point)>;

struct SearchRecord {
  Vector point;
  TrialOutcome outcome;
  double seconds = 0.0;
};

struct SearchConfig {
  int total_budget = 20;  // N, counting the initial points
  int patience = 5;       // H consecutive non-improving proposals
  int proposal_starts = 16;
  bool integer_points = true;  // project proposals, reject duplicates
  SearchMethod method = SearchMethod::bayesopt;
  gp::KernelBounds kernel_bounds;
};

/// The trial loop shared by task expansion and the synthetic
/// benchmarks: evaluates the initial points, then alternates
/// surrogate refit / proposal / evaluation until the budget is spent
/// or the best value stalls for `patience` proposals.
std::vector<SearchRecord> run_search(const numeric::BoundedBox& bounds,
                                     const std::vector<Vector>& initial_points,
                                     const TrialEvaluator& evaluate,
                                     const SearchConfig& config,
                                     numeric::Rng& rng);

/// Index of the highest-value record (earliest wins ties).
std::size_t best_record(const std::vector<SearchRecord>& records);

}  // namespace grownet::engine
