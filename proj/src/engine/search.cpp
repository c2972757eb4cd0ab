#include "grownet/engine/search.hpp"

#include <chrono>

#include "grownet/acquisition/propose.hpp"
#include "grownet/engine/memory.hpp"
#include "grownet/gp/model.hpp"

namespace grownet::engine {
namespace {

bool same_point(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return false;
  }
  return true;
}

bool in_history(const std::vector<Vector>& history, const Vector& p) {
  for (const Vector& h : history) {
    if (same_point(h, p)) return true;
  }
  return false;
}

double elapsed_seconds(
    const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

}  // namespace

std::size_t best_record(const std::vector<SearchRecord>& records) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].outcome.value > records[best].outcome.value) best = i;
  }
  return best;
}

std::vector<SearchRecord> run_search(const numeric::BoundedBox& bounds,
                                     const std::vector<Vector>& initial_points,
                                     const TrialEvaluator& evaluate,
                                     const SearchConfig& config,
                                     numeric::Rng& rng) {
  std::vector<SearchRecord> records;
  std::vector<Vector> history;
  double best_value = -std::numeric_limits<double>::infinity();

  const auto run_trial = [&](const Vector& point) {
    const auto start = std::chrono::steady_clock::now();
    SearchRecord record;
    record.point = point;
    record.outcome = evaluate(point);
    record.seconds = elapsed_seconds(start);
    history.push_back(point);
    const bool improved = record.outcome.value > best_value;
    if (improved) best_value = record.outcome.value;
    records.push_back(std::move(record));
    return improved;
  };

  for (const Vector& point : initial_points) {
    if (static_cast<int>(records.size()) >= config.total_budget) break;
    run_trial(point);
  }

  int stalled = 0;
  while (static_cast<int>(records.size()) < config.total_budget &&
         stalled < config.patience) {
    Vector next;
    if (config.method == SearchMethod::bayesopt) {
      std::vector<gp::Observation> observations;
      observations.reserve(records.size());
      for (const SearchRecord& record : records) {
        observations.push_back(
            {bounds.normalize(record.point), record.outcome.value});
      }
      const gp::GpModel model =
          gp::GpModel::fit(observations, config.kernel_bounds);
      const acquisition::Proposal proposal = acquisition::propose_next(
          model, bounds, config.integer_points ? history : std::vector<Vector>{},
          config.proposal_starts, rng);
      next = config.integer_points ? proposal.point : proposal.raw_point;
    } else if (config.integer_points) {
      next = random_integer_point(bounds, rng);
    } else {
      next = rng.uniform_in(bounds);
    }

    if (config.integer_points && in_history(history, next)) {
      bool found = false;
      for (int attempt = 0; attempt < 256 && !found; ++attempt) {
        Vector candidate = random_integer_point(bounds, rng);
        if (!in_history(history, candidate)) {
          next = std::move(candidate);
          found = true;
        }
      }
      if (!found) break;  // search box exhausted
    }

    if (run_trial(next)) {
      stalled = 0;
    } else {
      ++stalled;
    }
  }
  return records;
}

}  // namespace grownet::engine
