#include "grownet/cli/bench.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "grownet/engine/memory.hpp"
#include "grownet/engine/search.hpp"
#include "grownet/numeric/rng.hpp"

namespace grownet::cli {
namespace {

std::vector<double> column_medians(
    const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  const std::size_t cols = rows.front().size();
  std::vector<double> medians(cols);
  std::vector<double> column(rows.size());
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      column[r] = rows[r][c];
    }
    std::sort(column.begin(), column.end());
    const std::size_t n = column.size();
    medians[c] = n % 2 == 1 ? column[n / 2]
                            : 0.5 * (column[n / 2 - 1] + column[n / 2]);
  }
  return medians;
}

}  // namespace

double branin(double x1, double x2) {
  const double a = 1.0;
  const double b = 5.1 / (4.0 * M_PI * M_PI);
  const double c = 5.0 / M_PI;
  const double r = 6.0;
  const double s = 10.0;
  const double t = 1.0 / (8.0 * M_PI);
  const double inner = x2 - b * x1 * x1 + c * x1 - r;
  return a * inner * inner + s * (1.0 - t) * std::cos(x1) + s;
}

BenchResult run_bench(const BenchConfig& config) {
  const bool quadratic = config.function == "synthetic-quadratic";
  if (!quadratic && config.function != "branin") {
    throw std::invalid_argument("bo-bench: unknown function '" +
                                config.function + "'");
  }
  const bool random = config.method == "random";
  if (!random && config.method != "bo") {
    throw std::invalid_argument("bo-bench: unknown method '" + config.method +
                                "'");
  }

  Vector lo(2);
  Vector hi(2);
  Vector quad_opt(2);
  if (quadratic) {
    lo << 0.0, 0.0;
    hi << 12.0, 12.0;
    quad_opt << 3.0, 7.0;
  } else {
    lo << -5.0, 0.0;
    hi << 10.0, 15.0;
  }
  const numeric::BoundedBox box(lo, hi);

  BenchResult result;
  for (int seed = 0; seed < config.seeds; ++seed) {
    if (config.trials <= 0) break;

    // The search maximizes; branin is negated and reported back in
    // original (minimization) units.
    const auto objective = [&](const Vector& z) {
      engine::TrialOutcome outcome;
      outcome.value = quadratic
                          ? -((z - quad_opt).squaredNorm())
                          : -branin(z[0], z[1]);
      outcome.accuracy = outcome.value;
      return outcome;
    };

    // Both methods share the same seeded initial design so their
    // early trajectories pair up.
    numeric::Rng init_rng(
        numeric::derive_seed(0xBE7C4, static_cast<std::uint64_t>(seed)));
    std::vector<Vector> initial;
    if (quadratic) {
      for (int i = 0; i < config.initial_points; ++i) {
        Vector p = engine::random_integer_point(box, init_rng);
        if (std::none_of(initial.begin(), initial.end(), [&](const Vector& q) {
              return (q - p).lpNorm<Eigen::Infinity>() == 0.0;
            })) {
          initial.push_back(std::move(p));
        }
      }
    } else {
      initial = numeric::latin_hypercube(
          init_rng, static_cast<std::size_t>(config.initial_points), box);
    }
    if (static_cast<int>(initial.size()) > config.trials) {
      initial.resize(static_cast<std::size_t>(config.trials));
    }

    engine::SearchConfig search;
    search.total_budget = config.trials;
    search.patience = config.trials;  // the budget is the only stop
    search.integer_points = quadratic;
    search.method = random ? engine::SearchMethod::random
                           : engine::SearchMethod::bayesopt;

    numeric::Rng search_rng(numeric::derive_seed(
        random ? 0x7A11D : 0xB0B0, static_cast<std::uint64_t>(seed)));
    const std::vector<engine::SearchRecord> records =
        engine::run_search(box, initial, objective, search, search_rng);

    std::vector<double> trajectory;
    trajectory.reserve(records.size());
    double best = -std::numeric_limits<double>::infinity();
    for (const engine::SearchRecord& record : records) {
      best = std::max(best, record.outcome.value);
      trajectory.push_back(quadratic ? best : -best);
    }
    result.best_so_far.push_back(std::move(trajectory));
  }
  result.median_best = column_medians(result.best_so_far);
  return result;
}

int run_bench_command(const BenchConfig& config) {
  const BenchResult result = run_bench(config);
  if (!config.out_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(config.out_dir);
    const fs::path dir(config.out_dir);

    std::ofstream trajectories(dir / "trajectories.tsv");
    trajectories << "method\tseed\ttrial\tbest\n";
    for (std::size_t seed = 0; seed < result.best_so_far.size(); ++seed) {
      for (std::size_t trial = 0; trial < result.best_so_far[seed].size();
           ++trial) {
        trajectories << config.method << "\t" << seed << "\t" << (trial + 1)
                     << "\t" << result.best_so_far[seed][trial] << "\n";
      }
    }
    std::ofstream summary(dir / "summary.tsv");
    summary << "trial\tmedian_best\n";
    for (std::size_t trial = 0; trial < result.median_best.size(); ++trial) {
      summary << (trial + 1) << "\t" << result.median_best[trial] << "\n";
    }
    std::cout << "wrote " << (dir / "trajectories.tsv").string() << "\n"
              << "wrote " << (dir / "summary.tsv").string() << "\n";
  }
  if (!result.median_best.empty()) {
    std::cout << config.function << " " << config.method << " median best "
              << result.median_best.back() << " after "
              << result.median_best.size() << " trials\n";
  }
  return 0;
}

}  // namespace grownet::cli
