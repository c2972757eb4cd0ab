#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "grownet/cli/bench.hpp"
#include "grownet/cli/config.hpp"
#include "grownet/cli/report.hpp"
#include "grownet/cli/run.hpp"

namespace {

using grownet::cli::ExperimentConfig;

/// Registers one override flag per config key so the command line
/// maps onto the file format one-for-one.
void add_config_flags(CLI::App& app,
                      std::vector<std::pair<std::string, std::string>>&
                          overrides) {
  static const ExperimentConfig defaults;
  for (const auto& [key, value] : defaults.entries()) {
    app.add_option_function<std::string>(
        "--" + key,
        [&overrides, key = key](const std::string& v) {
          overrides.emplace_back(key, v);
        },
        "override config key " + key);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"continual-learning engine with searched network expansion"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::pair<std::string, std::string>> overrides;
  CLI::App* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("config", config_path, "flat key=value config file")
      ->required();
  add_config_flags(*run, overrides);

  grownet::cli::BenchConfig bench;
  CLI::App* bo_bench =
      app.add_subcommand("bo-bench", "synthetic acquisition benchmark");
  bo_bench->add_option("--function", bench.function,
                       "branin | synthetic-quadratic");
  bo_bench->add_option("--method", bench.method, "bo | random");
  bo_bench->add_option("--trials", bench.trials, "trial budget per seed");
  bo_bench->add_option("--seeds", bench.seeds, "number of seeds");
  bo_bench->add_option("--initial-points", bench.initial_points,
                       "initial design size");
  bo_bench->add_option("--out", bench.out_dir, "output directory");

  std::vector<std::string> report_dirs;
  std::string report_out;
  CLI::App* report = app.add_subcommand("report", "merge run directories");
  report->add_option("dirs", report_dirs, "run output directories")
      ->required();
  report->add_option("--out", report_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      ExperimentConfig config = ExperimentConfig::from_file(config_path);
      for (const auto& [key, value] : overrides) {
        config.set(key, value);
      }
      return grownet::cli::run_experiment(config);
    }
    if (bo_bench->parsed()) {
      return grownet::cli::run_bench_command(bench);
    }
    if (report->parsed()) {
      return grownet::cli::run_report_command(report_dirs, report_out);
    }
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
  return 0;
}
