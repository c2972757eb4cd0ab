#include "grownet/cli/report.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include <json.hpp>

namespace grownet::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunData {
  std::string label;
  json summary;
  // per task: the running best (by reward) validation accuracy after
  // each trial, in trial order
  std::map<int, std::vector<double>> best_accuracy_by_trial;
};

RunData load_run(const std::string& dir) {
  const fs::path summary_path = fs::path(dir) / "summary.json";
  std::ifstream in(summary_path);
  if (!in) {
    throw MissingReport("report: missing summary.json in " + dir);
  }
  RunData run;
  in >> run.summary;
  run.label = run.summary.value("mode", std::string("run")) + ":" +
              fs::path(dir).filename().string();

  const fs::path trials_path = fs::path(dir) / "trials.jsonl";
  std::ifstream trials(trials_path);
  std::string line;
  std::map<int, double> best_reward;
  std::map<int, double> best_accuracy;
  while (trials && std::getline(trials, line)) {
    if (line.empty()) continue;
    const json row = json::parse(line);
    const int task = row.at("task").get<int>();
    const double reward = row.at("reward").get<double>();
    const double accuracy = row.at("accuracy").get<double>();
    if (best_reward.find(task) == best_reward.end() ||
        reward > best_reward[task]) {
      best_reward[task] = reward;
      best_accuracy[task] = accuracy;
    }
    run.best_accuracy_by_trial[task].push_back(best_accuracy[task]);
  }
  return run;
}

}  // namespace

void write_report(const std::vector<std::string>& run_dirs,
                  std::ostream& out) {
  if (run_dirs.empty()) {
    throw MissingReport("report: no run directories given");
  }
  std::vector<RunData> runs;
  runs.reserve(run_dirs.size());
  for (const std::string& dir : run_dirs) {
    runs.push_back(load_run(dir));
  }

  out << "# average_accuracy_vs_task\n";
  out << "label\ttasks_learned\taverage_accuracy\n";
  for (const RunData& run : runs) {
    const json& matrix = run.summary.at("accuracy_matrix");
    for (std::size_t i = 0; i < matrix.size(); ++i) {
      double mean = 0.0;
      for (std::size_t j = 0; j < matrix[i].size(); ++j) {
        mean += matrix[i][j].get<double>();
      }
      mean /= static_cast<double>(matrix[i].size());
      out << run.label << "\t" << (i + 1) << "\t" << mean << "\n";
    }
  }
  out << "\n# first_task_accuracy\n";
  out << "label\ttasks_learned\tfirst_task_accuracy\n";
  for (const RunData& run : runs) {
    const json& matrix = run.summary.at("accuracy_matrix");
    for (std::size_t i = 0; i < matrix.size(); ++i) {
      out << run.label << "\t" << (i + 1) << "\t"
          << matrix[i][0].get<double>() << "\n";
    }
  }
  out << "\n# accuracy_vs_parameters\n";
  out << "label\ttotal_parameters\taverage_final_accuracy\n";
  for (const RunData& run : runs) {
    out << run.label << "\t" << run.summary.at("total_parameters").get<long>()
        << "\t" << run.summary.at("average_final_accuracy").get<double>()
        << "\n";
  }
  out << "\n# accuracy_vs_trials\n";
  out << "label\ttrial_budget\tmean_best_accuracy\n";
  for (const RunData& run : runs) {
    std::size_t max_trials = 0;
    for (const auto& [task, series] : run.best_accuracy_by_trial) {
      max_trials = std::max(max_trials, series.size());
    }
    for (std::size_t budget = 1; budget <= max_trials; ++budget) {
      double mean = 0.0;
      int count = 0;
      for (const auto& [task, series] : run.best_accuracy_by_trial) {
        const std::size_t index = std::min(budget, series.size()) - 1;
        mean += series[index];
        ++count;
      }
      if (count == 0) continue;
      out << run.label << "\t" << budget << "\t" << mean / count << "\n";
    }
  }
}

int run_report_command(const std::vector<std::string>& run_dirs,
                       const std::string& out_dir) {
  if (out_dir.empty()) {
    write_report(run_dirs, std::cout);
    return 0;
  }
  fs::create_directories(out_dir);
  const fs::path path = fs::path(out_dir) / "report.tsv";
  std::ofstream out(path);
  write_report(run_dirs, out);
  std::cout << "wrote " << path.string() << "\n";
  return 0;
}

}  // namespace grownet::cli
