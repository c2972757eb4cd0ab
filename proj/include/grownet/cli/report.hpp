#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace grownet::cli {

struct MissingReport : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Merges runs into plot-ready series: average accuracy per task,
/// first-task accuracy as tasks accumulate, accuracy versus total
/// parameters, and accuracy versus trial budget. Throws MissingReport
/// (naming the directory) when a run lacks summary.json.
void write_report(const std::vector<std::string>& run_dirs, std::ostream& out);

int run_report_command(const std::vector<std::string>& run_dirs,
                       const std::string& out_dir);

}  // namespace grownet::cli
