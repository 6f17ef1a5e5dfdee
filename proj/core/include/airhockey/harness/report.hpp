#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "airhockey/harness/evaluate.hpp"

namespace airhockey::harness {

struct ResultsTable {
  std::string markdown;
  std::string csv;
};

// Tasks as columns (the ten tasks in catalog order), one row per algorithm
// present in `reports`, cells are mean success rates to one decimal. Reports
// for the same task and algorithm are pooled over their seeds. Empty cells
// print "-".
ResultsTable emit_results_table(const std::vector<EvalReport>& reports);

// Every report.json below `runs_dir`, in path order.
std::vector<EvalReport> collect_reports(const std::filesystem::path& runs_dir);

// Label of an algorithm row: "BC", "IQL", "PPO", "SAC+HER".
std::string row_label(const std::string& algorithm);

}  // namespace airhockey::harness
