#include "airhockey/harness/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "airhockey/error.hpp"
#include "airhockey/io.hpp"

namespace airhockey::harness {
namespace {

const std::vector<std::string>& row_order() {
  static const std::vector<std::string> order = {"bc", "iql", "ppo", "sac_her"};
  return order;
}

std::string cell(const std::vector<double>& rates) {
  if (rates.empty()) return "-";
  double sum = 0.0;
  for (double r : rates) sum += r;
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.1f", sum / static_cast<double>(rates.size()));
  return buf;
}

}  // namespace

std::string row_label(const std::string& algorithm) {
  if (algorithm == "bc") return "BC";
  if (algorithm == "iql") return "IQL";
  if (algorithm == "ppo") return "PPO";
  if (algorithm == "sac_her") return "SAC+HER";
  return algorithm;
}

ResultsTable emit_results_table(const std::vector<EvalReport>& reports) {
  // algorithm -> task -> pooled per-seed rates
  std::map<std::string, std::map<env::TaskId, std::vector<double>>> cells;
  for (const EvalReport& r : reports) {
    auto& rates = cells[r.algorithm][r.task_id];
    for (const SeedResult& s : r.per_seed) rates.push_back(s.success_rate);
  }
  std::vector<std::string> rows;
  for (const std::string& a : row_order()) {
    if (cells.count(a)) rows.push_back(a);
  }
  for (const auto& [a, unused] : cells) {
    if (std::find(rows.begin(), rows.end(), a) == rows.end()) rows.push_back(a);
  }

  ResultsTable t;
  t.markdown = "| Method |";
  std::string rule = "|---|";
  t.csv = "method";
  for (env::TaskId id : env::kAllTasks) {
    t.markdown += " " + env::display_name(id) + " |";
    rule += "---|";
    t.csv += "," + env::display_name(id);
  }
  t.markdown += "\n" + rule + "\n";
  t.csv += "\n";
  for (const std::string& a : rows) {
    t.markdown += "| " + row_label(a) + " |";
    t.csv += row_label(a);
    for (env::TaskId id : env::kAllTasks) {
      const auto it = cells[a].find(id);
      const std::string c = it == cells[a].end() ? "-" : cell(it->second);
      t.markdown += " " + c + " |";
      t.csv += "," + c;
    }
    t.markdown += "\n";
    t.csv += "\n";
  }
  return t;
}

std::vector<EvalReport> collect_reports(const std::filesystem::path& runs_dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(runs_dir)) throw Error("not a directory: " + runs_dir.string());
  std::vector<fs::path> paths;
  for (const auto& entry : fs::recursive_directory_iterator(runs_dir)) {
    if (entry.is_regular_file() && entry.path().filename() == "report.json") {
      paths.push_back(entry.path());
    }
  }
  std::sort(paths.begin(), paths.end());
  std::vector<EvalReport> reports;
  for (const fs::path& p : paths) {
    try {
      reports.push_back(eval_report_from_json(Json::parse(read_file(p))));
    } catch (const Json::exception& e) {
      throw Error("report " + p.string() + ": " + e.what());
    }
  }
  return reports;
}

}  // namespace airhockey::harness
