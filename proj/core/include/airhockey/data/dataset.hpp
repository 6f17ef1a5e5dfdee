#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "airhockey/data/trajectory.hpp"
#include "airhockey/learn/transition.hpp"

namespace airhockey::data {

struct FileSummary {
  std::filesystem::path path;
  std::string kind;  // "trajectory" or "transitions"
  env::TaskId task_id = env::TaskId::kReach;
  std::size_t length = 0;  // steps or transitions
  bool success = false;
  Source source = Source::kPolicy;
};

struct DatasetIndex {
  std::filesystem::path directory;
  std::vector<FileSummary> files;  // accepted files, lexicographic order
  std::size_t total_episodes = 0;
  std::size_t total_transitions = 0;
  std::size_t filtered_files = 0;        // skipped by the task filter
  std::size_t filtered_transitions = 0;  // transitions in those files
  std::vector<std::string> warnings;     // rejected files and why
};

struct Dataset {
  DatasetIndex index;
  std::vector<learn::Transition> transitions;  // (filename, step) order
  int obs_dim = 0;
  int act_dim = 0;
};

// Loads every *.jsonl file in `directory` in lexicographic filename order.
// Files with another format_version are rejected with a warning; files of
// other tasks are skipped when `task` is set. Malformed lines are errors.
Dataset read_dataset(const std::filesystem::path& directory,
                     std::optional<env::TaskId> task = std::nullopt);

// Transition files hold relabeled or otherwise non-replayable data: a header
// line then one transition per line.
struct TransitionsHeader {
  int format_version = kFormatVersion;
  env::TaskId task_id = env::TaskId::kReach;
  std::string config_hash;
  int obs_dim = 0;
  int act_dim = env::Env::kActionDim;
  Json provenance = Json::object();
};

void write_transitions(const std::filesystem::path& path, const TransitionsHeader& header,
                       const std::vector<learn::Transition>& transitions);

}  // namespace airhockey::data
