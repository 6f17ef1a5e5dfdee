#include "airhockey/data/dataset.hpp"

#include <algorithm>
#include <fstream>

#include "airhockey/error.hpp"
#include "airhockey/io.hpp"

namespace airhockey::data {
namespace {

namespace fs = std::filesystem;

Json transition_to_json(const learn::Transition& t) {
  Json j;
  j["obs"] = t.obs;
  j["action"] = t.action;
  j["reward"] = t.reward;
  j["next_obs"] = t.next_obs;
  j["done"] = t.done;
  j["truncated"] = t.truncated;
  j["success"] = t.success;
  j["prev_achieved_goal"] = t.prev_achieved_goal;
  j["achieved_goal"] = t.achieved_goal;
  j["desired_goal"] = t.desired_goal;
  j["goal_free_reward"] = t.goal_free_reward;
  return j;
}

learn::Transition transition_from_json(const Json& j) {
  learn::Transition t;
  t.obs = j.at("obs").get<std::vector<double>>();
  t.action = j.at("action").get<std::vector<double>>();
  t.reward = j.at("reward").get<double>();
  t.next_obs = j.at("next_obs").get<std::vector<double>>();
  t.done = j.at("done").get<bool>();
  t.truncated = j.at("truncated").get<bool>();
  t.success = j.at("success").get<bool>();
  t.prev_achieved_goal = j.at("prev_achieved_goal").get<std::vector<double>>();
  t.achieved_goal = j.at("achieved_goal").get<std::vector<double>>();
  t.desired_goal = j.at("desired_goal").get<std::vector<double>>();
  t.goal_free_reward = j.at("goal_free_reward").get<double>();
  return t;
}

// First line of a file, parsed; errors carry the file name.
Json read_first_line(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  if (!in || !std::getline(in, line)) throw Error("file " + path.string() + " line 1: empty file");
  try {
    return Json::parse(line);
  } catch (const Json::exception& e) {
    throw Error("file " + path.string() + " line 1: " + e.what());
  }
}

std::vector<learn::Transition> read_transitions_body(const fs::path& path, int obs_dim,
                                                     int act_dim) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  std::size_t line_no = 1;
  std::vector<learn::Transition> out;
  while (std::getline(in, line)) {
    ++line_no;
    try {
      learn::Transition t = transition_from_json(Json::parse(line));
      if (t.obs.size() != static_cast<std::size_t>(obs_dim) ||
          t.next_obs.size() != static_cast<std::size_t>(obs_dim) ||
          t.action.size() != static_cast<std::size_t>(act_dim)) {
        throw Error("dimension mismatch with header");
      }
      out.push_back(std::move(t));
    } catch (const Error& e) {
      throw Error("file " + path.string() + " line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Json::exception& e) {
      throw Error("file " + path.string() + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

Dataset read_dataset(const fs::path& directory, std::optional<env::TaskId> task) {
  if (!fs::is_directory(directory)) throw Error("dataset directory not found: " + directory.string());
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(directory)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
      paths.push_back(entry.path());
    }
  }
  std::sort(paths.begin(), paths.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });

  Dataset ds;
  ds.index.directory = directory;
  for (const fs::path& path : paths) {
    const Json head = read_first_line(path);
    const std::string kind = head.value("kind", std::string());
    const int version = head.value("format_version", -1);
    if (version != kFormatVersion) {
      ds.index.warnings.push_back(path.filename().string() + ": format_version " +
                                  std::to_string(version) + " not supported");
      continue;
    }
    if (kind != "trajectory" && kind != "transitions") {
      ds.index.warnings.push_back(path.filename().string() + ": unknown kind '" + kind + "'");
      continue;
    }
    FileSummary summary;
    summary.path = path;
    summary.kind = kind;
    std::vector<learn::Transition> ts;
    int obs_dim = 0, act_dim = 0;
    if (kind == "trajectory") {
      const TrajectoryFile f = read_trajectory(path);
      summary.task_id = f.header.task_id;
      summary.source = f.header.source;
      summary.length = f.steps.size();
      summary.success = std::any_of(f.steps.begin(), f.steps.end(),
                                    [](const StepRecord& s) { return s.success; });
      obs_dim = f.header.obs_dim;
      act_dim = f.header.act_dim;
      if (!task || *task == summary.task_id) ts = to_transitions(f);
    } else {
      try {
        summary.task_id = env::parse_task_id(head.at("task_id").get<std::string>());
        obs_dim = head.at("obs_dim").get<int>();
        act_dim = head.at("act_dim").get<int>();
      } catch (const std::exception& e) {
        throw Error("file " + path.string() + " line 1: " + e.what());
      }
      ts = read_transitions_body(path, obs_dim, act_dim);
      summary.length = ts.size();
      summary.success = std::any_of(ts.begin(), ts.end(),
                                    [](const learn::Transition& t) { return t.success; });
    }
    if (task && *task != summary.task_id) {
      ++ds.index.filtered_files;
      ds.index.filtered_transitions += summary.length;
      continue;
    }
    if (ds.obs_dim == 0) {
      ds.obs_dim = obs_dim;
      ds.act_dim = act_dim;
    } else if (ds.obs_dim != obs_dim || ds.act_dim != act_dim) {
      throw Error("file " + path.string() + ": dims " + std::to_string(obs_dim) + "/" +
                  std::to_string(act_dim) + " differ from the dataset's " +
                  std::to_string(ds.obs_dim) + "/" + std::to_string(ds.act_dim));
    }
    if (kind == "trajectory") ++ds.index.total_episodes;
    ds.index.total_transitions += ts.size();
    ds.index.files.push_back(std::move(summary));
    std::move(ts.begin(), ts.end(), std::back_inserter(ds.transitions));
  }
  return ds;
}

void write_transitions(const fs::path& path, const TransitionsHeader& header,
                       const std::vector<learn::Transition>& transitions) {
  const auto od = static_cast<std::size_t>(header.obs_dim);
  const auto ad = static_cast<std::size_t>(header.act_dim);
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    const learn::Transition& t = transitions[i];
    if (t.obs.size() != od || t.next_obs.size() != od || t.action.size() != ad) {
      throw Error("transition " + std::to_string(i) + " dimension mismatch");
    }
  }
  Json h;
  h["kind"] = "transitions";
  h["format_version"] = header.format_version;
  h["task_id"] = env::to_string(header.task_id);
  h["config_hash"] = header.config_hash;
  h["obs_dim"] = header.obs_dim;
  h["act_dim"] = header.act_dim;
  h["provenance"] = header.provenance;
  std::string out = h.dump() + "\n";
  for (const learn::Transition& t : transitions) out += transition_to_json(t).dump() + "\n";
  write_file_atomic(path, out);
}

}  // namespace airhockey::data
