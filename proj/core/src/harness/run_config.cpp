#include "airhockey/harness/run_config.hpp"

#include <cmath>

#include "airhockey/error.hpp"
#include "airhockey/io.hpp"
#include "airhockey/physics/serialize.hpp"

namespace airhockey::harness {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kBc: return "bc";
    case Algorithm::kPpo: return "ppo";
    case Algorithm::kSacHer: return "sac_her";
    case Algorithm::kIql: return "iql";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::kBc, Algorithm::kPpo, Algorithm::kSacHer, Algorithm::kIql}) {
    if (name == to_string(a)) return a;
  }
  throw Error("unknown algorithm '" + std::string(name) +
              "' (expected bc, ppo, sac_her or iql)");
}

bool is_offline(Algorithm a) { return a == Algorithm::kBc || a == Algorithm::kIql; }

env::EnvConfig RunConfig::env_config() const {
  return env::EnvConfig{physics, env::to_json(task)};
}

void RunConfig::validate() const {
  if (seeds.empty()) throw Error("seeds must be non-empty");
  if (total_steps <= 0) throw Error("total_steps must be > 0");
  if (eval_every <= 0) throw Error("eval_every must be > 0");
  if (n_eval_episodes < 1) throw Error("n_eval_episodes must be >= 1");
  if (hidden.empty()) throw Error("hidden must list at least one layer");
  for (int h : hidden) {
    if (h < 1) throw Error("hidden layer sizes must be >= 1");
  }
  if (num_envs < 1) throw Error("num_envs must be >= 1");
  if (batch_size < 1) throw Error("batch_size must be >= 1");
  if (learning_starts < 0) throw Error("learning_starts must be >= 0");
  if (replay_capacity < 1) throw Error("replay_capacity must be >= 1");
  if (!(bc.lr > 0.0)) throw Error("bc lr must be > 0");
  if (!std::isfinite(init_log_std)) throw Error("init_log_std must be finite");
  if (stop_at_success && !(*stop_at_success > 0.0 && *stop_at_success <= 1.0)) {
    throw Error("stop_at_success must be in (0, 1]");
  }
  if (task.task_id != task_id) throw Error("task block names a different task_id");
  task.validate();
  ppo.validate();
  sac.validate();
  her.validate();
  iql.validate();
  if (algorithm == Algorithm::kSacHer && !task.goal_conditioned) {
    throw Error("sac_her needs a goal-conditioned task, got " + env::to_string(task_id));
  }
  if (algorithm == Algorithm::kPpo && ppo.rollout_len < num_envs) {
    throw Error("ppo rollout_len must be >= num_envs");
  }
}

Json to_json(const RunConfig& c) {
  Json j;
  j["task_id"] = env::to_string(c.task_id);
  j["algorithm"] = to_string(c.algorithm);
  j["physics"] = physics::to_json(c.physics);
  j["task"] = env::to_json(c.task);
  j["ppo"] = learn::to_json(c.ppo);
  j["sac"] = learn::to_json(c.sac);
  j["her"] = learn::to_json(c.her);
  j["iql"] = learn::to_json(c.iql);
  j["bc"] = Json{{"lr", c.bc.lr}};
  j["hidden"] = c.hidden;
  j["init_log_std"] = c.init_log_std;
  j["total_steps"] = c.total_steps;
  j["eval_every"] = c.eval_every;
  j["n_eval_episodes"] = c.n_eval_episodes;
  j["seeds"] = c.seeds;
  j["output_dir"] = c.output_dir.generic_string();
  j["dataset_dir"] = c.dataset_dir.generic_string();
  j["num_envs"] = c.num_envs;
  j["batch_size"] = c.batch_size;
  j["learning_starts"] = c.learning_starts;
  j["replay_capacity"] = c.replay_capacity;
  j["stop_at_success"] = c.stop_at_success ? Json(*c.stop_at_success) : Json(nullptr);
  return j;
}

RunConfig run_config_from_json(const Json& j) {
  if (!j.is_object()) throw Error("run config must be a JSON object");
  RunConfig c;
  if (auto it = j.find("task_id"); it != j.end()) {
    c.task_id = env::parse_task_id(it->get<std::string>());
  }
  c.task = env::default_task_spec(c.task_id);
  if (auto it = j.find("algorithm"); it != j.end()) {
    c.algorithm = parse_algorithm(it->get<std::string>());
  }
  if (auto it = j.find("physics"); it != j.end()) {
    c.physics = physics::physics_from_json(*it, c.physics);
  }
  if (auto it = j.find("task"); it != j.end()) {
    c.task = env::task_spec_from_json(*it, c.task);
  }
  if (auto it = j.find("ppo"); it != j.end()) c.ppo = learn::ppo_config_from_json(*it, c.ppo);
  if (auto it = j.find("sac"); it != j.end()) c.sac = learn::sac_config_from_json(*it, c.sac);
  if (auto it = j.find("her"); it != j.end()) c.her = learn::her_config_from_json(*it, c.her);
  if (auto it = j.find("iql"); it != j.end()) c.iql = learn::iql_config_from_json(*it, c.iql);
  if (auto it = j.find("bc"); it != j.end()) read_if(*it, "lr", c.bc.lr);
  read_if(j, "hidden", c.hidden);
  read_if(j, "init_log_std", c.init_log_std);
  read_if(j, "total_steps", c.total_steps);
  read_if(j, "eval_every", c.eval_every);
  read_if(j, "n_eval_episodes", c.n_eval_episodes);
  read_if(j, "seeds", c.seeds);
  if (auto it = j.find("output_dir"); it != j.end()) {
    c.output_dir = it->get<std::string>();
  }
  if (auto it = j.find("dataset_dir"); it != j.end()) {
    c.dataset_dir = it->get<std::string>();
  }
  read_if(j, "num_envs", c.num_envs);
  read_if(j, "batch_size", c.batch_size);
  read_if(j, "learning_starts", c.learning_starts);
  read_if(j, "replay_capacity", c.replay_capacity);
  if (auto it = j.find("stop_at_success"); it != j.end() && !it->is_null()) {
    c.stop_at_success = it->get<double>();
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::exception& e) {
    throw Error("config " + path.string() + ": " + e.what());
  }
  return run_config_from_json(j);
}

void save_run_config(const std::filesystem::path& path, const RunConfig& c) {
  write_file_atomic(path, to_json(c).dump(2) + "\n");
}

}  // namespace airhockey::harness
