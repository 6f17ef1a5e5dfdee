#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "airhockey/env/task.hpp"
#include "airhockey/json.hpp"
#include "airhockey/learn/her.hpp"
#include "airhockey/learn/iql.hpp"
#include "airhockey/learn/ppo.hpp"
#include "airhockey/learn/sac.hpp"
#include "airhockey/physics/world.hpp"

namespace airhockey::harness {

using airhockey::Json;

enum class Algorithm { kBc, kPpo, kSacHer, kIql };

// "bc", "ppo", "sac_her", "iql".
std::string to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view name);
bool is_offline(Algorithm a);

struct BcConfig {
  double lr = 1e-3;
};

// Everything a training run depends on. Saved with every default spelled out
// so a run directory describes itself.
struct RunConfig {
  env::TaskId task_id = env::TaskId::kReach;
  Algorithm algorithm = Algorithm::kPpo;
  physics::PhysicsParams physics;
  env::TaskSpec task = env::default_task_spec(env::TaskId::kReach);

  learn::PpoConfig ppo;
  learn::SacConfig sac;
  learn::HerConfig her;
  learn::IqlConfig iql;
  BcConfig bc;
  std::vector<int> hidden = {64, 64};
  double init_log_std = -0.5;  // PPO and BC actors

  // Env steps for online algorithms, gradient steps for offline ones.
  std::int64_t total_steps = 100000;
  std::int64_t eval_every = 50000;
  int n_eval_episodes = 50;
  std::vector<std::uint64_t> seeds = {0};
  std::filesystem::path output_dir = "runs/out";
  std::filesystem::path dataset_dir;  // bc and iql only

  int num_envs = 8;             // parallel PPO rollouts
  int batch_size = 256;         // sac, bc, iql minibatch
  int learning_starts = 5000;   // sac env steps before updates
  std::size_t replay_capacity = 1000000;
  // Stop a seed early once a periodic evaluation reaches this success rate.
  std::optional<double> stop_at_success;

  env::EnvConfig env_config() const;
  void validate() const;
};

Json to_json(const RunConfig& c);
// Keys absent from `j` keep their defaults; the task block is applied on top
// of the defaults of `task_id`.
RunConfig run_config_from_json(const Json& j);
RunConfig load_run_config(const std::filesystem::path& path);
void save_run_config(const std::filesystem::path& path, const RunConfig& c);

}  // namespace airhockey::harness
