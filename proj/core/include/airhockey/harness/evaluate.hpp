#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "airhockey/env/env.hpp"
#include "airhockey/json.hpp"
#include "airhockey/nn/policy_io.hpp"

namespace airhockey::harness {

inline constexpr const char* kEvalProtocol =
    "greedy policy mean, actions clamped to [-1,1]; an episode counts as a "
    "success when the task's success predicate holds at its last step";

struct SeedResult {
  std::uint64_t seed = 0;
  double success_rate = 0.0;
  int episodes = 0;
  double mean_return = 0.0;
};

struct EvalReport {
  std::string policy_file;
  env::TaskId task_id = env::TaskId::kReach;
  std::string algorithm;
  std::vector<SeedResult> per_seed;
  double mean = 0.0;  // arithmetic mean of the per-seed rates
  int episodes = 0;   // total over seeds
  std::string protocol = kEvalProtocol;
};

Json to_json(const EvalReport& r);
EvalReport eval_report_from_json(const Json& j);

using PolicyFn = std::function<env::Action(const env::Observation&)>;

// Plays n episodes back to back on `env` (which is reset first each time).
SeedResult run_episodes(const PolicyFn& policy, env::Env& env, int n_episodes);

// Throws when the policy was trained on a different observation layout.
void check_layout(const nn::PolicyFile& policy, const env::TaskSpec& spec);

// Greedy evaluation: one fresh env per seed, n_episodes each.
EvalReport evaluate(const nn::PolicyFile& policy, env::TaskId task,
                    const env::EnvConfig& config, int n_episodes,
                    const std::vector<std::uint64_t>& seeds);

EvalReport evaluate(const std::filesystem::path& policy_path, env::TaskId task,
                    int n_episodes, const std::vector<std::uint64_t>& seeds,
                    const env::EnvConfig& config = {});

}  // namespace airhockey::harness
