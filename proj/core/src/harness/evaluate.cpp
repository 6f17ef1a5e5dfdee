#include "airhockey/harness/evaluate.hpp"

#include "airhockey/error.hpp"

namespace airhockey::harness {

Json to_json(const EvalReport& r) {
  Json seeds = Json::array();
  for (const SeedResult& s : r.per_seed) {
    seeds.push_back({{"seed", s.seed},
                     {"success_rate", s.success_rate},
                     {"episodes", s.episodes},
                     {"mean_return", s.mean_return}});
  }
  Json j;
  j["policy_file"] = r.policy_file;
  j["task_id"] = env::to_string(r.task_id);
  j["algorithm"] = r.algorithm;
  j["per_seed"] = std::move(seeds);
  j["mean"] = r.mean;
  j["episodes"] = r.episodes;
  j["protocol"] = r.protocol;
  return j;
}

EvalReport eval_report_from_json(const Json& j) {
  EvalReport r;
  r.policy_file = j.value("policy_file", "");
  r.task_id = env::parse_task_id(j.at("task_id").get<std::string>());
  r.algorithm = j.at("algorithm").get<std::string>();
  for (const Json& s : j.at("per_seed")) {
    r.per_seed.push_back({s.at("seed").get<std::uint64_t>(),
                          s.at("success_rate").get<double>(),
                          s.at("episodes").get<int>(), s.value("mean_return", 0.0)});
  }
  r.mean = j.at("mean").get<double>();
  r.episodes = j.at("episodes").get<int>();
  r.protocol = j.value("protocol", "");
  return r;
}

SeedResult run_episodes(const PolicyFn& policy, env::Env& env, int n_episodes) {
  if (n_episodes < 1) throw Error("n_episodes must be >= 1");
  int successes = 0;
  double total_return = 0.0;
  for (int e = 0; e < n_episodes; ++e) {
    env::Observation obs = env.reset();
    bool success = false;
    while (true) {
      const env::StepResult r = env.step(env::clamp_action(policy(obs)));
      total_return += r.reward;
      if (r.done) {
        success = r.info.success;
        break;
      }
      obs = r.observation;
    }
    successes += success ? 1 : 0;
  }
  SeedResult s;
  s.episodes = n_episodes;
  s.success_rate = static_cast<double>(successes) / n_episodes;
  s.mean_return = total_return / n_episodes;
  return s;
}

void check_layout(const nn::PolicyFile& policy, const env::TaskSpec& spec) {
  const std::vector<std::string> layout = env::observation_layout(spec);
  if (policy.obs_layout != layout || policy.policy.obs_dim() != static_cast<int>(layout.size())) {
    throw Error("policy observation layout (" + std::to_string(policy.obs_layout.size()) +
                " dims, task " + policy.task_id + ") does not match " +
                env::to_string(spec.task_id) + " (" + std::to_string(layout.size()) +
                " dims)");
  }
  if (policy.policy.action_dim() != env::Env::kActionDim) {
    throw Error("policy action dim " + std::to_string(policy.policy.action_dim()) +
                " does not match the env's " + std::to_string(env::Env::kActionDim));
  }
}

EvalReport evaluate(const nn::PolicyFile& policy, env::TaskId task,
                    const env::EnvConfig& config, int n_episodes,
                    const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw Error("evaluation needs at least one seed");
  EvalReport report;
  report.task_id = task;
  report.algorithm = policy.algorithm;
  const PolicyFn act = [&policy](const env::Observation& obs) {
    const nn::Vector a =
        nn::policy_action(policy, Eigen::Map<const nn::Vector>(obs.data(), obs.size()));
    return env::Action{a[0], a[1]};
  };
  double sum = 0.0;
  for (std::uint64_t seed : seeds) {
    env::Env e = env::make_task(task, config, seed);
    check_layout(policy, e.task());
    SeedResult s = run_episodes(act, e, n_episodes);
    s.seed = seed;
    sum += s.success_rate;
    report.episodes += s.episodes;
    report.per_seed.push_back(s);
  }
  report.mean = sum / static_cast<double>(seeds.size());
  return report;
}

EvalReport evaluate(const std::filesystem::path& policy_path, env::TaskId task,
                    int n_episodes, const std::vector<std::uint64_t>& seeds,
                    const env::EnvConfig& config) {
  EvalReport r = evaluate(nn::load_policy(policy_path), task, config, n_episodes, seeds);
  r.policy_file = policy_path.generic_string();
  return r;
}

}  // namespace airhockey::harness
