#include "airhockey/harness/expert.hpp"

#include <algorithm>
#include <cstdio>
#include <vector>

#include "airhockey/data/dataset.hpp"
#include "airhockey/data/trajectory.hpp"
#include "airhockey/env/env.hpp"
#include "airhockey/error.hpp"
#include "airhockey/harness/evaluate.hpp"
#include "airhockey/nn/policy_io.hpp"

namespace airhockey::harness {

CollectSummary collect_expert(const std::filesystem::path& policy_path,
                              const std::filesystem::path& out_dir,
                              const CollectOptions& options) {
  if (options.steps < 1) throw Error("steps must be >= 1");
  const nn::PolicyFile policy = nn::load_policy(policy_path);
  const env::TaskId task = env::parse_task_id(policy.task_id);
  env::Env e = env::make_task(task, options.env, options.seed);
  check_layout(policy, e.task());
  Rng rng(options.seed ^ 0x6a09e667f3bcc909ULL);
  std::filesystem::create_directories(out_dir);

  CollectSummary summary;
  while (summary.steps < options.steps) {
    env::Observation obs = e.reset();
    data::TrajectoryFile file =
        data::start_trajectory(e, data::Source::kPolicy, options.seed);
    bool done = false;
    while (!done) {
      const nn::Vector o = Eigen::Map<const nn::Vector>(obs.data(), obs.size());
      const nn::Vector a = options.stochastic
                               ? nn::Vector(policy.action_scale *
                                            nn::gaussian_sample(policy.policy, o, rng).action)
                               : nn::policy_action(policy, o);
      const env::Action act = env::clamp_action({a[0], a[1]});
      const env::StepResult r = e.step(act);
      data::append_step(file, obs, act, r);
      ++summary.steps;
      done = r.done;
      if (done) summary.successes += r.info.success ? 1 : 0;
      obs = r.observation;
    }
    char name[32];
    std::snprintf(name, sizeof name, "ep_%06d.jsonl", summary.episodes);
    data::write_trajectory(out_dir / name, file);
    ++summary.episodes;
  }
  return summary;
}

RelabelSummary relabel_directory(const std::filesystem::path& in_dir,
                                 const std::filesystem::path& out_dir,
                                 const learn::HerConfig& config, std::uint64_t seed) {
  namespace fs = std::filesystem;
  config.validate();
  if (!fs::is_directory(in_dir)) throw Error("not a directory: " + in_dir.string());
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(in_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
      paths.push_back(entry.path());
    }
  }
  std::sort(paths.begin(), paths.end());
  fs::create_directories(out_dir);

  Rng rng(seed);
  RelabelSummary summary;
  for (const fs::path& p : paths) {
    const data::TrajectoryFile file = data::read_trajectory(p);
    const env::Env e = data::replay_env(file);
    const std::vector<learn::Transition> original = data::to_transitions(file);
    const std::vector<learn::Transition> relabeled =
        original.empty() ? original
                         : learn::her_relabel(original, config, e.task(), e.physics().table, rng);
    data::TransitionsHeader header;
    header.task_id = file.header.task_id;
    header.config_hash = file.header.config_hash;
    header.obs_dim = file.header.obs_dim;
    header.act_dim = file.header.act_dim;
    header.provenance = {{"source_file", p.filename().generic_string()},
                         {"strategy", learn::to_string(config.strategy)},
                         {"k", config.k},
                         {"seed", seed}};
    data::write_transitions(out_dir / p.filename(), header, relabeled);
    ++summary.files;
    summary.input_transitions += original.size();
    summary.output_transitions += relabeled.size();
  }
  return summary;
}

}  // namespace airhockey::harness
