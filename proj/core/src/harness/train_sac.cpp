#include <cmath>

#include "airhockey/env/env.hpp"
#include "airhockey/learn/her.hpp"
#include "airhockey/learn/replay_buffer.hpp"
#include "airhockey/learn/sac.hpp"
#include "airhockey/learn/transition.hpp"
#include "train_common.hpp"

namespace airhockey::harness::detail {

SeedOutcome train_sac_her_seed(const SeedContext& ctx) {
  const RunConfig& cfg = ctx.config;
  Rng root(ctx.seed);
  Rng init_rng = root.split();
  Rng env_rng = root.split();
  Rng sample_rng = root.split();
  Rng update_rng = root.split();
  Rng her_rng = root.split();

  env::Env e = env::make_task(cfg.task_id, cfg.env_config(), env_rng());
  const int obs_dim = e.observation_dim();
  constexpr int kAct = env::Env::kActionDim;
  learn::SacAgent agent = learn::make_sac_agent(obs_dim, kAct, cfg.hidden, cfg.sac, init_rng);
  learn::ReplayBuffer buffer(obs_dim, kAct, cfg.replay_capacity);

  SeedOutcome out;
  MetricsLog log({"q_loss", "policy_loss", "entropy", "alpha"});
  EpisodeStats stats;
  learn::SacMetrics last{};

  env::Observation obs = e.reset();
  std::vector<double> prev_achieved = env::achieved_goal(e.task(), e.world());
  std::vector<learn::Transition> episode;
  double ep_return = 0.0;
  std::int64_t step = 0;
  while (step < cfg.total_steps) {
    env::Action a;
    if (step < cfg.learning_starts) {
      a = {sample_rng.uniform(-1.0, 1.0), sample_rng.uniform(-1.0, 1.0)};
    } else {
      const nn::GaussianDist d = nn::gaussian_forward(
          agent.policy, Eigen::Map<const nn::Vector>(obs.data(), obs_dim));
      for (int k = 0; k < kAct; ++k) {
        a[k] = std::tanh(d.mean(k, 0) + std::exp(d.log_std(k, 0)) * sample_rng.normal());
      }
    }
    a = env::clamp_action(a);
    const env::StepResult r = e.step(a);
    learn::Transition t = learn::make_transition(e, obs, a, prev_achieved, r);
    prev_achieved = t.achieved_goal;
    episode.push_back(std::move(t));
    ep_return += r.reward;
    ++step;

    if (r.done) {
      for (const learn::Transition& x :
           learn::her_relabel(episode, cfg.her, e.task(), e.physics().table, her_rng)) {
        buffer.add(x);
      }
      stats.add(ep_return, r.info.success);
      episode.clear();
      ep_return = 0.0;
      obs = e.reset();
      prev_achieved = env::achieved_goal(e.task(), e.world());
    } else {
      obs = r.observation;
    }

    if (step >= cfg.learning_starts &&
        buffer.size() >= static_cast<std::size_t>(cfg.batch_size)) {
      last = learn::sac_update(agent, buffer.sample(cfg.batch_size, update_rng), cfg.sac,
                               update_rng);
    }

    const bool eval_due = crossed(step - 1, step, cfg.eval_every) || step >= cfg.total_steps;
    if (eval_due) {
      const double rate =
          periodic_eval(cfg, make_policy_file(cfg, agent.policy), ctx.seed).success_rate;
      if (ctx.progress) {
        ctx.progress("seed " + std::to_string(ctx.seed) + " step " + std::to_string(step) +
                     " eval success " + fmt_double(rate));
      }
      log.row(step, stats.mean_return(), stats.success_rate(), rate,
              {last.q_loss, last.policy_loss, last.entropy, last.alpha});
      if (auto m = stats.mean_return()) out.curve.emplace_back(step, *m);
      stats = {};
      if (cfg.stop_at_success && rate >= *cfg.stop_at_success) {
        out.early_stopped = true;
        break;
      }
    }
  }
  out.policy = make_policy_file(cfg, agent.policy);
  out.steps = step;
  out.metrics_csv = log.csv();
  return out;
}

}  // namespace airhockey::harness::detail
