#include <cmath>

#include "airhockey/env/env.hpp"
#include "airhockey/learn/gae.hpp"
#include "airhockey/learn/ppo.hpp"
#include "train_common.hpp"

namespace airhockey::harness::detail {
namespace {

using nn::Matrix;
using nn::Vector;

Matrix stack(const std::vector<env::Observation>& obs, int obs_dim) {
  Matrix m(obs_dim, static_cast<Eigen::Index>(obs.size()));
  for (std::size_t i = 0; i < obs.size(); ++i) {
    m.col(static_cast<Eigen::Index>(i)) =
        Eigen::Map<const Vector>(obs[i].data(), obs_dim);
  }
  return m;
}

}  // namespace

SeedOutcome train_ppo_seed(const SeedContext& ctx) {
  const RunConfig& cfg = ctx.config;
  const learn::PpoConfig& pc = cfg.ppo;
  Rng root(ctx.seed);
  Rng init_rng = root.split();
  Rng env_rng = root.split();
  Rng sample_rng = root.split();
  Rng update_rng = root.split();

  const int n_envs = cfg.num_envs;
  std::vector<env::Env> envs;
  std::vector<env::Observation> obs;
  for (int i = 0; i < n_envs; ++i) {
    envs.push_back(env::make_task(cfg.task_id, cfg.env_config(), env_rng()));
    obs.push_back(envs.back().reset());
  }
  const int obs_dim = envs.front().observation_dim();
  constexpr int kAct = env::Env::kActionDim;
  learn::PpoAgent agent =
      learn::make_ppo_agent(obs_dim, kAct, cfg.hidden, pc.lr, init_rng, cfg.init_log_std);

  const int horizon = (pc.rollout_len + n_envs - 1) / n_envs;
  const Eigen::Index n = static_cast<Eigen::Index>(horizon) * n_envs;
  std::vector<double> ep_return(n_envs, 0.0);

  SeedOutcome out;
  MetricsLog log({"policy_loss", "value_loss", "entropy", "approx_kl", "clip_fraction"});
  std::int64_t step = 0;
  while (step < cfg.total_steps) {
    learn::PpoBatch batch;
    batch.obs.resize(obs_dim, n);
    batch.actions.resize(kAct, n);
    batch.logprobs.resize(n);
    std::vector<std::vector<double>> rewards(n_envs), values(n_envs);
    std::vector<std::vector<bool>> dones(n_envs);
    EpisodeStats stats;

    for (int t = 0; t < horizon; ++t) {
      const Matrix o = stack(obs, obs_dim);
      const nn::GaussianDist dist = nn::gaussian_forward(agent.policy, o);
      const Matrix v = nn::mlp_forward(agent.value, o);
      Matrix a(kAct, n_envs);
      for (int i = 0; i < n_envs; ++i) {
        for (int d = 0; d < kAct; ++d) {
          a(d, i) = dist.mean(d, i) + std::exp(dist.log_std(d, i)) * sample_rng.normal();
        }
      }
      const Eigen::RowVectorXd logp = nn::batch_logprob(a, dist);
      for (int i = 0; i < n_envs; ++i) {
        const Eigen::Index col = static_cast<Eigen::Index>(t) * n_envs + i;
        batch.obs.col(col) = o.col(i);
        batch.actions.col(col) = a.col(i);
        batch.logprobs[col] = logp[i];
        values[i].push_back(v(0, i));

        const env::StepResult r =
            envs[i].step(env::clamp_action({a(0, i), a(1, i)}));
        double reward = r.reward;
        ep_return[i] += r.reward;
        if (r.info.truncated && !r.info.terminated) {
          // Time limits are not part of the MDP: bootstrap through them.
          const Vector last = Eigen::Map<const Vector>(r.observation.data(), obs_dim);
          reward += pc.gamma * nn::mlp_forward(agent.value, Matrix(last))(0, 0);
        }
        rewards[i].push_back(reward);
        dones[i].push_back(r.done);
        if (r.done) {
          stats.add(ep_return[i], r.info.success);
          ep_return[i] = 0.0;
          obs[i] = envs[i].reset();
        } else {
          obs[i] = r.observation;
        }
      }
    }

    const Matrix last_v = nn::mlp_forward(agent.value, stack(obs, obs_dim));
    batch.advantages.resize(n);
    batch.returns.resize(n);
    for (int i = 0; i < n_envs; ++i) {
      values[i].push_back(last_v(0, i));
      const learn::GaeResult g =
          learn::compute_gae(rewards[i], values[i], dones[i], pc.gamma, pc.lam);
      for (int t = 0; t < horizon; ++t) {
        const Eigen::Index col = static_cast<Eigen::Index>(t) * n_envs + i;
        batch.advantages[col] = g.advantages[t];
        batch.returns[col] = g.returns[t];
      }
    }

    const learn::PpoMetrics m = learn::ppo_update(agent, batch, pc, update_rng);
    const std::int64_t prev = step;
    step += n;

    std::optional<double> eval_rate;
    if (crossed(prev, step, cfg.eval_every) || step >= cfg.total_steps) {
      eval_rate = periodic_eval(cfg, make_policy_file(cfg, agent.policy), ctx.seed).success_rate;
      if (ctx.progress) {
        ctx.progress("seed " + std::to_string(ctx.seed) + " step " + std::to_string(step) +
                     " eval success " + fmt_double(*eval_rate));
      }
    }
    log.row(step, stats.mean_return(), stats.success_rate(), eval_rate,
            {m.policy_loss, m.value_loss, m.entropy, m.approx_kl, m.clip_fraction});
    if (auto r = stats.mean_return()) out.curve.emplace_back(step, *r);
    if (eval_rate && cfg.stop_at_success && *eval_rate >= *cfg.stop_at_success) {
      out.early_stopped = true;
      break;
    }
  }
  out.policy = make_policy_file(cfg, agent.policy);
  out.steps = step;
  out.metrics_csv = log.csv();
  return out;
}

}  // namespace airhockey::harness::detail
