#include "airhockey/learn/bc.hpp"
#include "airhockey/learn/iql.hpp"
#include "train_common.hpp"

namespace airhockey::harness::detail {
namespace {

constexpr std::int64_t kLogEvery = 1000;

}  // namespace

SeedOutcome train_offline_seed(const SeedContext& ctx) {
  const RunConfig& cfg = ctx.config;
  const std::vector<learn::Transition>& data = ctx.dataset->transitions;
  const int obs_dim = ctx.dataset->obs_dim;
  const int act_dim = ctx.dataset->act_dim;
  const bool is_bc = cfg.algorithm == Algorithm::kBc;
  Rng root(ctx.seed);
  Rng init_rng = root.split();
  Rng batch_rng = root.split();

  nn::GaussianPolicy bc_policy;
  nn::AdamState bc_opt;
  learn::IqlAgent iql;
  if (is_bc) {
    bc_policy = nn::make_gaussian_policy(obs_dim, cfg.hidden, act_dim, init_rng,
                                         /*state_dependent_std=*/false,
                                         /*squash=*/false, cfg.init_log_std);
    bc_opt = nn::make_adam(bc_policy.num_params(), {.lr = cfg.bc.lr});
  } else {
    iql = learn::make_iql_agent(obs_dim, act_dim, cfg.hidden, cfg.iql.lr, init_rng);
  }
  const nn::GaussianPolicy& policy = is_bc ? bc_policy : iql.policy;

  SeedOutcome out;
  MetricsLog log(is_bc ? std::vector<std::string>{"bc_loss"}
                       : std::vector<std::string>{"q_loss", "value_loss", "policy_loss",
                                                  "mean_weight"});
  std::vector<std::size_t> idx(static_cast<std::size_t>(cfg.batch_size));
  std::vector<double> losses;
  for (std::int64_t step = 1; step <= cfg.total_steps; ++step) {
    for (std::size_t& i : idx) i = static_cast<std::size_t>(batch_rng.below(data.size()));
    const learn::Batch batch = learn::make_batch(data, idx);
    if (is_bc) {
      losses = {learn::bc_update(bc_policy, bc_opt, batch.obs, batch.actions)};
    } else {
      const learn::IqlMetrics m = learn::iql_update(iql, batch, cfg.iql);
      losses = {m.q_loss, m.value_loss, m.policy_loss, m.mean_weight};
    }
    out.steps = step;

    const bool eval_due = step % cfg.eval_every == 0 || step == cfg.total_steps;
    if (!eval_due) {
      if (step % kLogEvery == 0) log.row(step, std::nullopt, std::nullopt, std::nullopt, losses);
      continue;
    }
    const SeedResult ev = periodic_eval(cfg, make_policy_file(cfg, policy), ctx.seed);
    if (ctx.progress) {
      ctx.progress("seed " + std::to_string(ctx.seed) + " step " + std::to_string(step) +
                   " eval success " + fmt_double(ev.success_rate));
    }
    // Offline runs have no training episodes; the greedy evaluation stands in.
    log.row(step, ev.mean_return, ev.success_rate, ev.success_rate, losses);
    out.curve.emplace_back(step, ev.mean_return);
    if (cfg.stop_at_success && ev.success_rate >= *cfg.stop_at_success) {
      out.early_stopped = true;
      break;
    }
  }
  out.policy = make_policy_file(cfg, policy);
  out.metrics_csv = log.csv();
  return out;
}

}  // namespace airhockey::harness::detail
