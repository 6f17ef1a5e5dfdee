#include "airhockey/learn/iql.hpp"

#include <cmath>

#include "airhockey/error.hpp"
#include "airhockey/learn/gae.hpp"
#include "nets.hpp"

namespace airhockey::learn {
void IqlConfig::validate() const {
  if (!(expectile_tau > 0.0 && expectile_tau < 1.0)) {
    throw Error("iql expectile_tau must be in (0, 1)");
  }
  if (!(awr_beta > 0.0)) throw Error("iql awr_beta must be > 0");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw Error("iql gamma must be in [0, 1)");
  if (!(polyak > 0.0 && polyak < 1.0)) throw Error("iql polyak must be in (0, 1)");
  if (!(lr > 0.0)) throw Error("iql lr must be > 0");
  if (!(adv_clip > 0.0)) throw Error("iql adv_clip must be > 0");
}

Json to_json(const IqlConfig& c) {
  Json j;
  j["expectile_tau"] = c.expectile_tau;
  j["awr_beta"] = c.awr_beta;
  j["gamma"] = c.gamma;
  j["polyak"] = c.polyak;
  j["lr"] = c.lr;
  j["adv_clip"] = c.adv_clip;
  return j;
}

IqlConfig iql_config_from_json(const Json& j, const IqlConfig& base) {
  if (!j.is_object()) throw Error("iql config must be an object");
  IqlConfig c = base;
  read_if(j, "expectile_tau", c.expectile_tau);
  read_if(j, "awr_beta", c.awr_beta);
  read_if(j, "gamma", c.gamma);
  read_if(j, "polyak", c.polyak);
  read_if(j, "lr", c.lr);
  read_if(j, "adv_clip", c.adv_clip);
  c.validate();
  return c;
}

IqlAgent make_iql_agent(int obs_dim, int action_dim, const std::vector<int>& hidden,
                        double lr, Rng& rng) {
  IqlAgent a;
  a.q1 = nn::init_mlp(detail::net_dims(obs_dim + action_dim, hidden, 1), rng);
  a.q2 = nn::init_mlp(detail::net_dims(obs_dim + action_dim, hidden, 1), rng);
  a.q1_target = a.q1;
  a.q2_target = a.q2;
  a.value = nn::init_mlp(detail::net_dims(obs_dim, hidden, 1), rng);
  a.policy = nn::make_gaussian_policy(obs_dim, hidden, action_dim, rng,
                                      /*state_dependent_std=*/false,
                                      /*squash=*/false);
  const nn::AdamConfig opt{.lr = lr};
  a.q1_opt = nn::make_adam(a.q1.num_params(), opt);
  a.q2_opt = nn::make_adam(a.q2.num_params(), opt);
  a.value_opt = nn::make_adam(a.value.num_params(), opt);
  a.policy_opt = nn::make_adam(a.policy.num_params(), opt);
  return a;
}

Matrix q_input(const Matrix& obs, const Matrix& actions) {
  if (obs.cols() != actions.cols()) throw Error("obs/action sample count mismatch");
  Matrix in(obs.rows() + actions.rows(), obs.cols());
  in << obs, actions;
  return in;
}

Vector awr_gradient(const nn::GaussianPolicy& policy, const Matrix& obs,
                    const Matrix& actions, const Vector& weights) {
  if (policy.squash) throw Error("AWR requires an unsquashed policy");
  if (weights.size() != obs.cols() || actions.cols() != obs.cols()) {
    throw Error("AWR batch fields disagree on sample count");
  }
  const nn::GaussianDist d = nn::gaussian_forward(policy, obs);
  const Eigen::ArrayXXd sigma = d.log_std.array().exp();
  const Eigen::ArrayXXd z = (actions - d.mean).array() / sigma;
  const Eigen::RowVectorXd dl =
      -weights.transpose() / static_cast<double>(obs.cols());
  const Matrix d_mean = ((z / sigma).rowwise() * dl.array()).matrix();
  const Matrix d_log_std = ((z.square() - 1.0).rowwise() * dl.array()).matrix();
  return nn::gaussian_backward(policy, d, d_mean, d_log_std);
}

Eigen::RowVectorXd iql_q_target(const IqlAgent& agent, const Batch& batch,
                                const IqlConfig& config) {
  const Eigen::RowVectorXd v_next = nn::mlp_forward(agent.value, batch.next_obs).row(0);
  Eigen::RowVectorXd target = batch.rewards.transpose();
  for (Eigen::Index j = 0; j < target.size(); ++j) {
    if (batch.dones[j] == 0.0) target[j] += config.gamma * v_next[j];
  }
  return target;
}

IqlMetrics iql_update(IqlAgent& agent, const Batch& batch, const IqlConfig& config) {
  const Eigen::Index n = batch.size();
  if (n == 0) throw Error("empty IQL batch");
  if (batch.obs.rows() != agent.policy.obs_dim() ||
      batch.actions.rows() != agent.policy.action_dim()) {
    throw Error("IQL batch dims do not match the agent");
  }
  const auto nd = static_cast<double>(n);
  const Matrix sa = q_input(batch.obs, batch.actions);
  const Eigen::RowVectorXd q_t = nn::mlp_forward(agent.q1_target, sa)
                                     .row(0)
                                     .cwiseMin(nn::mlp_forward(agent.q2_target, sa).row(0));
  IqlMetrics m;

  {
    nn::MlpCache cache;
    const Matrix v = nn::mlp_forward(agent.value, batch.obs, &cache);
    Matrix up(1, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double u = q_t[j] - v(0, j);
      m.value_loss += expectile_loss(u, config.expectile_tau) / nd;
      const double w = u < 0.0 ? 1.0 - config.expectile_tau : config.expectile_tau;
      up(0, j) = -2.0 * w * u / nd;
    }
    nn::adam_step(agent.value_opt, agent.value,
                  nn::mlp_backward(agent.value, cache, up).params);
  }

  const Eigen::RowVectorXd target = iql_q_target(agent, batch, config);
  if (!target.allFinite()) throw Error("non-finite Q target");
  m.q_loss = 0.5 * (detail::regress(agent.q1, agent.q1_opt, sa, target) +
                    detail::regress(agent.q2, agent.q2_opt, sa, target));

  const Eigen::RowVectorXd v = nn::mlp_forward(agent.value, batch.obs).row(0);
  Vector weights(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    weights[j] = std::min(std::exp(config.awr_beta * (q_t[j] - v[j])), config.adv_clip);
    if (!std::isfinite(weights[j])) throw Error("non-finite AWR weight");
  }
  m.mean_weight = weights.mean();
  {
    const nn::GaussianDist d = nn::gaussian_forward(agent.policy, batch.obs);
    const Eigen::RowVectorXd lp = nn::batch_logprob(batch.actions, d);
    m.policy_loss = -(weights.transpose().cwiseProduct(lp)).sum() / nd;
  }
  const Vector g = awr_gradient(agent.policy, batch.obs, batch.actions, weights);
  Vector flat = nn::flatten(agent.policy);
  nn::adam_step(agent.policy_opt, flat, g);
  nn::unflatten(flat, agent.policy);

  nn::polyak_update(agent.q1_target, agent.q1, config.polyak);
  nn::polyak_update(agent.q2_target, agent.q2, config.polyak);
  return m;
}

}  // namespace airhockey::learn
