#include "airhockey/learn/sac.hpp"

#include <cmath>

#include "airhockey/error.hpp"
#include "airhockey/learn/iql.hpp"
#include "nets.hpp"

namespace airhockey::learn {
namespace {

// Reparameterized squashed samples for a batch.
struct SquashedSample {
  nn::GaussianDist dist;
  Matrix eps;     // standard normal draws
  Matrix action;  // tanh(mean + std * eps)
  Eigen::RowVectorXd logprob;
};

SquashedSample squashed(const nn::GaussianPolicy& policy, const Matrix& obs,
                        Matrix eps) {
  SquashedSample s;
  s.dist = nn::gaussian_forward(policy, obs);
  s.eps = std::move(eps);
  const Matrix u = s.dist.mean + (s.dist.log_std.array().exp() * s.eps.array()).matrix();
  s.action = u.array().tanh().matrix();
  s.logprob = nn::batch_logprob(u, s.dist);
  for (Eigen::Index j = 0; j < u.cols(); ++j) s.logprob[j] -= nn::tanh_log_det(u.col(j));
  return s;
}

Matrix normal_noise(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Matrix eps(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) eps(i, j) = rng.normal();
  }
  return eps;
}

double resolved_target_entropy(const SacConfig& c, int action_dim) {
  return std::isnan(c.target_entropy) ? -static_cast<double>(action_dim)
                                      : c.target_entropy;
}

}  // namespace

void SacConfig::validate() const {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw Error("sac gamma must be in [0, 1)");
  if (!(polyak > 0.0 && polyak < 1.0)) throw Error("sac polyak must be in (0, 1)");
  if (!(lr > 0.0)) throw Error("sac lr must be > 0");
  if (!(init_alpha >= 0.0)) throw Error("sac init_alpha must be >= 0");
  if (auto_alpha && !(init_alpha > 0.0)) {
    throw Error("sac init_alpha must be > 0 with auto_alpha");
  }
}

Json to_json(const SacConfig& c) {
  Json j;
  j["gamma"] = c.gamma;
  j["polyak"] = c.polyak;
  j["lr"] = c.lr;
  j["target_entropy"] =
      std::isnan(c.target_entropy) ? Json(nullptr) : Json(c.target_entropy);
  j["init_alpha"] = c.init_alpha;
  j["auto_alpha"] = c.auto_alpha;
  return j;
}

SacConfig sac_config_from_json(const Json& j, const SacConfig& base) {
  if (!j.is_object()) throw Error("sac config must be an object");
  SacConfig c = base;
  read_if(j, "gamma", c.gamma);
  read_if(j, "polyak", c.polyak);
  read_if(j, "lr", c.lr);
  if (auto it = j.find("target_entropy"); it != j.end()) {
    c.target_entropy = it->is_null() ? std::numeric_limits<double>::quiet_NaN()
                                     : it->get<double>();
  }
  read_if(j, "init_alpha", c.init_alpha);
  read_if(j, "auto_alpha", c.auto_alpha);
  c.validate();
  return c;
}

double SacAgent::alpha() const { return std::exp(log_alpha); }

SacAgent make_sac_agent(int obs_dim, int action_dim, const std::vector<int>& hidden,
                        const SacConfig& config, Rng& rng) {
  config.validate();
  SacAgent a;
  a.policy = nn::make_gaussian_policy(obs_dim, hidden, action_dim, rng,
                                      /*state_dependent_std=*/true,
                                      /*squash=*/true);
  a.q1 = nn::init_mlp(detail::net_dims(obs_dim + action_dim, hidden, 1), rng);
  a.q2 = nn::init_mlp(detail::net_dims(obs_dim + action_dim, hidden, 1), rng);
  a.q1_target = a.q1;
  a.q2_target = a.q2;
  a.log_alpha = config.init_alpha > 0.0 ? std::log(config.init_alpha)
                                        : -std::numeric_limits<double>::infinity();
  const nn::AdamConfig opt{.lr = config.lr};
  a.policy_opt = nn::make_adam(a.policy.num_params(), opt);
  a.q1_opt = nn::make_adam(a.q1.num_params(), opt);
  a.q2_opt = nn::make_adam(a.q2.num_params(), opt);
  a.alpha_opt = nn::make_adam(1, opt);
  return a;
}

void sac_alpha_step(SacAgent& agent, double mean_logprob, double target_entropy,
                    const SacConfig& config) {
  if (!config.auto_alpha) return;
  // d/dlog_alpha of -log_alpha * (log pi + target)
  const Vector grad = Vector::Constant(1, -(mean_logprob + target_entropy));
  Vector p = Vector::Constant(1, agent.log_alpha);
  nn::adam_step(agent.alpha_opt, p, grad);
  agent.log_alpha = p[0];
}

Eigen::RowVectorXd sac_td_target(const SacAgent& agent, const Batch& batch,
                                 const SacConfig& config, Rng& rng) {
  const double alpha = config.auto_alpha ? agent.alpha() : config.init_alpha;
  const SquashedSample next =
      squashed(agent.policy, batch.next_obs,
               normal_noise(agent.policy.action_dim(), batch.size(), rng));
  const Matrix next_sa = q_input(batch.next_obs, next.action);
  const Eigen::RowVectorXd q_next =
      nn::mlp_forward(agent.q1_target, next_sa)
          .row(0)
          .cwiseMin(nn::mlp_forward(agent.q2_target, next_sa).row(0));
  Eigen::RowVectorXd target = batch.rewards.transpose();
  for (Eigen::Index j = 0; j < target.size(); ++j) {
    if (batch.dones[j] == 0.0) {
      target[j] += config.gamma * (q_next[j] - alpha * next.logprob[j]);
    }
  }
  return target;
}

SacActorGrad sac_actor_gradient(const SacAgent& agent, const Matrix& obs,
                                const Matrix& eps, double alpha) {
  const SquashedSample cur = squashed(agent.policy, obs, eps);
  const Matrix sa = q_input(obs, cur.action);
  nn::MlpCache c1, c2;
  const Eigen::RowVectorXd q1 = nn::mlp_forward(agent.q1, sa, &c1).row(0);
  const Eigen::RowVectorXd q2 = nn::mlp_forward(agent.q2, sa, &c2).row(0);
  const Eigen::Index n = obs.cols();
  const auto nd = static_cast<double>(n);
  Matrix pick1(1, n), pick2(1, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    pick1(0, j) = q1[j] <= q2[j] ? 1.0 : 0.0;
    pick2(0, j) = 1.0 - pick1(0, j);
  }
  SacActorGrad out;
  out.loss = (alpha * cur.logprob - q1.cwiseMin(q2)).sum() / nd;
  out.mean_logprob = cur.logprob.mean();

  // dmin(Q)/da per sample: the action rows of the input gradient.
  const Matrix dq_da = (nn::mlp_backward(agent.q1, c1, pick1).input +
                        nn::mlp_backward(agent.q2, c2, pick2).input)
                           .bottomRows(cur.action.rows());
  // With u = mean + std * eps and a = tanh(u):
  //   dlogpi/dmean = 2a, dlogpi/dlog_std = -1 + 2a * std * eps.
  const Eigen::ArrayXXd a = cur.action.array();
  const Eigen::ArrayXXd std_eps = cur.dist.log_std.array().exp() * cur.eps.array();
  const Eigen::ArrayXXd da_du = 1.0 - a.square();
  const Matrix d_mean = ((alpha * 2.0 * a - dq_da.array() * da_du) / nd).matrix();
  const Matrix d_log_std =
      ((alpha * (-1.0 + 2.0 * a * std_eps) - dq_da.array() * da_du * std_eps) / nd)
          .matrix();
  out.grad = nn::gaussian_backward(agent.policy, cur.dist, d_mean, d_log_std);
  return out;
}

SacMetrics sac_update(SacAgent& agent, const Batch& batch, const SacConfig& config,
                      Rng& rng) {
  const Eigen::Index n = batch.size();
  if (n == 0) throw Error("empty SAC batch");
  if (batch.obs.rows() != agent.policy.obs_dim() ||
      batch.actions.rows() != agent.policy.action_dim()) {
    throw Error("SAC batch dims do not match the agent");
  }
  const double alpha = config.auto_alpha ? agent.alpha() : config.init_alpha;
  const Eigen::Index act_dim = batch.actions.rows();
  SacMetrics m;

  const Eigen::RowVectorXd target = sac_td_target(agent, batch, config, rng);
  if (!target.allFinite()) throw Error("non-finite TD target");

  const Matrix sa = q_input(batch.obs, batch.actions);
  m.q_loss = 0.5 * (detail::regress(agent.q1, agent.q1_opt, sa, target) +
                    detail::regress(agent.q2, agent.q2_opt, sa, target));

  const SacActorGrad actor =
      sac_actor_gradient(agent, batch.obs, normal_noise(act_dim, n, rng), alpha);
  m.policy_loss = actor.loss;
  m.entropy = -actor.mean_logprob;
  Vector flat = nn::flatten(agent.policy);
  nn::adam_step(agent.policy_opt, flat, actor.grad);
  nn::unflatten(flat, agent.policy);

  sac_alpha_step(agent, actor.mean_logprob,
                 resolved_target_entropy(config, static_cast<int>(act_dim)), config);
  m.alpha = config.auto_alpha ? agent.alpha() : config.init_alpha;

  nn::polyak_update(agent.q1_target, agent.q1, config.polyak);
  nn::polyak_update(agent.q2_target, agent.q2, config.polyak);
  return m;
}

}  // namespace airhockey::learn
