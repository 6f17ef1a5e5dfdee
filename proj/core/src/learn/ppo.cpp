#include "airhockey/learn/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "airhockey/error.hpp"

namespace airhockey::learn {
namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5 * ln(2 pi)

Vector column_logprob(const Matrix& actions, const nn::GaussianDist& d) {
  return nn::batch_logprob(actions, d).transpose();
}

Matrix gather(const Matrix& m, const std::vector<Eigen::Index>& idx) {
  Matrix out(m.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) {
    out.col(static_cast<Eigen::Index>(j)) = m.col(idx[j]);
  }
  return out;
}

Vector gather(const Vector& v, const std::vector<Eigen::Index>& idx) {
  Vector out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) {
    out[static_cast<Eigen::Index>(j)] = v[idx[j]];
  }
  return out;
}

}  // namespace

void PpoConfig::validate() const {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw Error("ppo gamma must be in [0, 1)");
  if (!(lam >= 0.0 && lam < 1.0)) throw Error("ppo lam must be in [0, 1)");
  if (!(clip_eps > 0.0)) throw Error("ppo clip_eps must be > 0");
  if (epochs < 1) throw Error("ppo epochs must be >= 1");
  if (minibatch < 1) throw Error("ppo minibatch must be >= 1");
  if (rollout_len < 1) throw Error("ppo rollout_len must be >= 1");
  if (!(lr > 0.0)) throw Error("ppo lr must be > 0");
  if (!(max_grad_norm > 0.0)) throw Error("ppo max_grad_norm must be > 0");
}

Json to_json(const PpoConfig& c) {
  Json j;
  j["gamma"] = c.gamma;
  j["lam"] = c.lam;
  j["clip_eps"] = c.clip_eps;
  j["epochs"] = c.epochs;
  j["minibatch"] = c.minibatch;
  j["rollout_len"] = c.rollout_len;
  j["value_coef"] = c.value_coef;
  j["entropy_coef"] = c.entropy_coef;
  j["lr"] = c.lr;
  j["max_grad_norm"] = c.max_grad_norm;
  j["target_kl"] = c.target_kl;
  j["normalize_advantages"] = c.normalize_advantages;
  return j;
}

PpoConfig ppo_config_from_json(const Json& j, const PpoConfig& base) {
  if (!j.is_object()) throw Error("ppo config must be an object");
  PpoConfig c = base;
  read_if(j, "gamma", c.gamma);
  read_if(j, "lam", c.lam);
  read_if(j, "clip_eps", c.clip_eps);
  read_if(j, "epochs", c.epochs);
  read_if(j, "minibatch", c.minibatch);
  read_if(j, "rollout_len", c.rollout_len);
  read_if(j, "value_coef", c.value_coef);
  read_if(j, "entropy_coef", c.entropy_coef);
  read_if(j, "lr", c.lr);
  read_if(j, "max_grad_norm", c.max_grad_norm);
  read_if(j, "target_kl", c.target_kl);
  read_if(j, "normalize_advantages", c.normalize_advantages);
  c.validate();
  return c;
}

PpoAgent make_ppo_agent(int obs_dim, int action_dim, const std::vector<int>& hidden,
                        double lr, Rng& rng, double init_log_std) {
  PpoAgent a;
  a.policy = nn::make_gaussian_policy(obs_dim, hidden, action_dim, rng,
                                      /*state_dependent_std=*/false,
                                      /*squash=*/false, init_log_std);
  std::vector<int> dims = {obs_dim};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(1);
  a.value = nn::init_mlp(dims, rng);
  a.policy_opt = nn::make_adam(a.policy.num_params(), {.lr = lr});
  a.value_opt = nn::make_adam(a.value.num_params(), {.lr = lr});
  return a;
}

void PpoBatch::validate() const {
  const Eigen::Index n = obs.cols();
  if (n == 0) throw Error("empty PPO batch");
  if (actions.cols() != n || logprobs.size() != n || advantages.size() != n ||
      returns.size() != n) {
    throw Error("PPO batch fields disagree on sample count");
  }
}

Vector normalize_advantages(const Vector& adv) {
  if (adv.size() == 0) return adv;
  const double mean = adv.mean();
  const double var = (adv.array() - mean).square().mean();
  return ((adv.array() - mean) / (std::sqrt(var) + 1e-8)).matrix();
}

double ppo_surrogate(const nn::GaussianPolicy& policy, const PpoBatch& batch,
                     double clip_eps) {
  batch.validate();
  const nn::GaussianDist d = nn::gaussian_forward(policy, batch.obs);
  const Vector ratio =
      (column_logprob(batch.actions, d) - batch.logprobs).array().exp().matrix();
  double sum = 0.0;
  for (Eigen::Index j = 0; j < ratio.size(); ++j) {
    const double a = batch.advantages[j];
    const double clipped = std::clamp(ratio[j], 1.0 - clip_eps, 1.0 + clip_eps);
    sum += std::min(ratio[j] * a, clipped * a);
  }
  return sum / static_cast<double>(ratio.size());
}

PpoMetrics ppo_update(PpoAgent& agent, const PpoBatch& batch,
                      const PpoConfig& config, Rng& rng) {
  batch.validate();
  if (batch.obs.rows() != agent.policy.obs_dim() ||
      batch.actions.rows() != agent.policy.action_dim()) {
    throw Error("PPO batch dims do not match the policy");
  }
  const Vector adv =
      config.normalize_advantages ? normalize_advantages(batch.advantages)
                                  : batch.advantages;
  const Eigen::Index n = batch.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});

  PpoMetrics m;
  nn::GaussianPolicy& policy = agent.policy;
  for (int epoch = 0; epoch < config.epochs && !m.early_stopped; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng.below(i)]);
    }
    for (Eigen::Index start = 0; start < n; start += config.minibatch) {
      const Eigen::Index end = std::min<Eigen::Index>(n, start + config.minibatch);
      const std::vector<Eigen::Index> idx(order.begin() + start, order.begin() + end);
      const auto mb = static_cast<double>(idx.size());
      const Matrix obs = gather(batch.obs, idx);
      const Matrix act = gather(batch.actions, idx);
      const Vector old_lp = gather(batch.logprobs, idx);
      const Vector a_mb = gather(adv, idx);
      const Vector ret = gather(batch.returns, idx);

      const nn::GaussianDist d = nn::gaussian_forward(policy, obs);
      const Vector log_ratio = column_logprob(act, d) - old_lp;
      const Vector ratio = log_ratio.array().exp().matrix();
      const double approx_kl =
          ((ratio.array() - 1.0) - log_ratio.array()).mean();
      if (config.target_kl > 0.0 && approx_kl > config.target_kl) {
        m.early_stopped = true;
        break;
      }

      double pg_loss = 0.0;
      double clipped_count = 0.0;
      Vector d_logp(static_cast<Eigen::Index>(idx.size()));
      for (Eigen::Index j = 0; j < ratio.size(); ++j) {
        const double r = ratio[j];
        const double clipped = std::clamp(r, 1.0 - config.clip_eps, 1.0 + config.clip_eps);
        const double unclipped_obj = r * a_mb[j];
        const double clipped_obj = clipped * a_mb[j];
        pg_loss -= std::min(unclipped_obj, clipped_obj) / mb;
        if (std::abs(r - 1.0) > config.clip_eps) clipped_count += 1.0;
        d_logp[j] = unclipped_obj <= clipped_obj ? -a_mb[j] * r / mb : 0.0;
      }
      const double entropy =
          (d.log_std.array() + 0.5 + kHalfLog2Pi).colwise().sum().mean();

      nn::MlpCache v_cache;
      const Matrix v = nn::mlp_forward(agent.value, obs, &v_cache);
      const Eigen::RowVectorXd v_err = v.row(0) - ret.transpose();
      const double v_loss = config.value_coef * v_err.squaredNorm() / mb;

      if (!std::isfinite(pg_loss) || !std::isfinite(v_loss) ||
          !std::isfinite(entropy)) {
        throw Error("divergence in minibatch " + std::to_string(m.minibatches));
      }

      const Eigen::ArrayXXd sigma = d.log_std.array().exp();
      const Eigen::ArrayXXd z = (act - d.mean).array() / sigma;
      const Eigen::RowVectorXd dl = d_logp.transpose();
      const Matrix d_mean =
          ((z / sigma).rowwise() * dl.array()).matrix();
      Matrix d_log_std = ((z.square() - 1.0).rowwise() * dl.array()).matrix();
      d_log_std.array() -= config.entropy_coef / mb;

      Vector pg = nn::gaussian_backward(policy, d, d_mean, d_log_std);
      nn::clip_grad_norm(pg, config.max_grad_norm);
      Vector flat = nn::flatten(policy);
      nn::adam_step(agent.policy_opt, flat, pg);
      nn::unflatten(flat, policy);

      const Matrix v_up = (2.0 * config.value_coef / mb) * v_err;
      Vector vg = nn::flatten(nn::mlp_backward(agent.value, v_cache, v_up).params);
      nn::clip_grad_norm(vg, config.max_grad_norm);
      Vector vflat = nn::flatten(agent.value);
      nn::adam_step(agent.value_opt, vflat, vg);
      nn::unflatten(vflat, 0, agent.value);

      m.policy_loss += pg_loss;
      m.value_loss += v_loss;
      m.entropy += entropy;
      m.approx_kl += approx_kl;
      m.clip_fraction += clipped_count / mb;
      ++m.minibatches;
    }
    ++m.epochs_run;
  }
  if (m.minibatches > 0) {
    const double k = m.minibatches;
    m.policy_loss /= k;
    m.value_loss /= k;
    m.entropy /= k;
    m.approx_kl /= k;
    m.clip_fraction /= k;
  }
  return m;
}

}  // namespace airhockey::learn
