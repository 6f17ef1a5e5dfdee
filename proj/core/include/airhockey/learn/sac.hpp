#pragma once

#include <limits>
#include <vector>

#include "airhockey/json.hpp"
#include "airhockey/learn/transition.hpp"
#include "airhockey/nn/adam.hpp"
#include "airhockey/nn/gaussian.hpp"
#include "airhockey/rng.hpp"

namespace airhockey::learn {

struct SacConfig {
  double gamma = 0.99;
  double polyak = 0.995;
  double lr = 3e-4;
  // NaN means -action_dim.
  double target_entropy = std::numeric_limits<double>::quiet_NaN();
  double init_alpha = 0.2;
  bool auto_alpha = true;

  void validate() const;
};

Json to_json(const SacConfig& c);
SacConfig sac_config_from_json(const Json& j, const SacConfig& base = {});

// Squashed Gaussian actor with a log_std head, twin Q with targets, and the
// entropy temperature.
struct SacAgent {
  nn::GaussianPolicy policy;
  nn::MlpParams q1, q2, q1_target, q2_target;
  double log_alpha = 0.0;
  nn::AdamState policy_opt, q1_opt, q2_opt, alpha_opt;

  double alpha() const;
};

SacAgent make_sac_agent(int obs_dim, int action_dim, const std::vector<int>& hidden,
                        const SacConfig& config, Rng& rng);

struct SacMetrics {
  double q_loss = 0.0;
  double policy_loss = 0.0;
  double alpha = 0.0;
  double entropy = 0.0;  // -mean log pi of fresh samples
};

struct SacActorGrad {
  Vector grad;  // over flatten(policy)
  double loss = 0.0;
  double mean_logprob = 0.0;
};

// Gradient of mean_j(alpha log pi(a_j|s_j) - min Q(s_j, a_j)) with the
// reparameterized a = tanh(mean + std * eps) for the given noise.
SacActorGrad sac_actor_gradient(const SacAgent& agent, const Matrix& obs,
                                const Matrix& eps, double alpha);

// One Adam step of the temperature loss -log_alpha * (log pi + target) given
// the batch-mean log pi; no-op unless auto_alpha.
void sac_alpha_step(SacAgent& agent, double mean_logprob, double target_entropy,
                    const SacConfig& config);

// r + gamma (1 - done) (min target Q(s', a') - alpha log pi(a' | s')) with
// a' ~ pi(s'); consumes act_dim normals per sample from `rng`.
Eigen::RowVectorXd sac_td_target(const SacAgent& agent, const Batch& batch,
                                 const SacConfig& config, Rng& rng);

// Critic, actor, and temperature steps followed by polyak targets. Throws
// "non-finite TD target" before touching any parameter.
SacMetrics sac_update(SacAgent& agent, const Batch& batch, const SacConfig& config,
                      Rng& rng);

}  // namespace airhockey::learn
