#pragma once

#include <vector>

#include "airhockey/json.hpp"
#include "airhockey/nn/adam.hpp"
#include "airhockey/nn/gaussian.hpp"
#include "airhockey/rng.hpp"

namespace airhockey::learn {

using nn::Matrix;
using nn::Vector;

struct PpoConfig {
  double gamma = 0.99;
  double lam = 0.95;
  double clip_eps = 0.2;
  int epochs = 10;
  int minibatch = 64;
  int rollout_len = 2048;  // per update, summed over parallel envs
  double value_coef = 0.5;
  double entropy_coef = 0.0;
  double lr = 3e-4;
  double max_grad_norm = 0.5;
  double target_kl = 0.03;  // <= 0 disables the early stop
  bool normalize_advantages = true;

  void validate() const;
};

Json to_json(const PpoConfig& c);
PpoConfig ppo_config_from_json(const Json& j, const PpoConfig& base = {});

// State-independent-std Gaussian actor plus a scalar value network.
struct PpoAgent {
  nn::GaussianPolicy policy;
  nn::MlpParams value;
  nn::AdamState policy_opt;
  nn::AdamState value_opt;
};

PpoAgent make_ppo_agent(int obs_dim, int action_dim, const std::vector<int>& hidden,
                        double lr, Rng& rng, double init_log_std = 0.0);

struct PpoBatch {
  Matrix obs;         // obs_dim x n
  Matrix actions;     // act_dim x n, as sampled (before env clamping)
  Vector logprobs;    // under the policy that collected the data
  Vector advantages;
  Vector returns;

  Eigen::Index size() const { return obs.cols(); }
  void validate() const;
};

struct PpoMetrics {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
  double clip_fraction = 0.0;
  int epochs_run = 0;
  int minibatches = 0;
  bool early_stopped = false;
};

// Mean 0, std 1 (population std, eps 1e-8).
Vector normalize_advantages(const Vector& adv);

// Mean of min(ratio * A, clip(ratio, 1 +- eps) * A) under the current policy.
double ppo_surrogate(const nn::GaussianPolicy& policy, const PpoBatch& batch,
                     double clip_eps);

// Clipped-surrogate update over `epochs` passes of shuffled minibatches.
// Advantages are normalized over the whole batch first when configured.
// Throws "divergence in minibatch k" on a non-finite loss.
PpoMetrics ppo_update(PpoAgent& agent, const PpoBatch& batch,
                      const PpoConfig& config, Rng& rng);

}  // namespace airhockey::learn
