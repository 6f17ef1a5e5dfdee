#pragma once

#include <vector>

#include "airhockey/json.hpp"
#include "airhockey/learn/transition.hpp"
#include "airhockey/nn/adam.hpp"
#include "airhockey/nn/gaussian.hpp"

namespace airhockey::learn {

struct IqlConfig {
  double expectile_tau = 0.6;
  double awr_beta = 3.0;
  double gamma = 0.99;
  double polyak = 0.995;
  double lr = 3e-4;
  double adv_clip = 100.0;

  void validate() const;
};

Json to_json(const IqlConfig& c);
IqlConfig iql_config_from_json(const Json& j, const IqlConfig& base = {});

// Twin Q(s, a) with targets, V(s), and a state-independent-std actor.
struct IqlAgent {
  nn::MlpParams q1, q2, q1_target, q2_target, value;
  nn::GaussianPolicy policy;
  nn::AdamState q1_opt, q2_opt, value_opt, policy_opt;
};

IqlAgent make_iql_agent(int obs_dim, int action_dim, const std::vector<int>& hidden,
                        double lr, Rng& rng);

struct IqlMetrics {
  double q_loss = 0.0;
  double value_loss = 0.0;
  double policy_loss = 0.0;
  double mean_weight = 0.0;
};

// Stacks [obs; action] column-wise for Q networks.
Matrix q_input(const Matrix& obs, const Matrix& actions);

// Gradient over flatten(policy) of -mean_j w_j * log pi(a_j | s_j).
Vector awr_gradient(const nn::GaussianPolicy& policy, const Matrix& obs,
                    const Matrix& actions, const Vector& weights);

// r + gamma (1 - done) V(s') per sample.
Eigen::RowVectorXd iql_q_target(const IqlAgent& agent, const Batch& batch,
                                const IqlConfig& config);

// V step (expectile of min target Q - V), twin-Q step toward
// r + gamma (1 - done) V(s'), AWR actor step, then polyak targets.
// Throws "non-finite AWR weight" if a weight is not finite.
IqlMetrics iql_update(IqlAgent& agent, const Batch& batch, const IqlConfig& config);

}  // namespace airhockey::learn
