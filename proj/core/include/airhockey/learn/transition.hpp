#pragma once

#include <vector>

#include "airhockey/env/env.hpp"
#include "airhockey/nn/mlp.hpp"

namespace airhockey::learn {

using nn::Matrix;
using nn::Vector;

// One environment step. The goal fields are filled for goal-conditioned
// tasks only.
struct Transition {
  std::vector<double> obs;
  std::vector<double> action;
  double reward = 0.0;
  std::vector<double> next_obs;
  bool done = false;       // terminal: no bootstrap past this step
  bool truncated = false;  // episode cut by the step limit
  bool success = false;

  std::vector<double> prev_achieved_goal;
  std::vector<double> achieved_goal;
  std::vector<double> desired_goal;
  // Sum of the reward terms that do not depend on the goal.
  double goal_free_reward = 0.0;
};

// Builds the record of one env step. `obs` and `prev_achieved` are taken
// before the step; `action` is the clamped action the env consumed.
Transition make_transition(const env::Env& env, const env::Observation& obs,
                           const env::Action& action,
                           const std::vector<double>& prev_achieved,
                           const env::StepResult& step);

// Column-major batch: column j is sample j.
struct Batch {
  Matrix obs;
  Matrix actions;
  Vector rewards;
  Matrix next_obs;
  Vector dones;

  Eigen::Index size() const { return obs.cols(); }
};

// Packs transitions[indices] (all of them when indices is empty).
Batch make_batch(const std::vector<Transition>& transitions,
                 const std::vector<std::size_t>& indices = {});

}  // namespace airhockey::learn
