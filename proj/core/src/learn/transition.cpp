#include "airhockey/learn/transition.hpp"

#include "airhockey/error.hpp"

namespace airhockey::learn {

Transition make_transition(const env::Env& env, const env::Observation& obs,
                           const env::Action& action,
                           const std::vector<double>& prev_achieved,
                           const env::StepResult& step) {
  Transition t;
  t.obs = obs;
  t.action.assign(action.begin(), action.end());
  t.reward = step.reward;
  t.next_obs = step.observation;
  t.done = step.info.terminated;
  t.truncated = step.info.truncated;
  t.success = step.info.success;
  const env::TaskSpec& spec = env.task();
  if (spec.goal_conditioned) {
    t.prev_achieved_goal = prev_achieved;
    t.achieved_goal = step.info.achieved_goal;
    t.desired_goal = env::goal_vector(spec, *env.goal());
    t.goal_free_reward =
        step.info.components.total_excluding(env::goal_component_names(spec));
  } else {
    t.goal_free_reward = step.reward;
  }
  return t;
}

Batch make_batch(const std::vector<Transition>& transitions,
                 const std::vector<std::size_t>& indices) {
  const std::size_t n = indices.empty() ? transitions.size() : indices.size();
  if (n == 0) throw Error("empty batch");
  const Transition& first = transitions.at(indices.empty() ? 0 : indices[0]);
  const auto od = static_cast<Eigen::Index>(first.obs.size());
  const auto ad = static_cast<Eigen::Index>(first.action.size());
  Batch b;
  b.obs.resize(od, static_cast<Eigen::Index>(n));
  b.next_obs.resize(od, static_cast<Eigen::Index>(n));
  b.actions.resize(ad, static_cast<Eigen::Index>(n));
  b.rewards.resize(static_cast<Eigen::Index>(n));
  b.dones.resize(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const Transition& t = transitions.at(indices.empty() ? j : indices[j]);
    if (static_cast<Eigen::Index>(t.obs.size()) != od ||
        static_cast<Eigen::Index>(t.next_obs.size()) != od ||
        static_cast<Eigen::Index>(t.action.size()) != ad) {
      throw Error("transition " + std::to_string(j) + " has inconsistent dims");
    }
    const auto c = static_cast<Eigen::Index>(j);
    b.obs.col(c) = Eigen::Map<const Vector>(t.obs.data(), od);
    b.next_obs.col(c) = Eigen::Map<const Vector>(t.next_obs.data(), od);
    b.actions.col(c) = Eigen::Map<const Vector>(t.action.data(), ad);
    b.rewards[c] = t.reward;
    b.dones[c] = t.done ? 1.0 : 0.0;
  }
  return b;
}

}  // namespace airhockey::learn
