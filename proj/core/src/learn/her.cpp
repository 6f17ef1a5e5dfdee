#include "airhockey/learn/her.hpp"

#include "airhockey/env/reward.hpp"
#include "airhockey/error.hpp"

namespace airhockey::learn {

std::string to_string(HerStrategy s) {
  return s == HerStrategy::kFinal ? "final" : "future";
}

HerStrategy her_strategy_from_string(const std::string& s) {
  if (s == "final") return HerStrategy::kFinal;
  if (s == "future") return HerStrategy::kFuture;
  throw Error("unknown HER strategy '" + s + "' (expected final or future)");
}

void HerConfig::validate() const {
  if (strategy == HerStrategy::kFuture && k < 1) {
    throw Error("her k must be >= 1 for the future strategy");
  }
}

Json to_json(const HerConfig& c) {
  Json j;
  j["strategy"] = to_string(c.strategy);
  j["k"] = c.k;
  return j;
}

HerConfig her_config_from_json(const Json& j, const HerConfig& base) {
  if (!j.is_object()) throw Error("her config must be an object");
  HerConfig c = base;
  if (auto it = j.find("strategy"); it != j.end()) {
    c.strategy = her_strategy_from_string(it->get<std::string>());
  }
  read_if(j, "k", c.k);
  c.validate();
  return c;
}

std::vector<Transition> her_relabel(const std::vector<Transition>& episode,
                                    const HerConfig& config,
                                    const env::TaskSpec& spec,
                                    const physics::TableBounds& table, Rng& rng) {
  if (!spec.goal_conditioned) {
    throw Error("HER needs a goal-conditioned task, got " + env::to_string(spec.task_id));
  }
  config.validate();
  const std::size_t dim = static_cast<std::size_t>(env::goal_dim(spec.task_id));
  for (std::size_t t = 0; t < episode.size(); ++t) {
    const Transition& tr = episode[t];
    if (tr.achieved_goal.size() != dim || tr.prev_achieved_goal.size() != dim ||
        tr.desired_goal.size() != dim) {
      throw Error("transition " + std::to_string(t) + " lacks goal fields");
    }
  }
  const bool terminates = env::terminates_on_success(spec.task_id);

  const auto relabel = [&](const Transition& src, const std::vector<double>& goal) {
    Transition t = src;
    t.desired_goal = goal;
    const env::Goal g = env::goal_from_vector(spec, goal);
    env::write_goal_block(spec, g, table, t.obs);
    env::write_goal_block(spec, g, table, t.next_obs);
    const env::GoalOutcome o =
        env::goal_reward(spec, src.prev_achieved_goal, src.achieved_goal, goal);
    t.reward = src.goal_free_reward + o.components.total();
    t.success = o.success;
    t.done = o.success && terminates;
    t.truncated = false;
    return t;
  };

  std::vector<Transition> out = episode;
  const std::size_t n = episode.size();
  if (n == 0) return out;
  if (config.strategy == HerStrategy::kFinal) {
    const std::vector<double>& goal = episode.back().achieved_goal;
    for (const Transition& t : episode) out.push_back(relabel(t, goal));
  } else {
    for (std::size_t t = 0; t + 1 < n; ++t) {
      for (int i = 0; i < config.k; ++i) {
        const std::size_t later = t + 1 + rng.below(n - 1 - t);
        out.push_back(relabel(episode[t], episode[later].achieved_goal));
      }
    }
  }
  return out;
}

}  // namespace airhockey::learn
