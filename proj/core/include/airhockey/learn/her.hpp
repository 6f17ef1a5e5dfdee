#pragma once

#include <vector>

#include "airhockey/env/task.hpp"
#include "airhockey/learn/transition.hpp"
#include "airhockey/physics/world.hpp"
#include "airhockey/rng.hpp"

namespace airhockey::learn {

enum class HerStrategy { kFinal, kFuture };

std::string to_string(HerStrategy s);
HerStrategy her_strategy_from_string(const std::string& s);

struct HerConfig {
  HerStrategy strategy = HerStrategy::kFuture;
  int k = 4;

  void validate() const;
};

Json to_json(const HerConfig& c);
HerConfig her_config_from_json(const Json& j, const HerConfig& base = {});

// Returns the episode followed by relabeled copies. `final` adds one copy per
// step with the goal achieved at the last step; `future` adds k copies per
// step with goals achieved at uniformly drawn strictly later steps. Rewards,
// success, and done are recomputed under the new goal with goal_reward, and
// the goal block of obs/next_obs is rewritten.
std::vector<Transition> her_relabel(const std::vector<Transition>& episode,
                                    const HerConfig& config,
                                    const env::TaskSpec& spec,
                                    const physics::TableBounds& table, Rng& rng);

}  // namespace airhockey::learn
