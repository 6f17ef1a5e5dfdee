#pragma once

#include <array>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "airhockey/env/task.hpp"
#include "airhockey/physics/world.hpp"

namespace airhockey::env {

using Action = std::array<double, 2>;
using Observation = std::vector<double>;

// Named reward terms in a fixed per-task order. The reward is their sum.
class RewardComponents {
 public:
  void add(std::string name, double value);
  double total() const;
  // Sum over terms whose names are not in `excluded`.
  double total_excluding(const std::vector<std::string>& excluded) const;
  std::optional<double> find(const std::string& name) const;
  const std::vector<std::pair<std::string, double>>& items() const {
    return items_;
  }

 private:
  std::vector<std::pair<std::string, double>> items_;
};

// Episode history needed by the non-Markovian parts of the rewards
// (debounce, juggle qualification, spread baseline, action regularization).
struct EpisodeTracker {
  Action prev_action{0.0, 0.0};  // unused before the first step
  std::int64_t steps = 0;

  int touches = 0;
  bool prev_step_contact = false;
  std::int64_t last_counted_touch = std::numeric_limits<std::int64_t>::min() / 2;

  bool juggle_pending = false;
  double juggle_contact_y = 0.0;
  int juggle_hits = 0;

  bool reach_achieved = false;
  bool strike_achieved = false;
  bool up_velocity_achieved = false;
  bool block_moved = false;
  bool goal_reached = false;
  double best_spread_gain = -std::numeric_limits<double>::infinity();

  std::vector<Vec2> initial_blocks;
  double initial_spread = 0.0;
  double prev_spread = 0.0;

  bool success = false;
};

// Starts a tracker for an episode beginning at `world`.
EpisodeTracker start_episode(const TaskSpec& spec,
                             const physics::WorldState& world);

// Mean pairwise distance between active blocks (0 for fewer than two).
double mean_pairwise_distance(const std::vector<physics::BodyState>& blocks);

struct ActionContext {
  Action action{0.0, 0.0};  // clamped action consumed this step
  std::optional<Goal> goal;
  const EpisodeTracker* tracker = nullptr;  // state before this step
};

struct RewardOutcome {
  double reward = 0.0;
  RewardComponents components;
  EpisodeTracker tracker;  // state after this step
};

RewardOutcome task_reward(const TaskSpec& spec,
                          const physics::WorldState& prev_world,
                          const physics::WorldState& world,
                          const physics::StepEvents& events,
                          const ActionContext& ctx);

bool task_success(const TaskSpec& spec, const EpisodeTracker& episode);

// Goal-dependent terms, shared by the env and hindsight relabeling so both
// compute identical values. Vectors use meters: position (2) then velocity
// (2) for velocity-conditioned tasks.
struct GoalOutcome {
  RewardComponents components;
  bool success = false;
};
GoalOutcome goal_reward(const TaskSpec& spec,
                        const std::vector<double>& prev_achieved,
                        const std::vector<double>& achieved,
                        const std::vector<double>& desired);
// Names of the components produced by goal_reward for this task.
std::vector<std::string> goal_component_names(const TaskSpec& spec);

std::vector<double> achieved_goal(const TaskSpec& spec,
                                  const physics::WorldState& world);
std::vector<double> goal_vector(const TaskSpec& spec, const Goal& goal);
Goal goal_from_vector(const TaskSpec& spec, const std::vector<double>& v);

// Index of the goal block inside the observation (goal-conditioned tasks).
inline constexpr int kGoalObsOffset = 8;

Observation observe(const TaskSpec& spec, const physics::WorldState& world,
                    const std::optional<Goal>& goal,
                    const physics::TableBounds& table);

// Writes the normalized goal block of `goal` into an observation in place.
void write_goal_block(const TaskSpec& spec, const Goal& goal,
                      const physics::TableBounds& table, Observation& obs);

}  // namespace airhockey::env
