#pragma once

#include <cstdint>
#include <optional>

#include "airhockey/env/reward.hpp"
#include "airhockey/env/task.hpp"
#include "airhockey/physics/world.hpp"
#include "airhockey/rng.hpp"

namespace airhockey::env {

struct EventSummary {
  int paddle_puck_contacts = 0;
  int puck_object_contacts = 0;
  int wall_contacts = 0;
};

struct StepInfo {
  bool success = false;
  bool terminated = false;  // ended by the success predicate
  bool truncated = false;   // ended by the episode limit
  RewardComponents components;
  EventSummary events;
  std::vector<double> achieved_goal;  // empty unless goal-conditioned
};

struct StepResult {
  Observation observation;
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

// One task instance: reset/step over a deterministic world. Single owner;
// cheap to copy, so vectorized training keeps N independent instances.
class Env {
 public:
  static constexpr int kActionDim = 2;
  // Home pose of the paddle at every reset.
  static constexpr physics::Vec2 kPaddleHome{0.0, -0.7};

  Env(TaskSpec task, physics::PhysicsParams physics, std::uint64_t seed);

  Observation reset();

  // Throws "episode done; reset required" after a terminal step.
  StepResult step(const Action& action);

  // Starts an episode from a recorded initial world and goal instead of
  // sampling one; used by replay and relabeling checks.
  Observation restore(const physics::WorldState& initial_world,
                      const std::optional<Goal>& goal);

  const physics::WorldState& world() const { return world_; }
  const TaskSpec& task() const { return task_; }
  const physics::PhysicsParams& physics() const { return physics_; }
  const std::optional<Goal>& goal() const { return goal_; }
  const EpisodeTracker& tracker() const { return tracker_; }
  bool done() const { return done_; }
  int observation_dim() const { return env::observation_dim(task_); }
  Observation observation() const;

 private:
  physics::WorldState sample_initial_world();
  std::optional<Goal> sample_goal();

  TaskSpec task_;
  physics::PhysicsParams physics_;
  Rng rng_;
  physics::WorldState world_;
  std::optional<Goal> goal_;
  EpisodeTracker tracker_;
  bool done_ = true;
};

// Builds the environment for `id` with task overrides applied on top of the
// task's defaults. Two calls with identical arguments behave identically.
Env make_task(TaskId id, const EnvConfig& config, std::uint64_t seed);

// Clamps both components into [-1, 1]; NaN becomes an error.
Action clamp_action(const Action& action);

}  // namespace airhockey::env
