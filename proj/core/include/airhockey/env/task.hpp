#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "airhockey/json.hpp"

#include "airhockey/physics/world.hpp"

namespace airhockey::env {

using airhockey::Json;
using physics::Vec2;

enum class TaskId {
  kReach,
  kReachVelocity,
  kTouch,
  kStrike,
  kStrikeCrowd,
  kJuggle,
  kPuckVelocity,
  kMoveBlock,
  kHitGoal,
  kHitGoalVelocity,
};

inline constexpr std::array<TaskId, 10> kAllTasks = {
    TaskId::kReach,       TaskId::kReachVelocity, TaskId::kTouch,
    TaskId::kStrike,      TaskId::kStrikeCrowd,   TaskId::kJuggle,
    TaskId::kPuckVelocity, TaskId::kMoveBlock,    TaskId::kHitGoal,
    TaskId::kHitGoalVelocity,
};

// Canonical identifier, e.g. "ReachVelocity".
std::string to_string(TaskId id);
// Short column label used in results tables, e.g. "Reach V.".
std::string display_name(TaskId id);
// Throws with the list of valid ids on an unknown name.
TaskId parse_task_id(std::string_view name);

struct RewardWeights {
  double reach_distance = 0.1;   // w_d
  double reach_velocity = 0.1;
  double puck_distance = 0.1;    // w_p
  double success_bonus = 1.0;
  double event = 1.0;            // per touch / qualifying juggle hit
  double spread = 10.0;          // w_s
  double goal_distance = 1.0;    // w_1
  double goal_cosine = 0.5;      // w_2
  double goal_speed = 0.5;       // w_3
};

struct TaskSpec {
  TaskId task_id = TaskId::kReach;
  int episode_limit = 200;
  double eps_position = 0.02;
  double eps_velocity = 0.1;
  double v_min_strike = 0.5;
  double v_min_up = 0.5;
  double juggle_rise = 0.3;
  int juggle_hits_success = 4;
  double block_move_min = 0.05;
  double goal_radius = 0.08;
  double goal_speed = 0.6;
  double crowd_threshold = 0.04;
  int touch_debounce_steps = 10;
  RewardWeights reward_weights;
  double reg_lambda = 0.1;
  bool goal_conditioned = true;
  int n_blocks = 0;
  // Velocity normalization for observations.
  double velocity_scale = 2.0;

  void validate() const;
};

TaskSpec default_task_spec(TaskId id);

bool is_goal_conditioned(TaskId id);
bool has_goal_velocity(TaskId id);
// Reach tasks park the puck; everything else uses it.
bool uses_puck(TaskId id);
// Touch and Juggle keep paying per event, the rest end on success.
bool terminates_on_success(TaskId id);
// Length of the achieved/desired goal vectors (0 if not goal-conditioned).
int goal_dim(TaskId id);

Json to_json(const RewardWeights& w);
Json to_json(const TaskSpec& spec);
// Missing keys keep `base` values; task_id in the document must match base.
TaskSpec task_spec_from_json(const Json& j, const TaskSpec& base);

struct Goal {
  Vec2 position;
  Vec2 velocity;
  friend bool operator==(const Goal&, const Goal&) = default;
};

Json to_json(const Goal& goal);
Goal goal_from_json(const Json& j);

// Physics plus task overrides; the unit from which environments are built.
struct EnvConfig {
  physics::PhysicsParams physics;
  Json task_overrides = Json::object();
};

// Observation layout: field names, one per observation entry.
std::vector<std::string> observation_layout(const TaskSpec& spec);
int observation_dim(const TaskSpec& spec);

// Machine-readable catalog of all tasks (ids, dims, thresholds, components)
// under the given physics.
Json task_catalog(const physics::PhysicsParams& physics = {});

}  // namespace airhockey::env
