#include "airhockey/env/task.hpp"

#include "airhockey/env/reward.hpp"
#include "airhockey/error.hpp"
#include "airhockey/json.hpp"
#include "airhockey/physics/serialize.hpp"

namespace airhockey::env {
namespace {

struct TaskNames {
  TaskId id;
  const char* name;
  const char* display;
};

constexpr TaskNames kNames[] = {
    {TaskId::kReach, "Reach", "Reach"},
    {TaskId::kReachVelocity, "ReachVelocity", "Reach V."},
    {TaskId::kTouch, "Touch", "Touch"},
    {TaskId::kStrike, "Strike", "Strike"},
    {TaskId::kStrikeCrowd, "StrikeCrowd", "Strike Crowd"},
    {TaskId::kJuggle, "Juggle", "Juggle"},
    {TaskId::kPuckVelocity, "PuckVelocity", "Puck V."},
    {TaskId::kMoveBlock, "MoveBlock", "Block"},
    {TaskId::kHitGoal, "HitGoal", "Hit Goal"},
    {TaskId::kHitGoalVelocity, "HitGoalVelocity", "Hit Goal V."},
};

}  // namespace

std::string to_string(TaskId id) {
  for (const auto& n : kNames) {
    if (n.id == id) return n.name;
  }
  return "unknown";
}

std::string display_name(TaskId id) {
  for (const auto& n : kNames) {
    if (n.id == id) return n.display;
  }
  return "unknown";
}

TaskId parse_task_id(std::string_view name) {
  for (const auto& n : kNames) {
    if (name == n.name) return n.id;
  }
  std::string valid;
  for (const auto& n : kNames) {
    if (!valid.empty()) valid += ", ";
    valid += n.name;
  }
  throw Error("unknown task_id '" + std::string(name) + "'; valid ids: " + valid);
}

bool is_goal_conditioned(TaskId id) {
  return id == TaskId::kReach || id == TaskId::kReachVelocity ||
         id == TaskId::kHitGoal || id == TaskId::kHitGoalVelocity;
}

bool has_goal_velocity(TaskId id) {
  return id == TaskId::kReachVelocity || id == TaskId::kHitGoalVelocity;
}

bool uses_puck(TaskId id) {
  return id != TaskId::kReach && id != TaskId::kReachVelocity;
}

bool terminates_on_success(TaskId id) {
  return id != TaskId::kTouch && id != TaskId::kJuggle;
}

int goal_dim(TaskId id) {
  if (!is_goal_conditioned(id)) return 0;
  return has_goal_velocity(id) ? 4 : 2;
}

TaskSpec default_task_spec(TaskId id) {
  TaskSpec s;
  s.task_id = id;
  s.goal_conditioned = is_goal_conditioned(id);
  if (id == TaskId::kJuggle) s.episode_limit = 400;
  if (id == TaskId::kStrikeCrowd) s.n_blocks = 6;
  if (id == TaskId::kMoveBlock) s.n_blocks = 1;
  return s;
}

void TaskSpec::validate() const {
  for (double v : {eps_position, eps_velocity, v_min_strike, v_min_up,
                   juggle_rise, block_move_min, goal_radius, goal_speed,
                   crowd_threshold, velocity_scale}) {
    if (!(v > 0.0)) throw Error("task thresholds must be positive");
  }
  if (episode_limit < 1) throw Error("episode_limit must be >= 1");
  if (juggle_hits_success < 1) throw Error("juggle_hits_success must be >= 1");
  if (touch_debounce_steps < 1) throw Error("touch_debounce_steps must be >= 1");
  if (reg_lambda < 0.0) throw Error("reg_lambda must be non-negative");
  if (n_blocks < 0) throw Error("n_blocks must be non-negative");
  if (goal_conditioned != is_goal_conditioned(task_id)) {
    throw Error("goal_conditioned must be true exactly for Reach, "
                "ReachVelocity, HitGoal and HitGoalVelocity");
  }
  if ((task_id == TaskId::kStrikeCrowd || task_id == TaskId::kMoveBlock) &&
      n_blocks < 1) {
    throw Error(to_string(task_id) + " needs at least one block");
  }
}

Json to_json(const RewardWeights& w) {
  Json j;
  j["reach_distance"] = w.reach_distance;
  j["reach_velocity"] = w.reach_velocity;
  j["puck_distance"] = w.puck_distance;
  j["success_bonus"] = w.success_bonus;
  j["event"] = w.event;
  j["spread"] = w.spread;
  j["goal_distance"] = w.goal_distance;
  j["goal_cosine"] = w.goal_cosine;
  j["goal_speed"] = w.goal_speed;
  return j;
}

Json to_json(const TaskSpec& s) {
  Json j;
  j["task_id"] = to_string(s.task_id);
  j["episode_limit"] = s.episode_limit;
  j["eps_position"] = s.eps_position;
  j["eps_velocity"] = s.eps_velocity;
  j["v_min_strike"] = s.v_min_strike;
  j["v_min_up"] = s.v_min_up;
  j["juggle_rise"] = s.juggle_rise;
  j["juggle_hits_success"] = s.juggle_hits_success;
  j["block_move_min"] = s.block_move_min;
  j["goal_radius"] = s.goal_radius;
  j["goal_speed"] = s.goal_speed;
  j["crowd_threshold"] = s.crowd_threshold;
  j["touch_debounce_steps"] = s.touch_debounce_steps;
  j["reward_weights"] = to_json(s.reward_weights);
  j["reg_lambda"] = s.reg_lambda;
  j["goal_conditioned"] = s.goal_conditioned;
  j["n_blocks"] = s.n_blocks;
  j["velocity_scale"] = s.velocity_scale;
  return j;
}

TaskSpec task_spec_from_json(const Json& j, const TaskSpec& base) {
  if (!j.is_object()) throw Error("task config must be an object");
  TaskSpec s = base;
  if (auto it = j.find("task_id"); it != j.end()) {
    if (parse_task_id(it->get<std::string>()) != base.task_id) {
      throw Error("task override names a different task_id");
    }
  }
  read_if(j, "episode_limit", s.episode_limit);
  read_if(j, "eps_position", s.eps_position);
  read_if(j, "eps_velocity", s.eps_velocity);
  read_if(j, "v_min_strike", s.v_min_strike);
  read_if(j, "v_min_up", s.v_min_up);
  read_if(j, "juggle_rise", s.juggle_rise);
  read_if(j, "juggle_hits_success", s.juggle_hits_success);
  read_if(j, "block_move_min", s.block_move_min);
  read_if(j, "goal_radius", s.goal_radius);
  read_if(j, "goal_speed", s.goal_speed);
  read_if(j, "crowd_threshold", s.crowd_threshold);
  read_if(j, "touch_debounce_steps", s.touch_debounce_steps);
  read_if(j, "reg_lambda", s.reg_lambda);
  read_if(j, "goal_conditioned", s.goal_conditioned);
  read_if(j, "n_blocks", s.n_blocks);
  read_if(j, "velocity_scale", s.velocity_scale);
  if (auto it = j.find("reward_weights"); it != j.end()) {
    RewardWeights& w = s.reward_weights;
    read_if(*it, "reach_distance", w.reach_distance);
    read_if(*it, "reach_velocity", w.reach_velocity);
    read_if(*it, "puck_distance", w.puck_distance);
    read_if(*it, "success_bonus", w.success_bonus);
    read_if(*it, "event", w.event);
    read_if(*it, "spread", w.spread);
    read_if(*it, "goal_distance", w.goal_distance);
    read_if(*it, "goal_cosine", w.goal_cosine);
    read_if(*it, "goal_speed", w.goal_speed);
  }
  s.validate();
  return s;
}

Json to_json(const Goal& goal) {
  Json j;
  j["position"] = physics::to_json(goal.position);
  j["velocity"] = physics::to_json(goal.velocity);
  return j;
}

Goal goal_from_json(const Json& j) {
  return Goal{physics::vec2_from_json(j.at("position")),
              physics::vec2_from_json(j.at("velocity"))};
}

std::vector<std::string> observation_layout(const TaskSpec& spec) {
  std::vector<std::string> names = {"paddle_x", "paddle_y", "paddle_vx",
                                    "paddle_vy", "puck_x",   "puck_y",
                                    "puck_vx",  "puck_vy"};
  if (spec.goal_conditioned) {
    names.push_back("goal_x");
    names.push_back("goal_y");
    if (has_goal_velocity(spec.task_id)) {
      names.push_back("goal_vx");
      names.push_back("goal_vy");
    }
  }
  for (int i = 0; i < spec.n_blocks; ++i) {
    names.push_back("block" + std::to_string(i) + "_x");
    names.push_back("block" + std::to_string(i) + "_y");
  }
  return names;
}

int observation_dim(const TaskSpec& spec) {
  int dim = 8;
  if (spec.goal_conditioned) dim += has_goal_velocity(spec.task_id) ? 4 : 2;
  return dim + 2 * spec.n_blocks;
}

Json task_catalog(const physics::PhysicsParams& physics) {
  Json catalog;
  catalog["table"] = physics::to_json(physics.table);
  catalog["paddle_radius"] = physics.paddle_radius;
  catalog["puck_radius"] = physics.puck_radius;
  catalog["block_radius"] = physics.block_radius;
  catalog["control_dt"] = physics.control_dt;
  catalog["action_dim"] = 2;
  Json tasks = Json::array();
  for (TaskId id : kAllTasks) {
    const TaskSpec spec = default_task_spec(id);
    Json t;
    t["id"] = to_string(id);
    t["display_name"] = display_name(id);
    t["observation_dim"] = observation_dim(spec);
    t["observation_layout"] = observation_layout(spec);
    t["goal_conditioned"] = spec.goal_conditioned;
    t["terminates_on_success"] = terminates_on_success(id);
    t["spec"] = to_json(spec);

    // Component names come from an actual zero step so they cannot drift
    // from the reward code.
    physics::WorldState w;
    w.paddle = physics::make_paddle(physics, {0.0, -0.7});
    w.puck = physics::make_puck(physics, {0.0, 0.0});
    for (int i = 0; i < spec.n_blocks; ++i) {
      w.objects.push_back(physics::make_block(physics, {0.1 * i, 0.3}));
    }
    const EpisodeTracker tracker = start_episode(spec, w);
    ActionContext ctx;
    ctx.tracker = &tracker;
    if (spec.goal_conditioned) ctx.goal = Goal{};
    const RewardOutcome r = task_reward(spec, w, w, {}, ctx);
    Json comps = Json::array();
    for (const auto& [name, value] : r.components.items()) comps.push_back(name);
    t["reward_components"] = comps;
    tasks.push_back(t);
  }
  catalog["tasks"] = tasks;
  return catalog;
}

}  // namespace airhockey::env
