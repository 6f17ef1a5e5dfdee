#include "airhockey/env/reward.hpp"

#include <algorithm>
#include <cmath>

#include "airhockey/error.hpp"

namespace airhockey::env {
namespace {

using physics::dot;
using physics::norm;

double cosine(Vec2 a, Vec2 b) {
  const double na = norm(a);
  const double nb = norm(b);
  if (na < 1e-12 || nb < 1e-12) return 0.0;
  return std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
}

Vec2 vec_at(const std::vector<double>& v, std::size_t i) {
  return {v.at(i), v.at(i + 1)};
}

}  // namespace

void RewardComponents::add(std::string name, double value) {
  items_.emplace_back(std::move(name), value);
}

double RewardComponents::total() const {
  double sum = 0.0;
  for (const auto& [name, value] : items_) sum += value;
  return sum;
}

double RewardComponents::total_excluding(
    const std::vector<std::string>& excluded) const {
  double sum = 0.0;
  for (const auto& [name, value] : items_) {
    if (std::find(excluded.begin(), excluded.end(), name) == excluded.end()) {
      sum += value;
    }
  }
  return sum;
}

std::optional<double> RewardComponents::find(const std::string& name) const {
  for (const auto& [n, value] : items_) {
    if (n == name) return value;
  }
  return std::nullopt;
}

double mean_pairwise_distance(const std::vector<physics::BodyState>& blocks) {
  double sum = 0.0;
  int pairs = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (!blocks[i].active) continue;
    for (std::size_t j = i + 1; j < blocks.size(); ++j) {
      if (!blocks[j].active) continue;
      sum += norm(blocks[i].position - blocks[j].position);
      ++pairs;
    }
  }
  return pairs == 0 ? 0.0 : sum / pairs;
}

EpisodeTracker start_episode(const TaskSpec& spec,
                             const physics::WorldState& world) {
  EpisodeTracker t;
  (void)spec;
  for (const auto& obj : world.objects) t.initial_blocks.push_back(obj.position);
  t.initial_spread = mean_pairwise_distance(world.objects);
  t.prev_spread = t.initial_spread;
  return t;
}

std::vector<double> achieved_goal(const TaskSpec& spec,
                                  const physics::WorldState& world) {
  if (!spec.goal_conditioned) return {};
  const bool paddle = !uses_puck(spec.task_id);
  const physics::BodyState& body = paddle ? world.paddle : world.puck;
  std::vector<double> g = {body.position.x, body.position.y};
  if (has_goal_velocity(spec.task_id)) {
    g.push_back(body.velocity.x);
    g.push_back(body.velocity.y);
  }
  return g;
}

std::vector<double> goal_vector(const TaskSpec& spec, const Goal& goal) {
  std::vector<double> g = {goal.position.x, goal.position.y};
  if (has_goal_velocity(spec.task_id)) {
    g.push_back(goal.velocity.x);
    g.push_back(goal.velocity.y);
  }
  return g;
}

Goal goal_from_vector(const TaskSpec& spec, const std::vector<double>& v) {
  const auto expected = static_cast<std::size_t>(goal_dim(spec.task_id));
  if (expected == 0 || v.size() != expected) {
    throw Error("goal vector has " + std::to_string(v.size()) +
                " entries, expected " + std::to_string(expected));
  }
  Goal g;
  g.position = vec_at(v, 0);
  if (expected == 4) g.velocity = vec_at(v, 2);
  return g;
}

std::vector<std::string> goal_component_names(const TaskSpec& spec) {
  switch (spec.task_id) {
    case TaskId::kReach:
      return {"goal_distance", "success_bonus"};
    case TaskId::kReachVelocity:
      return {"goal_distance", "goal_velocity", "success_bonus"};
    case TaskId::kHitGoal:
      return {"success_bonus"};
    case TaskId::kHitGoalVelocity:
      return {"goal_distance", "goal_cosine", "goal_speed", "success_bonus"};
    default:
      return {};
  }
}

GoalOutcome goal_reward(const TaskSpec& spec,
                        const std::vector<double>& prev_achieved,
                        const std::vector<double>& achieved,
                        const std::vector<double>& desired) {
  const auto dim = static_cast<std::size_t>(goal_dim(spec.task_id));
  if (dim == 0) throw Error(to_string(spec.task_id) + " is not goal-conditioned");
  if (achieved.size() != dim || desired.size() != dim ||
      prev_achieved.size() != dim) {
    throw Error("goal vectors must have " + std::to_string(dim) + " entries");
  }
  const RewardWeights& w = spec.reward_weights;
  const Vec2 pos = vec_at(achieved, 0);
  const Vec2 goal_pos = vec_at(desired, 0);
  const double dist = norm(pos - goal_pos);

  GoalOutcome out;
  switch (spec.task_id) {
    case TaskId::kReach:
      out.components.add("goal_distance", -w.reach_distance * dist);
      out.success = dist <= spec.eps_position;
      break;
    case TaskId::kReachVelocity: {
      const double vel_err = norm(vec_at(achieved, 2) - vec_at(desired, 2));
      out.components.add("goal_distance", -w.reach_distance * dist);
      out.components.add("goal_velocity", -w.reach_velocity * vel_err);
      out.success = dist <= spec.eps_position && vel_err <= spec.eps_velocity;
      break;
    }
    case TaskId::kHitGoal:
      out.success = dist <= spec.goal_radius;
      break;
    case TaskId::kHitGoalVelocity: {
      const Vec2 vel = vec_at(achieved, 2);
      const Vec2 goal_vel = vec_at(desired, 2);
      const double prev_dist = norm(vec_at(prev_achieved, 0) - goal_pos);
      const bool inside = dist <= spec.goal_radius;
      const bool entered = inside && prev_dist > spec.goal_radius;
      const double cos = cosine(vel, goal_vel);
      const double speed_err = std::abs(norm(vel) - norm(goal_vel));
      out.components.add("goal_distance",
                         entered ? -w.goal_distance * dist : 0.0);
      out.components.add("goal_cosine", entered ? w.goal_cosine * cos : 0.0);
      out.components.add("goal_speed",
                         entered ? -w.goal_speed * speed_err : 0.0);
      out.success = inside && speed_err <= spec.eps_velocity && cos >= 0.9;
      break;
    }
    default:
      break;
  }
  out.components.add("success_bonus", out.success ? w.success_bonus : 0.0);
  return out;
}

RewardOutcome task_reward(const TaskSpec& spec,
                          const physics::WorldState& prev_world,
                          const physics::WorldState& world,
                          const physics::StepEvents& events,
                          const ActionContext& ctx) {
  if (ctx.tracker == nullptr) throw Error("task_reward needs an episode tracker");
  const RewardWeights& w = spec.reward_weights;
  RewardOutcome out;
  EpisodeTracker& t = out.tracker;
  t = *ctx.tracker;
  RewardComponents& c = out.components;

  const bool contact = events.paddle_puck_contacts > 0;
  const physics::BodyState& puck = world.puck;
  const std::int64_t step = t.steps;
  bool bonus_pending = false;

  // Goal tasks take every goal-dependent term from goal_reward so that
  // hindsight relabeling reproduces them exactly.
  std::optional<GoalOutcome> goal_terms;
  if (spec.goal_conditioned) {
    if (!ctx.goal) throw Error("goal-conditioned task stepped without a goal");
    goal_terms = goal_reward(spec, achieved_goal(spec, prev_world),
                             achieved_goal(spec, world),
                             goal_vector(spec, *ctx.goal));
    for (const auto& [name, value] : goal_terms->components.items()) {
      if (name != "success_bonus") c.add(name, value);
    }
    t.goal_reached = t.goal_reached || goal_terms->success;
  }

  switch (spec.task_id) {
    case TaskId::kTouch: {
      const bool counted =
          contact && (!t.prev_step_contact ||
                      step - t.last_counted_touch >= spec.touch_debounce_steps);
      if (counted) {
        ++t.touches;
        t.last_counted_touch = step;
      }
      c.add("touch", counted ? w.event : 0.0);
      break;
    }
    case TaskId::kStrike:
      if (contact && norm(puck.velocity) >= spec.v_min_strike) {
        t.strike_achieved = true;
      }
      break;
    case TaskId::kStrikeCrowd: {
      const double spread = mean_pairwise_distance(world.objects);
      c.add("spread", w.spread * (spread - t.prev_spread));
      t.prev_spread = spread;
      t.best_spread_gain = std::max(t.best_spread_gain, spread - t.initial_spread);
      break;
    }
    case TaskId::kJuggle: {
      bool hit = false;
      if (t.juggle_pending && puck.position.y >= t.juggle_contact_y + spec.juggle_rise) {
        hit = true;
        ++t.juggle_hits;
        t.juggle_pending = false;
      }
      if (contact) {
        t.juggle_pending = true;
        t.juggle_contact_y = puck.position.y;
      }
      c.add("juggle", hit ? w.event : 0.0);
      break;
    }
    case TaskId::kPuckVelocity:
      if (contact && puck.velocity.y >= spec.v_min_up) {
        t.up_velocity_achieved = true;
      }
      break;
    case TaskId::kMoveBlock:
      for (std::size_t i = 0; i < world.objects.size() && i < t.initial_blocks.size(); ++i) {
        if (norm(world.objects[i].position - t.initial_blocks[i]) >=
            spec.block_move_min) {
          t.block_moved = true;
        }
      }
      break;
    default:
      break;
  }
  t.prev_step_contact = contact;

  if (uses_puck(spec.task_id)) {
    c.add("puck_distance",
          -w.puck_distance * norm(world.paddle.position - puck.position));
  }

  const bool success_now = task_success(spec, t);
  if (spec.goal_conditioned) {
    // Goal tasks end on success, so "first success" is "success this step".
    bonus_pending = goal_terms->success;
  } else if (terminates_on_success(spec.task_id)) {
    bonus_pending = success_now && !t.success;
  }
  if (spec.goal_conditioned || terminates_on_success(spec.task_id)) {
    c.add("success_bonus", bonus_pending ? w.success_bonus : 0.0);
  }
  t.success = t.success || success_now;

  // The first action of an episode has no predecessor to jitter against.
  const Action& prev = step == 0 ? ctx.action : t.prev_action;
  const double dx = ctx.action[0] - prev[0];
  const double dy = ctx.action[1] - prev[1];
  c.add("regularization", -spec.reg_lambda * (dx * dx + dy * dy));
  t.prev_action = ctx.action;
  ++t.steps;

  out.reward = c.total();
  return out;
}

bool task_success(const TaskSpec& spec, const EpisodeTracker& e) {
  switch (spec.task_id) {
    case TaskId::kReach:
    case TaskId::kReachVelocity:
    case TaskId::kHitGoal:
    case TaskId::kHitGoalVelocity:
      return e.goal_reached;
    case TaskId::kTouch:
      return e.touches >= 1;
    case TaskId::kStrike:
      return e.strike_achieved;
    case TaskId::kStrikeCrowd:
      return e.best_spread_gain >= spec.crowd_threshold;
    case TaskId::kJuggle:
      return e.juggle_hits >= spec.juggle_hits_success;
    case TaskId::kPuckVelocity:
      return e.up_velocity_achieved;
    case TaskId::kMoveBlock:
      return e.block_moved;
  }
  return false;
}

void write_goal_block(const TaskSpec& spec, const Goal& goal,
                      const physics::TableBounds& table, Observation& obs) {
  if (!spec.goal_conditioned) return;
  const std::size_t need = kGoalObsOffset + static_cast<std::size_t>(goal_dim(spec.task_id));
  if (obs.size() < need) throw Error("observation too short for the goal block");
  obs[kGoalObsOffset] = goal.position.x / table.half_width;
  obs[kGoalObsOffset + 1] = goal.position.y / table.half_length;
  if (has_goal_velocity(spec.task_id)) {
    obs[kGoalObsOffset + 2] = goal.velocity.x / spec.velocity_scale;
    obs[kGoalObsOffset + 3] = goal.velocity.y / spec.velocity_scale;
  }
}

Observation observe(const TaskSpec& spec, const physics::WorldState& world,
                    const std::optional<Goal>& goal,
                    const physics::TableBounds& table) {
  Observation obs;
  obs.reserve(static_cast<std::size_t>(observation_dim(spec)));
  const auto push_pos = [&](Vec2 p) {
    obs.push_back(p.x / table.half_width);
    obs.push_back(p.y / table.half_length);
  };
  const auto push_vel = [&](Vec2 v) {
    obs.push_back(v.x / spec.velocity_scale);
    obs.push_back(v.y / spec.velocity_scale);
  };
  push_pos(world.paddle.position);
  push_vel(world.paddle.velocity);
  push_pos(world.puck.position);
  push_vel(world.puck.velocity);
  if (spec.goal_conditioned) {
    const std::size_t n = static_cast<std::size_t>(goal_dim(spec.task_id));
    obs.resize(obs.size() + n, 0.0);
    if (goal) write_goal_block(spec, *goal, table, obs);
  }
  for (int i = 0; i < spec.n_blocks; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    push_pos(idx < world.objects.size() ? world.objects[idx].position : Vec2{});
  }
  return obs;
}

}  // namespace airhockey::env
