#include "airhockey/env/env.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "airhockey/error.hpp"
#include "airhockey/physics/dynamics.hpp"

namespace airhockey::env {
namespace {

// Puck rest position for tasks that do not use it.
constexpr Vec2 kParkedPuck{0.0, 0.7};
// Apex of the StrikeCrowd rack; the rack opens up-table from here.
constexpr Vec2 kRackApex{0.0, 0.35};

}  // namespace

Action clamp_action(const Action& action) {
  Action out;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (std::isnan(action[i])) throw Error("action contains NaN");
    out[i] = std::clamp(action[i], -1.0, 1.0);
  }
  return out;
}

Env::Env(TaskSpec task, physics::PhysicsParams physics, std::uint64_t seed)
    : task_(std::move(task)), physics_(std::move(physics)), rng_(seed) {
  task_.validate();
  physics_.validate();
}

Env make_task(TaskId id, const EnvConfig& config, std::uint64_t seed) {
  const TaskSpec spec = task_spec_from_json(config.task_overrides, default_task_spec(id));
  return Env(spec, config.physics, seed);
}

physics::WorldState Env::sample_initial_world() {
  using physics::make_block;
  using physics::make_puck;
  physics::WorldState w;
  w.paddle = physics::make_paddle(physics_, kPaddleHome);

  const auto strike_puck = [&] {
    const double side = rng_.uniform() < 0.5 ? -1.0 : 1.0;
    const double x = side * rng_.uniform(0.1, 0.2);
    const double y = rng_.uniform(-0.15, 0.15);
    return make_puck(physics_, {x, y});
  };

  switch (task_.task_id) {
    case TaskId::kReach:
    case TaskId::kReachVelocity:
      w.puck = make_puck(physics_, kParkedPuck);
      w.puck.active = false;
      break;
    case TaskId::kTouch:
    case TaskId::kJuggle:
    case TaskId::kPuckVelocity: {
      const double x = rng_.uniform(-0.2, 0.2);
      const double y = rng_.uniform(0.55, 0.75);
      const double vx = rng_.uniform(-0.25, 0.25);
      const double vy = rng_.uniform(-0.5, -0.1);
      w.puck = make_puck(physics_, {x, y}, {vx, vy});
      break;
    }
    case TaskId::kStrike:
    case TaskId::kHitGoal:
    case TaskId::kHitGoalVelocity:
      w.puck = strike_puck();
      break;
    case TaskId::kStrikeCrowd: {
      w.puck = strike_puck();
      const double spacing = 2.0 * physics_.block_radius + 0.002;
      const double row_height = spacing * std::numbers::sqrt3 / 2.0;
      const double jitter = rng_.uniform(-0.02, 0.02);
      for (int row = 0, placed = 0; placed < task_.n_blocks; ++row) {
        for (int k = 0; k <= row && placed < task_.n_blocks; ++k, ++placed) {
          const double x = kRackApex.x + jitter + (k - row / 2.0) * spacing;
          const double y = kRackApex.y + row * row_height;
          w.objects.push_back(make_block(physics_, {x, y}));
        }
      }
      break;
    }
    case TaskId::kMoveBlock:
      w.puck = strike_puck();
      for (int i = 0; i < task_.n_blocks; ++i) {
        const double x = rng_.uniform(-0.15, 0.15);
        const double y = rng_.uniform(0.25, 0.45);
        w.objects.push_back(make_block(physics_, {x, y}));
      }
      break;
  }
  return w;
}

std::optional<Goal> Env::sample_goal() {
  if (!task_.goal_conditioned) return std::nullopt;
  Goal g;
  const physics::TableBounds& table = physics_.table;
  if (uses_puck(task_.task_id)) {
    const double r = task_.goal_radius;
    g.position = {rng_.uniform(-table.half_width + r, table.half_width - r),
                  rng_.uniform(r, table.half_length - r)};
  } else {
    const physics::Region region = physics::paddle_region(table, physics_.paddle_radius);
    g.position = {rng_.uniform(region.x_min, region.x_max),
                  rng_.uniform(region.y_min, region.y_max)};
  }
  if (has_goal_velocity(task_.task_id)) {
    const double angle = rng_.uniform(-std::numbers::pi, std::numbers::pi);
    const double speed = rng_.uniform(0.3, 1.0) * 2.0 * task_.goal_speed;
    g.velocity = {speed * std::cos(angle), speed * std::sin(angle)};
  }
  return g;
}

Observation Env::reset() {
  physics::WorldState w = sample_initial_world();
  std::optional<Goal> goal = sample_goal();
  w.rng_state = rng_.state();
  return restore(w, goal);
}

Observation Env::restore(const physics::WorldState& initial_world,
                         const std::optional<Goal>& goal) {
  if (task_.goal_conditioned && !goal) {
    throw Error(to_string(task_.task_id) + " needs a goal");
  }
  if (static_cast<int>(initial_world.objects.size()) != task_.n_blocks) {
    throw Error("initial world has " + std::to_string(initial_world.objects.size()) +
                " objects, task expects " + std::to_string(task_.n_blocks));
  }
  world_ = initial_world;
  goal_ = task_.goal_conditioned ? goal : std::nullopt;
  rng_.set_state(initial_world.rng_state);
  tracker_ = start_episode(task_, world_);
  done_ = false;
  return observation();
}

Observation Env::observation() const {
  return observe(task_, world_, goal_, physics_.table);
}

StepResult Env::step(const Action& action) {
  if (done_) throw Error("episode done; reset required");
  const Action a = clamp_action(action);
  const double reach = physics_.paddle_max_speed * physics_.control_dt;
  const Vec2 target = world_.paddle.position + Vec2{a[0] * reach, a[1] * reach};

  physics::StepOutput out = physics::step_world(world_, target, physics_);

  ActionContext ctx;
  ctx.action = a;
  ctx.goal = goal_;
  ctx.tracker = &tracker_;
  RewardOutcome r = task_reward(task_, world_, out.world, out.events, ctx);

  world_ = std::move(out.world);
  tracker_ = std::move(r.tracker);

  StepResult result;
  result.info.success = tracker_.success;
  result.info.terminated = tracker_.success && terminates_on_success(task_.task_id);
  result.info.truncated =
      !result.info.terminated && tracker_.steps >= task_.episode_limit;
  result.info.components = std::move(r.components);
  result.info.events.paddle_puck_contacts = out.events.paddle_puck_contacts;
  result.info.events.puck_object_contacts =
      static_cast<int>(out.events.puck_object_contacts.size());
  result.info.events.wall_contacts = out.events.wall_contacts;
  result.info.achieved_goal = achieved_goal(task_, world_);
  result.reward = r.reward;
  result.done = result.info.terminated || result.info.truncated;
  result.observation = observation();
  done_ = result.done;
  return result;
}

}  // namespace airhockey::env
