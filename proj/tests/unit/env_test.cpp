#include <algorithm>
#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "airhockey/env/env.hpp"
#include "airhockey/error.hpp"
#include "airhockey/rng.hpp"

namespace airhockey::env {
namespace {

using physics::PhysicsParams;
using physics::WorldState;

Env default_env(TaskId id, std::uint64_t seed = 0) {
  return make_task(id, EnvConfig{}, seed);
}

Action random_action(Rng& rng) {
  return {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
}

// Scripted policy that chases the puck; produces plenty of contacts.
Action chase(const Env& env) {
  const auto& w = env.world();
  const physics::Vec2 d = w.puck.position - w.paddle.position;
  return clamp_action({d.x / 0.1, d.y / 0.1});
}

TEST(MakeTask, SameSeedSameFirstObservation) {
  Env a = default_env(TaskId::kReach, 0);
  Env b = default_env(TaskId::kReach, 0);
  EXPECT_EQ(a.reset(), b.reset());
  Env c = default_env(TaskId::kReach, 1);
  EXPECT_NE(a.reset(), c.reset());
}

TEST(MakeTask, StrikeCrowdHasSixBlocks) {
  Env env = default_env(TaskId::kStrikeCrowd, 3);
  env.reset();
  EXPECT_EQ(env.task().n_blocks, 6);
  EXPECT_EQ(env.world().objects.size(), 6u);
}

TEST(MakeTask, EpisodeLimitPassthrough) {
  EnvConfig config;
  config.task_overrides = Json{{"episode_limit", 400}};
  Env env = make_task(TaskId::kJuggle, config, 7);
  EXPECT_EQ(env.task().episode_limit, 400);
  config.task_overrides = Json{{"episode_limit", 123}};
  EXPECT_EQ(make_task(TaskId::kTouch, config, 7).task().episode_limit, 123);
}

TEST(MakeTask, UnknownTaskListsValidIds) {
  try {
    parse_task_id("Dribble");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    const std::string msg = e.what();
    for (TaskId id : kAllTasks) {
      EXPECT_NE(msg.find(to_string(id)), std::string::npos) << msg;
    }
  }
}

TEST(MakeTask, RejectsInvalidOverrides) {
  EnvConfig config;
  config.task_overrides = Json{{"goal_conditioned", true}};
  EXPECT_THROW(make_task(TaskId::kTouch, config, 0), Error);
  config.task_overrides = Json{{"eps_position", 0.0}};
  EXPECT_THROW(make_task(TaskId::kReach, config, 0), Error);
}

TEST(Reset, ReachGoalInsideNormalizedBounds) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Env env = default_env(TaskId::kReach, seed);
    const Observation obs = env.reset();
    ASSERT_EQ(obs.size(), 10u);
    EXPECT_LE(std::abs(obs[kGoalObsOffset]), 1.0);
    EXPECT_LE(std::abs(obs[kGoalObsOffset + 1]), 1.0);
  }
}

TEST(Reset, PaddleAtHome) {
  for (TaskId id : kAllTasks) {
    Env env = default_env(id, 5);
    env.reset();
    EXPECT_EQ(env.world().paddle.position, Env::kPaddleHome);
    EXPECT_EQ(env.world().paddle.velocity, (physics::Vec2{0.0, 0.0}));
  }
}

TEST(Reset, PuckVelocityDropsTowardPaddle) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Env env = default_env(TaskId::kPuckVelocity, seed);
    env.reset();
    EXPECT_LT(env.world().puck.velocity.y, 0.0);
  }
}

TEST(Reset, StrikePuckStationary) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Env env = default_env(TaskId::kStrike, seed);
    env.reset();
    EXPECT_EQ(physics::norm(env.world().puck.velocity), 0.0);
  }
}

TEST(Reset, GoalSampleInvariants) {
  for (TaskId id : {TaskId::kReachVelocity, TaskId::kHitGoal, TaskId::kHitGoalVelocity}) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      Env env = default_env(id, seed);
      env.reset();
      const Goal g = *env.goal();
      const TaskSpec& s = env.task();
      EXPECT_LE(physics::norm(g.velocity), 2.0 * s.goal_speed + 1e-12);
      if (uses_puck(id)) {
        EXPECT_GE(g.position.y, s.goal_radius);
        EXPECT_LE(std::abs(g.position.x), env.physics().table.half_width - s.goal_radius);
      } else {
        EXPECT_LE(g.position.y, env.physics().table.paddle_region_y_max);
      }
    }
  }
}

TEST(Step, FinishedEpisodeRequiresReset) {
  EnvConfig config;
  config.task_overrides = Json{{"episode_limit", 3}};
  Env env = make_task(TaskId::kTouch, config, 0);
  EXPECT_THROW(env.step({0.0, 0.0}), Error);
  env.reset();
  StepResult r;
  for (int i = 0; i < 3; ++i) r = env.step({0.0, 0.0});
  EXPECT_TRUE(r.done);
  EXPECT_TRUE(r.info.truncated);
  try {
    env.step({0.0, 0.0});
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "episode done; reset required");
  }
}

TEST(Step, RepeatedActionHasNoRegularization) {
  Env env = default_env(TaskId::kTouch, 2);
  env.reset();
  env.step({0.3, -0.2});
  const StepResult r = env.step({0.3, -0.2});
  EXPECT_EQ(*r.info.components.find("regularization"), 0.0);
  const StepResult r2 = env.step({-0.7, 0.4});
  EXPECT_NEAR(*r2.info.components.find("regularization"),
              -0.1 * (1.0 * 1.0 + 0.6 * 0.6), 1e-12);
}

TEST(Step, ReachAtGoalSucceedsAndTerminates) {
  Env env = default_env(TaskId::kReach, 0);
  env.reset();
  WorldState w = env.world();
  const Goal goal{Env::kPaddleHome + physics::Vec2{0.01, 0.0}, {}};
  env.restore(w, goal);
  const StepResult r = env.step({0.0, 0.0});
  EXPECT_TRUE(r.info.success);
  EXPECT_TRUE(r.done);
  EXPECT_TRUE(r.info.terminated);
  EXPECT_EQ(*r.info.components.find("success_bonus"), 1.0);
  EXPECT_NEAR(*r.info.components.find("goal_distance"), -0.1 * 0.01, 1e-12);
}

TEST(Step, NanActionRejected) {
  Env env = default_env(TaskId::kReach, 0);
  env.reset();
  EXPECT_THROW(env.step({std::nan(""), 0.0}), Error);
}

TEST(Step, ActionsAreClamped) {
  Env a = default_env(TaskId::kTouch, 4);
  Env b = default_env(TaskId::kTouch, 4);
  a.reset();
  b.reset();
  const StepResult ra = a.step({5.0, -9.0});
  const StepResult rb = b.step({1.0, -1.0});
  EXPECT_EQ(ra.observation, rb.observation);
  EXPECT_EQ(ra.reward, rb.reward);
}

TEST(Observe, OriginAndNormalization) {
  TaskSpec spec = default_task_spec(TaskId::kTouch);
  PhysicsParams p;
  WorldState w;
  w.paddle = physics::make_paddle(p, {0.0, 0.0});
  w.puck = physics::make_puck(p, {0.0, 0.0});
  Observation obs = observe(spec, w, std::nullopt, p.table);
  ASSERT_EQ(obs.size(), 8u);
  for (double v : obs) EXPECT_EQ(v, 0.0);
  w.paddle.position = {0.3048, 0.0};
  obs = observe(spec, w, std::nullopt, p.table);
  EXPECT_NEAR(obs[0], 1.0, 1e-15);
}

TEST(Observe, LayoutDimensions) {
  EXPECT_EQ(observation_dim(default_task_spec(TaskId::kReach)), 10);
  EXPECT_EQ(observation_dim(default_task_spec(TaskId::kReachVelocity)), 12);
  const TaskSpec crowd = default_task_spec(TaskId::kStrikeCrowd);
  EXPECT_EQ(observation_dim(crowd), 8 + 2 * crowd.n_blocks);
  for (TaskId id : kAllTasks) {
    const TaskSpec s = default_task_spec(id);
    EXPECT_EQ(observation_layout(s).size(), static_cast<std::size_t>(observation_dim(s)));
    Env env = default_env(id, 1);
    EXPECT_EQ(env.reset().size(), static_cast<std::size_t>(observation_dim(s)));
  }
}

TEST(TaskReward, HitGoalVelocityPerfectEntry) {
  const TaskSpec spec = default_task_spec(TaskId::kHitGoalVelocity);
  const std::vector<double> desired = {0.1, 0.5, 0.3, 0.4};
  const std::vector<double> prev = {0.1, 0.2, 0.3, 0.4};
  const GoalOutcome g = goal_reward(spec, prev, desired, desired);
  EXPECT_EQ(*g.components.find("goal_distance"), 0.0);
  EXPECT_EQ(*g.components.find("goal_cosine"), spec.reward_weights.goal_cosine * 1.0);
  EXPECT_EQ(*g.components.find("goal_speed"), 0.0);
  EXPECT_TRUE(g.success);
}

TEST(TaskReward, HitGoalVelocityOnlyPaysOnEntry) {
  const TaskSpec spec = default_task_spec(TaskId::kHitGoalVelocity);
  const std::vector<double> desired = {0.1, 0.5, 0.3, 0.4};
  const std::vector<double> inside = {0.12, 0.5, -0.3, 0.4};
  const GoalOutcome g = goal_reward(spec, inside, inside, desired);
  EXPECT_EQ(g.components.total(), 0.0);
  EXPECT_FALSE(g.success);  // wrong direction
}

TEST(TaskReward, StrikeCrowdUnmovedBlocksGiveZeroSpread) {
  Env env = default_env(TaskId::kStrikeCrowd, 11);
  env.reset();
  const StepResult r = env.step({0.0, 0.0});
  EXPECT_EQ(*r.info.components.find("spread"), 0.0);
}

// Feeds a contact pattern through task_reward directly.
EpisodeTracker run_contacts(const TaskSpec& spec, const std::vector<int>& pattern,
                            double* total_touch) {
  PhysicsParams p;
  WorldState w;
  w.paddle = physics::make_paddle(p, {0.0, -0.7});
  w.puck = physics::make_puck(p, {0.0, -0.62});
  EpisodeTracker t = start_episode(spec, w);
  *total_touch = 0.0;
  for (int c : pattern) {
    physics::StepEvents ev;
    ev.paddle_puck_contacts = c;
    ActionContext ctx;
    ctx.tracker = &t;
    RewardOutcome r = task_reward(spec, w, w, ev, ctx);
    *total_touch += *r.components.find("touch");
    t = r.tracker;
  }
  return t;
}

TEST(TaskReward, TouchCountsSeparatedContacts) {
  const TaskSpec spec = default_task_spec(TaskId::kTouch);
  double total = 0.0;
  const EpisodeTracker t = run_contacts(spec, {1, 0, 0, 1, 0}, &total);
  EXPECT_EQ(total, 2.0);
  EXPECT_EQ(t.touches, 2);
  EXPECT_TRUE(task_success(spec, t));
}

TEST(TaskReward, TouchDebouncesRestingContact) {
  const TaskSpec spec = default_task_spec(TaskId::kTouch);
  double total = 0.0;
  run_contacts(spec, std::vector<int>(9, 1), &total);
  EXPECT_EQ(total, 1.0);
  // Contact held for 12 steps counts again once the window has passed.
  run_contacts(spec, std::vector<int>(12, 1), &total);
  EXPECT_EQ(total, 2.0);
}

TEST(TaskSuccess, JuggleNeedsFourHits) {
  const TaskSpec spec = default_task_spec(TaskId::kJuggle);
  EpisodeTracker t;
  t.juggle_hits = 3;
  EXPECT_FALSE(task_success(spec, t));
  t.juggle_hits = 4;
  EXPECT_TRUE(task_success(spec, t));
}

TEST(TaskSuccess, TouchWithOneContact) {
  const TaskSpec spec = default_task_spec(TaskId::kTouch);
  double total = 0.0;
  EXPECT_TRUE(task_success(spec, run_contacts(spec, {1}, &total)));
}

TEST(TaskSuccess, EmptyEpisodeIsFalse) {
  for (TaskId id : kAllTasks) {
    EXPECT_FALSE(task_success(default_task_spec(id), EpisodeTracker{})) << to_string(id);
  }
}

TEST(TaskReward, JuggleQualifiesOnRise) {
  const TaskSpec spec = default_task_spec(TaskId::kJuggle);
  PhysicsParams p;
  WorldState w;
  w.paddle = physics::make_paddle(p, {0.0, -0.7});
  w.puck = physics::make_puck(p, {0.0, -0.6});
  EpisodeTracker t = start_episode(spec, w);
  const auto step = [&](double puck_y, int contacts) {
    WorldState next = w;
    next.puck.position.y = puck_y;
    physics::StepEvents ev;
    ev.paddle_puck_contacts = contacts;
    ActionContext ctx;
    ctx.tracker = &t;
    RewardOutcome r = task_reward(spec, w, next, ev, ctx);
    t = r.tracker;
    w = next;
    return *r.components.find("juggle");
  };
  EXPECT_EQ(step(-0.6, 1), 0.0);
  EXPECT_EQ(step(-0.45, 0), 0.0);
  EXPECT_EQ(step(-0.29, 0), 1.0);
  EXPECT_EQ(step(-0.1, 0), 0.0);  // already counted
  EXPECT_EQ(t.juggle_hits, 1);
  // A second contact before the rise cancels the pending hit.
  step(-0.6, 1);
  step(-0.5, 1);
  EXPECT_EQ(step(-0.25, 0), 0.0);
  EXPECT_EQ(step(-0.15, 0), 1.0);
  EXPECT_EQ(t.juggle_hits, 2);
}

// Rolls every task with random and chasing actions and checks the
// episode-level invariants.
TEST(EnvProperty, RolloutInvariants) {
  const PhysicsParams p;
  const double diag = 2.0 * std::hypot(p.table.half_width, p.table.half_length);
  for (TaskId id : kAllTasks) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
      Env env = default_env(id, seed);
      Rng rng(seed + 100);
      env.reset();
      bool was_success = false;
      for (int t = 0; t < env.task().episode_limit; ++t) {
        const Action a = seed % 2 == 0 ? random_action(rng) : chase(env);
        const StepResult r = env.step(a);
        ASSERT_TRUE(std::isfinite(r.reward));
        EXPECT_NEAR(r.reward, r.info.components.total(), 1e-12);
        if (was_success) EXPECT_TRUE(r.info.success) << to_string(id);
        was_success = r.info.success;

        const TaskSpec& s = env.task();
        const RewardWeights& w = s.reward_weights;
        for (const auto& [name, value] : r.info.components.items()) {
          if (name == "regularization") EXPECT_GE(value, -8.0 * s.reg_lambda);
          if (name == "puck_distance") EXPECT_GE(value, -w.puck_distance * diag);
          if (name == "goal_distance" && id != TaskId::kHitGoalVelocity) {
            EXPECT_GE(value, -w.reach_distance * diag);
          }
        }
        for (std::size_t i = 0; i < r.observation.size(); ++i) {
          EXPECT_TRUE(std::isfinite(r.observation[i]));
        }
        const auto layout = observation_layout(env.task());
        for (std::size_t i = 0; i < layout.size(); ++i) {
          const std::string& name = layout[i];
          if (name.ends_with("_x") || name.ends_with("_y")) {
            EXPECT_LE(std::abs(r.observation[i]), 1.0 + 1e-9) << name;
          }
        }
        EXPECT_EQ(r.info.achieved_goal.size(), static_cast<std::size_t>(goal_dim(id)));
        EXPECT_EQ(r.done, r.info.terminated || r.info.truncated);
        if (r.done) break;
      }
    }
  }
}

TEST(EnvProperty, EpisodeDeterminism) {
  for (TaskId id : kAllTasks) {
    Env a = default_env(id, 42);
    Env b = default_env(id, 42);
    ASSERT_EQ(a.reset(), b.reset());
    Rng rng(5);
    for (int t = 0; t < 100; ++t) {
      const Action act = random_action(rng);
      const StepResult ra = a.step(act);
      const StepResult rb = b.step(act);
      ASSERT_EQ(ra.observation, rb.observation);
      ASSERT_EQ(ra.reward, rb.reward);
      ASSERT_EQ(ra.done, rb.done);
      if (ra.done) break;
    }
  }
}

TEST(EnvProperty, RestoreReproducesReset) {
  for (TaskId id : kAllTasks) {
    Env a = default_env(id, 9);
    const Observation first = a.reset();
    const WorldState initial = a.world();
    const auto goal = a.goal();
    Rng rng(3);
    std::vector<Action> actions;
    std::vector<double> rewards;
    for (int t = 0; t < 60; ++t) {
      actions.push_back(random_action(rng));
      const StepResult r = a.step(actions.back());
      rewards.push_back(r.reward);
      if (r.done) break;
    }
    Env b = default_env(id, 12345);
    EXPECT_EQ(b.restore(initial, goal), first);
    for (std::size_t t = 0; t < actions.size(); ++t) {
      EXPECT_EQ(b.step(actions[t]).reward, rewards[t]);
    }
  }
}

TEST(EnvProperty, RegularizationArgmin) {
  Env env = default_env(TaskId::kReach, 0);
  env.reset();
  const WorldState w = env.world();
  const Goal goal{{0.25, -0.5}, {}};
  for (const Action a : {Action{0.0, 0.0}, Action{0.4, 0.4}, Action{-1.0, 1.0}}) {
    env.restore(w, goal);
    double penalty = 0.0;
    for (int t = 0; t < 30 && !env.done(); ++t) {
      penalty += *env.step(a).info.components.find("regularization");
    }
    EXPECT_EQ(penalty, 0.0);
  }
  Rng rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    env.restore(w, goal);
    double penalty = 0.0;
    for (int t = 0; t < 30 && !env.done(); ++t) {
      penalty += *env.step(random_action(rng)).info.components.find("regularization");
    }
    EXPECT_LT(penalty, 0.0);
  }
}

TEST(EnvProperty, AchievedGoalSatisfiesSuccess) {
  for (TaskId id : {TaskId::kReach, TaskId::kHitGoal}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Env env = default_env(id, seed);
      env.reset();
      Rng rng(seed);
      StepResult r;
      std::vector<double> prev = achieved_goal(env.task(), env.world());
      std::vector<double> last_prev = prev;
      do {
        last_prev = prev;
        r = env.step(seed % 2 ? random_action(rng) : chase(env));
        prev = r.info.achieved_goal;
      } while (!r.done);
      const auto& achieved = r.info.achieved_goal;
      EXPECT_TRUE(goal_reward(env.task(), last_prev, achieved, achieved).success);
    }
  }
}

TEST(Catalog, ListsAllTasks) {
  const Json c = task_catalog();
  ASSERT_EQ(c["tasks"].size(), 10u);
  EXPECT_EQ(c["tasks"][4]["id"], "StrikeCrowd");
  EXPECT_EQ(c["tasks"][4]["observation_dim"], 20);
  for (const auto& t : c["tasks"]) {
    const auto& comps = t["reward_components"];
    EXPECT_EQ(comps.back(), "regularization") << t["id"];
  }
}

}  // namespace
}  // namespace airhockey::env
