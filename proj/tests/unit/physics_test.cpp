#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "airhockey/error.hpp"
#include "airhockey/physics/dynamics.hpp"
#include "airhockey/physics/serialize.hpp"
#include "airhockey/rng.hpp"
#include "support/oracles.hpp"

namespace airhockey::physics {
namespace {

using testing::disk;
using testing::head_on_oracle;
using testing::single_puck_world;

TEST(DiskCollision, ElasticEqualMassExchange) {
  // a sits above b and moves down into it.
  const BodyState a = disk({0.0, 0.05}, {0.0, -1.0}, 0.025, 1.0);
  const BodyState b = disk({0.0, 0.0}, {0.0, 0.0}, 0.025, 1.0);
  const auto [ra, rb] = resolve_disk_collision(a, b, 1.0);
  EXPECT_NEAR(ra.velocity.x, 0.0, 1e-12);
  EXPECT_NEAR(ra.velocity.y, 0.0, 1e-12);
  EXPECT_NEAR(rb.velocity.y, -1.0, 1e-12);
}

TEST(DiskCollision, HalfRestitutionMatchesImpulseFormula) {
  const BodyState a = disk({0.0, 0.05}, {0.0, -1.0}, 0.025, 1.0);
  const BodyState b = disk({0.0, 0.0}, {0.0, 0.0}, 0.025, 1.0);
  const auto [ra, rb] = resolve_disk_collision(a, b, 0.5);
  const auto [va, vb] = head_on_oracle(1.0, -1.0, 1.0, 0.0, 0.5);
  EXPECT_NEAR(ra.velocity.y, va, 1e-9);
  EXPECT_NEAR(rb.velocity.y, vb, 1e-9);
  EXPECT_NEAR(va, -0.25, 1e-15);
  EXPECT_NEAR(vb, -0.75, 1e-15);
  EXPECT_NEAR(ra.velocity.y + rb.velocity.y, -1.0, 1e-12);
  EXPECT_NEAR(ra.velocity.y - rb.velocity.y, 0.5, 1e-12);
}

TEST(DiskCollision, SeparatingContactIsNoOp) {
  // a above b moving away from it.
  const BodyState a = disk({0.0, 0.05}, {0.0, 1.0}, 0.025, 1.0);
  const BodyState b = disk({0.0, 0.0}, {0.0, 0.0}, 0.025, 1.0);
  const auto [ra, rb] = resolve_disk_collision(a, b, 0.9);
  EXPECT_EQ(ra, a);
  EXPECT_EQ(rb, b);
}

TEST(DiskCollision, BothStaticIsAnError) {
  PhysicsParams p;
  const BodyState a = make_paddle(p, {0.0, 0.0});
  BodyState b = make_paddle(p, {0.0, 0.09});
  b.velocity = {0.0, -1.0};
  try {
    resolve_disk_collision(a, b, 0.5);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "both bodies static");
  }
}

TEST(DiskCollision, OverlapRemovedByInverseMass) {
  const BodyState a = disk({0.0, 0.04}, {0.0, -1.0}, 0.025, 1.0);
  const BodyState b = disk({0.0, 0.0}, {0.0, 0.0}, 0.025, 3.0);
  const auto [ra, rb] = resolve_disk_collision(a, b, 0.5);
  EXPECT_NEAR(norm(ra.position - rb.position), 0.05, 1e-12);
  // Light body moves three times as far as the heavy one.
  EXPECT_NEAR(ra.position.y - 0.04, 3.0 * (0.0 - rb.position.y), 1e-12);
}

TEST(DiskCollision, TangentialFrictionScalesTangentOnly) {
  const BodyState a = disk({0.0, 0.05}, {0.4, -1.0}, 0.025, 1.0);
  const BodyState b = disk({0.0, 0.0}, {0.0, 0.0}, 0.025, 1.0);
  const auto [ra, rb] = resolve_disk_collision(a, b, 1.0, 0.25);
  EXPECT_NEAR(ra.velocity.x, 0.3, 1e-12);
  EXPECT_NEAR(ra.velocity.y, 0.0, 1e-12);
  EXPECT_NEAR(rb.velocity.y, -1.0, 1e-12);
}

// Random closing pairs: momentum along the normal, energy, Newton's rule.
TEST(DiskCollisionProperty, ConservationLaws) {
  Rng rng(1234);
  for (int trial = 0; trial < 2000; ++trial) {
    const double ra = rng.uniform(0.01, 0.06);
    const double rb = rng.uniform(0.01, 0.06);
    const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const Vec2 n{std::cos(angle), std::sin(angle)};
    const double gap = (ra + rb) * rng.uniform(0.9, 1.0);
    BodyState a = disk({rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2)},
                       {rng.uniform(-3, 3), rng.uniform(-3, 3)}, ra,
                       rng.uniform(0.01, 1.0));
    BodyState b = disk(a.position + gap * n, {rng.uniform(-3, 3), rng.uniform(-3, 3)},
                       rb, rng.uniform(0.01, 1.0));
    const double e = rng.uniform(0.0, 1.0);
    const double mu = rng.uniform(0.0, 1.0);
    const double vrel = dot(b.velocity - a.velocity, n);
    const auto [a2, b2] = resolve_disk_collision(a, b, e, mu);
    if (vrel >= 0.0) {
      EXPECT_EQ(a2, a);
      EXPECT_EQ(b2, b);
      continue;
    }
    const double p_before = a.mass * dot(a.velocity, n) + b.mass * dot(b.velocity, n);
    const double p_after = a2.mass * dot(a2.velocity, n) + b2.mass * dot(b2.velocity, n);
    EXPECT_LE(std::abs(p_after - p_before),
              1e-9 * std::max(1.0, std::abs(p_before)));

    const auto ke = [](const BodyState& x) {
      return 0.5 * x.mass * squared_norm(x.velocity);
    };
    EXPECT_LE(ke(a2) + ke(b2), ke(a) + ke(b) + 1e-9);

    const double vrel_after = dot(b2.velocity - a2.velocity, n);
    EXPECT_NEAR(vrel_after, -e * vrel, 1e-9);
  }
}

TEST(DiskCollisionProperty, KinematicPaddleRestitution) {
  PhysicsParams p;
  Rng rng(99);
  for (int trial = 0; trial < 500; ++trial) {
    BodyState paddle = make_paddle(p, {0.0, -0.6});
    paddle.velocity = {rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const Vec2 n{std::cos(angle), std::sin(angle)};
    BodyState puck = make_puck(p, paddle.position + (p.paddle_radius + p.puck_radius) * n,
                               {rng.uniform(-2, 2), rng.uniform(-2, 2)});
    const double vrel = dot(puck.velocity - paddle.velocity, n);
    const auto [pad2, puck2] = resolve_disk_collision(paddle, puck, 0.9);
    EXPECT_EQ(pad2.velocity, paddle.velocity);
    if (vrel < 0.0) {
      EXPECT_NEAR(dot(puck2.velocity - pad2.velocity, n), -0.9 * vrel, 1e-9);
    }
  }
}

TEST(WallContact, PerfectReflection) {
  TableBounds t;
  const BodyState b = disk({t.half_width - 0.03, 0.0}, {1.0, 0.0}, 0.03, 0.025);
  const BodyState r = resolve_wall_contact(b, t, 1.0);
  EXPECT_DOUBLE_EQ(r.velocity.x, -1.0);
  EXPECT_DOUBLE_EQ(r.velocity.y, 0.0);
}

TEST(WallContact, NormalScalingOnly) {
  TableBounds t;
  const BodyState b = disk({t.half_width - 0.03, 0.0}, {1.0, 2.0}, 0.03, 0.025);
  const BodyState r = resolve_wall_contact(b, t, 0.85);
  EXPECT_NEAR(r.velocity.x, -0.85, 1e-15);
  EXPECT_NEAR(r.velocity.y, 2.0, 1e-15);
}

TEST(WallContact, InteriorBodyUnchanged) {
  TableBounds t;
  const BodyState b = disk({0.1, 0.2}, {1.0, 2.0}, 0.03, 0.025);
  EXPECT_EQ(resolve_wall_contact(b, t, 0.85), b);
}

TEST(WallContact, PenetratingBodyIsClampedInside) {
  TableBounds t;
  const BodyState b = disk({t.half_width + 0.01, -t.half_length - 0.2},
                           {0.5, -0.5}, 0.03, 0.025);
  const BodyState r = resolve_wall_contact(b, t, 0.85);
  EXPECT_LE(r.position.x, t.half_width - 0.03);
  EXPECT_GE(r.position.y, -t.half_length + 0.03);
  EXPECT_LT(r.velocity.x, 0.0);
  EXPECT_GT(r.velocity.y, 0.0);
}

TEST(PaddleTrack, FixedPoint) {
  PhysicsParams p;
  const BodyState paddle = make_paddle(p, {0.0, -0.7});
  const BodyState r = paddle_track(paddle, paddle.position, p, 0.05);
  EXPECT_EQ(r.position, paddle.position);
  EXPECT_EQ(r.velocity, (Vec2{0.0, 0.0}));
}

TEST(PaddleTrack, SpeedClamp) {
  PhysicsParams p;
  const BodyState paddle = make_paddle(p, {0.0, -0.7});
  const BodyState r = paddle_track(paddle, {0.0, 0.3}, p, 0.05);
  const double expected = p.paddle_max_speed * 0.05;
  EXPECT_NEAR(norm(r.position - paddle.position), expected, 1e-15);
  EXPECT_NEAR(norm(r.velocity), p.paddle_max_speed, 1e-12);
}

TEST(PaddleTrack, RegionClamp) {
  PhysicsParams p;
  BodyState paddle = make_paddle(p, {0.0, p.table.paddle_region_y_max - 0.01});
  for (int i = 0; i < 20; ++i) paddle = paddle_track(paddle, {0.0, 0.8}, p, 0.05);
  EXPECT_LE(paddle.position.y, p.table.paddle_region_y_max);
}

TEST(PaddleTrack, InvalidTarget) {
  PhysicsParams p;
  const BodyState paddle = make_paddle(p, {0.0, -0.7});
  EXPECT_THROW(paddle_track(paddle, {std::nan(""), 0.0}, p, 0.05), Error);
  EXPECT_THROW(step_world({}, {0.0, INFINITY}, p), Error);
}

TEST(StepWorld, ForceFreeKeepsVelocity) {
  PhysicsParams p;
  p.tilt_deg = 0.0;
  p.puck_damping = 0.0;
  WorldState w = single_puck_world(p, {0.1, 0.0}, {0.05, 0.1});
  for (int i = 0; i < 20; ++i) w = step_world(w, w.paddle.position, p).world;
  EXPECT_EQ(w.puck.velocity, (Vec2{0.05, 0.1}));
  EXPECT_EQ(w.tick, 20);
}

TEST(StepWorld, SlopeVelocityAfterOneSecond) {
  PhysicsParams p;
  p.puck_damping = 0.0;
  const double expected = -9.81 * std::sin(5.5 * std::numbers::pi / 180.0);
  EXPECT_NEAR(expected, -0.9402468, 1e-7);
  WorldState w = single_puck_world(p, {0.2, 0.7}, {0.0, 0.0});
  for (int i = 0; i < 20; ++i) w = step_world(w, w.paddle.position, p).world;
  EXPECT_NEAR(w.puck.velocity.y, expected, 1e-6);
  EXPECT_DOUBLE_EQ(w.puck.velocity.x, 0.0);
}

TEST(StepWorld, DampedSlideMatchesClosedForm) {
  PhysicsParams p;
  const double a = -9.81 * std::sin(5.5 * std::numbers::pi / 180.0);
  const double c = 0.12;
  const double y0 = -0.5;
  const double v0 = 1.5;
  // y(t) for y'' = a - c y'.
  const auto y_at = [&](double t) {
    const double vt = a / c;
    return y0 + vt * t + (v0 - vt) * (1.0 - std::exp(-c * t)) / c;
  };
  WorldState w = single_puck_world(p, {0.2, y0}, {0.0, v0});
  double max_err = 0.0;
  for (int i = 1; i <= 40; ++i) {
    w = step_world(w, w.paddle.position, p).world;
    max_err = std::max(max_err, std::abs(w.puck.position.y - y_at(0.05 * i)));
  }
  EXPECT_LE(max_err, 1e-4);
  EXPECT_EQ(w.puck.position.x, 0.2);
}

TEST(StepWorld, Deterministic) {
  PhysicsParams p;
  WorldState w = single_puck_world(p, {0.01, 0.3}, {0.1, -1.0});
  w.objects.push_back(make_block(p, {0.05, 0.0}));
  WorldState a = w;
  WorldState b = w;
  for (int i = 0; i < 60; ++i) {
    const Vec2 target{0.1 * std::sin(0.3 * i), -0.6};
    a = step_world(a, target, p).world;
    b = step_world(b, target, p).world;
  }
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
}

TEST(StepWorld, ReportsPaddlePuckContact) {
  PhysicsParams p;
  WorldState w = single_puck_world(p, {0.0, -0.55}, {0.0, -1.0});
  int contacts = 0;
  for (int i = 0; i < 10; ++i) {
    const StepOutput out = step_world(w, w.paddle.position, p);
    contacts += out.events.paddle_puck_contacts;
    w = out.world;
  }
  EXPECT_GE(contacts, 1);
  EXPECT_GT(w.puck.velocity.y, 0.0);
}

TEST(StepWorld, NamesDivergentBody) {
  PhysicsParams p;
  WorldState w = single_puck_world(p, {0.0, 0.0}, {std::nan(""), 0.0});
  try {
    step_world(w, w.paddle.position, p);
    FAIL() << "expected divergence";
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "numerical divergence in puck");
  }
}

TEST(StepWorld, InactivePuckStaysPut) {
  PhysicsParams p;
  WorldState w = single_puck_world(p, {0.0, 0.7}, {0.0, 0.0});
  w.puck.active = false;
  for (int i = 0; i < 50; ++i) w = step_world(w, {0.0, -0.5}, p).world;
  EXPECT_EQ(w.puck.position, (Vec2{0.0, 0.7}));
}

// Random busy worlds with an erratic paddle: containment, no interpenetration,
// tick increments, paddle stays in its region.
TEST(StepWorldProperty, ContainmentAndSeparation) {
  PhysicsParams p;
  Rng rng(7);
  const Region region = paddle_region(p.table, p.paddle_radius);
  for (int episode = 0; episode < 20; ++episode) {
    WorldState w;
    w.paddle = make_paddle(p, {rng.uniform(-0.2, 0.2), -0.7});
    w.puck = make_puck(p, {rng.uniform(-0.2, 0.2), rng.uniform(0.0, 0.6)},
                       {rng.uniform(-3, 3), rng.uniform(-3, 3)});
    for (int k = 0; k < 4; ++k) {
      w.objects.push_back(make_block(p, {-0.2 + 0.13 * k, 0.3 + 0.1 * (k % 2)}));
    }
    for (int step = 0; step < 200; ++step) {
      const Vec2 target{rng.uniform(-0.4, 0.4), rng.uniform(-0.9, 0.0)};
      const std::int64_t tick = w.tick;
      w = step_world(w, target, p).world;
      ASSERT_EQ(w.tick, tick + 1);

      std::vector<const BodyState*> bodies = {&w.paddle, &w.puck};
      for (const auto& o : w.objects) bodies.push_back(&o);
      for (const BodyState* b : bodies) {
        EXPECT_LE(std::abs(b->position.x), p.table.half_width - b->radius + 1e-6);
        EXPECT_LE(std::abs(b->position.y), p.table.half_length - b->radius + 1e-6);
      }
      EXPECT_LE(w.paddle.position.y, region.y_max + 1e-12);
      for (std::size_t i = 0; i < bodies.size(); ++i) {
        for (std::size_t j = i + 1; j < bodies.size(); ++j) {
          const double gap = norm(bodies[i]->position - bodies[j]->position) -
                             bodies[i]->radius - bodies[j]->radius;
          EXPECT_GE(gap, -1e-6) << "bodies " << i << "," << j << " step " << step;
        }
      }
    }
  }
}

TEST(Serialize, WorldRoundTripAndKeyOrder) {
  PhysicsParams p;
  WorldState w = single_puck_world(p, {0.1 / 3.0, -0.2}, {1e-17, 2.0 / 3.0});
  w.objects.push_back(make_block(p, {0.3 / 7.0, 0.4}));
  w.tick = 17;
  w.rng_state = 0xfedcba9876543210ULL;
  const Json j = to_json(w);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"tick", "paddle", "puck", "objects", "rng_state"}));
  const WorldState back = world_from_json(Json::parse(j.dump()));
  EXPECT_EQ(back, w);
}

TEST(Serialize, PartialPhysicsOverrides) {
  const PhysicsParams p = physics_from_json(Json{{"puck_mass", 0.05}}, {});
  EXPECT_EQ(p.puck_mass, 0.05);
  EXPECT_EQ(p.substeps, 10);
  EXPECT_THROW(physics_from_json(Json{{"substeps", 0}}, {}), Error);
  EXPECT_THROW(physics_from_json(Json{{"restitution_wall", 1.5}}, {}), Error);
}

TEST(Geometry, DefaultsFromInches) {
  PhysicsParams p;
  EXPECT_NEAR(p.table.half_width, 0.3048, 1e-15);
  EXPECT_NEAR(p.table.half_length, 0.8382, 1e-15);
  EXPECT_NEAR(p.paddle_radius, 0.047625, 1e-15);
  EXPECT_NEAR(p.puck_radius, 0.03175, 1e-15);
  EXPECT_NEAR(p.table.paddle_region_y_max, -0.4382, 1e-12);
}

}  // namespace
}  // namespace airhockey::physics
