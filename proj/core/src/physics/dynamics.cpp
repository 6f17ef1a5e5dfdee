#include "airhockey/physics/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "airhockey/error.hpp"

namespace airhockey::physics {
namespace {

// Unit normal from a to b; coincident centers fall back to +y so the result
// stays deterministic.
Vec2 contact_normal(const BodyState& a, const BodyState& b, double* distance) {
  const Vec2 d = b.position - a.position;
  const double len = norm(d);
  *distance = len;
  if (len <= 0.0) return {0.0, 1.0};
  return d / len;
}

void push_apart(BodyState& a, BodyState& b, Vec2 n, double overlap) {
  const double inv_a = a.inverse_mass();
  const double inv_b = b.inverse_mass();
  const double inv_sum = inv_a + inv_b;
  if (overlap <= 0.0 || inv_sum <= 0.0) return;
  a.position -= (overlap * inv_a / inv_sum) * n;
  b.position += (overlap * inv_b / inv_sum) * n;
}

void damp_tangential(BodyState& body, Vec2 n, double tangential_friction) {
  if (tangential_friction == 0.0 || body.inverse_mass() == 0.0) return;
  const double vn = dot(body.velocity, n);
  const Vec2 vt = body.velocity - vn * n;
  body.velocity = vn * n + (1.0 - tangential_friction) * vt;
}

// Free flight under constant slope acceleration and linear damping, solved in
// closed form so the integration error does not grow with the step size.
void integrate_free(BodyState& body, Vec2 accel, double damping, double h) {
  if (damping > 0.0) {
    const double k = std::exp(-damping * h);
    const Vec2 terminal = accel / damping;
    const Vec2 excess = body.velocity - terminal;
    body.position += h * terminal + ((1.0 - k) / damping) * excess;
    body.velocity = terminal + k * excess;
  } else {
    body.position += h * body.velocity + (0.5 * h * h) * accel;
    body.velocity += h * accel;
  }
}

void clamp_inside(BodyState& body, const TableBounds& t) {
  const double xm = t.half_width - body.radius;
  const double ym = t.half_length - body.radius;
  body.position.x = std::clamp(body.position.x, -xm, xm);
  body.position.y = std::clamp(body.position.y, -ym, ym);
}

void clamp_to_region(BodyState& paddle, const TableBounds& t) {
  const Region r = paddle_region(t, paddle.radius);
  paddle.position.x = std::clamp(paddle.position.x, r.x_min, r.x_max);
  paddle.position.y = std::clamp(paddle.position.y, r.y_min, r.y_max);
}

bool finite_body(const BodyState& body) {
  return is_finite(body.position) && is_finite(body.velocity);
}

void check_finite(const WorldState& w) {
  if (!finite_body(w.paddle)) throw Error("numerical divergence in paddle");
  if (!finite_body(w.puck)) throw Error("numerical divergence in puck");
  for (std::size_t i = 0; i < w.objects.size(); ++i) {
    if (!finite_body(w.objects[i])) {
      throw Error("numerical divergence in object " + std::to_string(i));
    }
  }
}

class SubstepSolver {
 public:
  SubstepSolver(WorldState& world, StepEvents& events,
                const PhysicsParams& params)
      : w_(world), ev_(events), p_(params) {}

  void collide() {
    if (pair(w_.paddle, w_.puck, p_.restitution_paddle_puck)) {
      ++ev_.paddle_puck_contacts;
    }
    for (auto& obj : w_.objects) {
      if (pair(w_.paddle, obj, p_.restitution_puck_object)) {
        ++ev_.paddle_object_contacts;
      }
    }
    for (std::size_t i = 0; i < w_.objects.size(); ++i) {
      if (pair(w_.puck, w_.objects[i], p_.restitution_puck_object)) {
        ev_.puck_object_contacts.push_back(static_cast<int>(i));
      }
    }
    for (std::size_t i = 0; i < w_.objects.size(); ++i) {
      for (std::size_t j = i + 1; j < w_.objects.size(); ++j) {
        pair(w_.objects[i], w_.objects[j], p_.restitution_puck_object);
      }
    }
    wall(w_.puck);
    for (auto& obj : w_.objects) wall(obj);
  }

  // Removes residual overlap left by the single impulse pass.
  void project() {
    constexpr int kPasses = 4;
    for (int pass = 0; pass < kPasses; ++pass) {
      bool moved = false;
      auto fix = [&](BodyState& a, BodyState& b) {
        if (!a.active || !b.active) return;
        double dist = 0.0;
        const Vec2 n = contact_normal(a, b, &dist);
        const double overlap = a.radius + b.radius - dist;
        if (overlap > 0.0) {
          push_apart(a, b, n, overlap);
          moved = true;
        }
      };
      fix(w_.paddle, w_.puck);
      for (auto& obj : w_.objects) fix(w_.paddle, obj);
      for (auto& obj : w_.objects) fix(w_.puck, obj);
      for (std::size_t i = 0; i < w_.objects.size(); ++i) {
        for (std::size_t j = i + 1; j < w_.objects.size(); ++j) {
          fix(w_.objects[i], w_.objects[j]);
        }
      }
      if (!moved) break;
      if (w_.puck.active) clamp_inside(w_.puck, p_.table);
      for (auto& obj : w_.objects) {
        if (obj.active) clamp_inside(obj, p_.table);
      }
    }
    // A body pinned against a wall cannot move further, so the kinematic
    // paddle gives way.
    auto yield = [&](const BodyState& body) {
      if (!body.active) return;
      double dist = 0.0;
      const Vec2 n = contact_normal(w_.paddle, body, &dist);
      const double overlap = w_.paddle.radius + body.radius - dist;
      if (overlap > kContactTolerance * 0.5) {
        w_.paddle.position -= overlap * n;
        clamp_to_region(w_.paddle, p_.table);
      }
    };
    yield(w_.puck);
    for (const auto& obj : w_.objects) yield(obj);
  }

 private:
  // Returns true when an impulse was applied.
  bool pair(BodyState& a, BodyState& b, double restitution) {
    if (!a.active || !b.active) return false;
    double dist = 0.0;
    const Vec2 n = contact_normal(a, b, &dist);
    if (dist > a.radius + b.radius) return false;
    const double closing = -dot(b.velocity - a.velocity, n);
    if (closing > 0.0) {
      auto [ra, rb] =
          resolve_disk_collision(a, b, restitution, p_.tangential_friction);
      a = ra;
      b = rb;
      ev_.contact_points.push_back(
          {a.position + (a.radius / (a.radius + b.radius)) * (b.position - a.position),
           closing});
      return true;
    }
    auto [sa, sb] = separate_disks(a, b);
    a = sa;
    b = sb;
    return false;
  }

  void wall(BodyState& body) {
    if (!body.active) return;
    const WallContact c = resolve_wall_contact_counted(
        body, p_.table, p_.restitution_wall, p_.tangential_friction);
    body = c.body;
    ev_.wall_contacts += c.walls_struck;
  }

  WorldState& w_;
  StepEvents& ev_;
  const PhysicsParams& p_;
};

}  // namespace

std::pair<BodyState, BodyState> resolve_disk_collision(
    const BodyState& a, const BodyState& b, double restitution,
    double tangential_friction) {
  const double inv_a = a.inverse_mass();
  const double inv_b = b.inverse_mass();
  if (inv_a + inv_b <= 0.0) throw Error("both bodies static");

  double dist = 0.0;
  const Vec2 n = contact_normal(a, b, &dist);
  const double v_rel = dot(b.velocity - a.velocity, n);
  if (!(v_rel < 0.0)) return {a, b};

  BodyState ra = a;
  BodyState rb = b;
  const double j = -(1.0 + restitution) * v_rel / (inv_a + inv_b);
  ra.velocity -= (j * inv_a) * n;
  rb.velocity += (j * inv_b) * n;
  damp_tangential(ra, n, tangential_friction);
  damp_tangential(rb, n, tangential_friction);
  push_apart(ra, rb, n, a.radius + b.radius - dist);
  return {ra, rb};
}

std::pair<BodyState, BodyState> separate_disks(const BodyState& a,
                                               const BodyState& b) {
  BodyState ra = a;
  BodyState rb = b;
  double dist = 0.0;
  const Vec2 n = contact_normal(a, b, &dist);
  push_apart(ra, rb, n, a.radius + b.radius - dist);
  return {ra, rb};
}

WallContact resolve_wall_contact_counted(const BodyState& body,
                                         const TableBounds& bounds,
                                         double restitution,
                                         double tangential_friction) {
  WallContact out{body, 0};
  BodyState& b = out.body;
  const double keep_t = 1.0 - tangential_friction;
  const double xm = bounds.half_width - body.radius;
  const double ym = bounds.half_length - body.radius;

  if (b.position.x >= xm && b.velocity.x > 0.0) {
    b.velocity.x = -restitution * b.velocity.x;
    b.velocity.y *= keep_t;
    ++out.walls_struck;
  } else if (b.position.x <= -xm && b.velocity.x < 0.0) {
    b.velocity.x = -restitution * b.velocity.x;
    b.velocity.y *= keep_t;
    ++out.walls_struck;
  }
  if (b.position.y >= ym && b.velocity.y > 0.0) {
    b.velocity.y = -restitution * b.velocity.y;
    b.velocity.x *= keep_t;
    ++out.walls_struck;
  } else if (b.position.y <= -ym && b.velocity.y < 0.0) {
    b.velocity.y = -restitution * b.velocity.y;
    b.velocity.x *= keep_t;
    ++out.walls_struck;
  }
  clamp_inside(b, bounds);
  return out;
}

BodyState resolve_wall_contact(const BodyState& body, const TableBounds& bounds,
                               double restitution, double tangential_friction) {
  return resolve_wall_contact_counted(body, bounds, restitution,
                                      tangential_friction)
      .body;
}

BodyState paddle_track(const BodyState& paddle, Vec2 target,
                       const PhysicsParams& params, double dt) {
  if (!is_finite(target)) throw Error("invalid target");
  const Region r = paddle_region(params.table, paddle.radius);
  target.x = std::clamp(target.x, r.x_min, r.x_max);
  target.y = std::clamp(target.y, r.y_min, r.y_max);

  const double alpha = std::min(1.0, dt / params.paddle_tracking_time);
  Vec2 step = alpha * (target - paddle.position);
  const double max_step = params.paddle_max_speed * dt;
  const double len = norm(step);
  if (len > max_step) step *= max_step / len;

  BodyState out = paddle;
  out.position += step;
  out.velocity = step / dt;
  clamp_to_region(out, params.table);
  return out;
}

StepOutput step_world(const WorldState& world, Vec2 paddle_target,
                      const PhysicsParams& params) {
  if (!is_finite(paddle_target)) throw Error("invalid target");
  StepOutput out{world, {}};
  WorldState& w = out.world;
  const double h = params.control_dt / params.substeps;
  const double slope = params.slope_acceleration();
  const Vec2 puck_accel{0.0, -slope};
  const Vec2 block_accel{0.0, -slope * params.block_tilt_scale};

  SubstepSolver solver(w, out.events, params);
  for (int s = 0; s < params.substeps; ++s) {
    w.paddle = paddle_track(w.paddle, paddle_target, params, h);
    if (w.puck.active) {
      integrate_free(w.puck, puck_accel, params.puck_damping, h);
    }
    for (auto& obj : w.objects) {
      if (obj.active) integrate_free(obj, block_accel, params.block_damping, h);
    }
    // Checked before collisions so a NaN is attributed to its source body.
    check_finite(w);
    solver.collide();
    solver.project();

    check_finite(w);
  }
  ++w.tick;
  return out;
}

}  // namespace airhockey::physics
