#include "airhockey/physics/world.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "airhockey/error.hpp"

namespace airhockey::physics {

void TableBounds::validate() const {
  if (!(half_width > 0.0) || !(half_length > 0.0)) {
    throw Error("table half extents must be positive");
  }
  if (paddle_region_y_max < -half_length || paddle_region_y_max > half_length) {
    throw Error("paddle_region_y_max must lie within the table");
  }
}

double PhysicsParams::slope_acceleration() const {
  return gravity * std::sin(tilt_deg * std::numbers::pi / 180.0);
}

void PhysicsParams::validate() const {
  table.validate();
  if (!(puck_mass > 0.0) || !(paddle_mass > 0.0) || !(object_mass > 0.0)) {
    throw Error("all masses must be positive");
  }
  if (!(puck_radius > 0.0) || !(paddle_radius > 0.0) || !(block_radius > 0.0)) {
    throw Error("all radii must be positive");
  }
  for (double e : {restitution_paddle_puck, restitution_wall,
                   restitution_puck_object, tangential_friction}) {
    if (!(e >= 0.0 && e <= 1.0)) {
      throw Error("restitutions and tangential_friction must lie in [0,1]");
    }
  }
  if (!(puck_damping >= 0.0) || !(block_damping >= 0.0)) {
    throw Error("damping must be non-negative");
  }
  if (!(control_dt > 0.0)) throw Error("control_dt must be positive");
  if (substeps < 1) throw Error("substeps must be >= 1");
  if (!(paddle_max_speed > 0.0)) throw Error("paddle_max_speed must be positive");
  if (!(paddle_tracking_time > 0.0)) {
    throw Error("paddle_tracking_time must be positive");
  }
  if (!std::isfinite(gravity) || !std::isfinite(tilt_deg) ||
      !std::isfinite(block_tilt_scale)) {
    throw Error("gravity, tilt and tilt scale must be finite");
  }
  const Region r = paddle_region(table, paddle_radius);
  if (r.x_min > r.x_max || r.y_min > r.y_max) {
    throw Error("paddle does not fit in its region");
  }
}

std::string to_string(BodyKind kind) {
  switch (kind) {
    case BodyKind::kPaddle:
      return "paddle";
    case BodyKind::kPuck:
      return "puck";
    case BodyKind::kBlock:
      return "block";
  }
  return "unknown";
}

BodyKind body_kind_from_string(const std::string& name) {
  if (name == "paddle") return BodyKind::kPaddle;
  if (name == "puck") return BodyKind::kPuck;
  if (name == "block") return BodyKind::kBlock;
  throw Error("unknown body kind '" + name + "'");
}

double BodyState::inverse_mass() const {
  if (kind == BodyKind::kPaddle) return 0.0;
  return 1.0 / mass;
}

BodyState make_paddle(const PhysicsParams& params, Vec2 position) {
  return BodyState{position, {}, params.paddle_radius, params.paddle_mass,
                   BodyKind::kPaddle, true};
}

BodyState make_puck(const PhysicsParams& params, Vec2 position, Vec2 velocity) {
  return BodyState{position, velocity, params.puck_radius, params.puck_mass,
                   BodyKind::kPuck, true};
}

BodyState make_block(const PhysicsParams& params, Vec2 position) {
  return BodyState{position, {}, params.block_radius, params.object_mass,
                   BodyKind::kBlock, true};
}

Region paddle_region(const TableBounds& table, double paddle_radius) {
  return Region{
      -table.half_width + paddle_radius,
      table.half_width - paddle_radius,
      -table.half_length + paddle_radius,
      std::min(table.paddle_region_y_max, table.half_length - paddle_radius),
  };
}

}  // namespace airhockey::physics
