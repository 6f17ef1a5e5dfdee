#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "airhockey/physics/vec2.hpp"

namespace airhockey::physics {

inline constexpr double kMetersPerInch = 0.0254;

// Table geometry in meters, origin at the table center, +y up-table (away
// from the paddle home). The paddle is confined to y <= paddle_region_y_max.
struct TableBounds {
  double half_width = 12.0 * kMetersPerInch;   // 24 in wide
  double half_length = 33.0 * kMetersPerInch;  // 66 in long
  double paddle_region_y_max = -33.0 * kMetersPerInch + 0.4;  // lowest 0.4 m

  void validate() const;
};

// Tunable world parameters. Units are SI. Damping is per body class.
struct PhysicsParams {
  double puck_mass = 0.025;
  double paddle_mass = 0.16;  // unused while the paddle is kinematic
  double object_mass = 0.05;

  double puck_radius = 1.25 * kMetersPerInch;
  double paddle_radius = 1.875 * kMetersPerInch;
  double block_radius = 0.03;

  double restitution_paddle_puck = 0.9;
  double restitution_wall = 0.85;
  double restitution_puck_object = 0.6;

  double puck_damping = 0.12;
  double block_damping = 2.0;
  // Fraction of the slope acceleration felt by blocks. Blocks are quasistatic
  // and only move when struck, so the default is 0.
  double block_tilt_scale = 0.0;

  double tilt_deg = 5.5;
  double gravity = 9.81;

  double paddle_max_speed = 2.0;
  // Time constant of the first-order paddle tracking controller.
  double paddle_tracking_time = 0.05;

  double control_dt = 0.05;
  int substeps = 10;
  double tangential_friction = 0.0;

  TableBounds table;

  // Slope acceleration magnitude along -y.
  double slope_acceleration() const;
  void validate() const;
};

enum class BodyKind { kPaddle, kPuck, kBlock };

std::string to_string(BodyKind kind);
BodyKind body_kind_from_string(const std::string& name);

struct BodyState {
  Vec2 position;
  Vec2 velocity;
  double radius = 0.0;
  double mass = 0.0;
  BodyKind kind = BodyKind::kPuck;
  // Inactive bodies are parked: not integrated and never collide.
  bool active = true;

  // Collision inverse mass; the paddle is kinematic (infinite mass).
  double inverse_mass() const;

  friend bool operator==(const BodyState&, const BodyState&) = default;
};

struct WorldState {
  std::int64_t tick = 0;
  BodyState paddle;
  BodyState puck;
  std::vector<BodyState> objects;
  std::uint64_t rng_state = 0;

  friend bool operator==(const WorldState&, const WorldState&) = default;
};

struct ContactPoint {
  Vec2 position;
  double relative_speed = 0.0;  // closing speed along the normal, >= 0
};

// Everything that touched during one control step (accumulated over
// substeps).
struct StepEvents {
  int paddle_puck_contacts = 0;
  std::vector<int> puck_object_contacts;  // object index per contact
  int paddle_object_contacts = 0;
  int wall_contacts = 0;
  std::vector<ContactPoint> contact_points;
};

// Fresh bodies with default geometry/mass for the given params.
BodyState make_paddle(const PhysicsParams& params, Vec2 position);
BodyState make_puck(const PhysicsParams& params, Vec2 position,
                    Vec2 velocity = {});
BodyState make_block(const PhysicsParams& params, Vec2 position);

// Paddle-reachable box for the paddle's center.
struct Region {
  double x_min, x_max, y_min, y_max;
};
Region paddle_region(const TableBounds& table, double paddle_radius);

// Tolerance used by the interpenetration and containment invariants.
inline constexpr double kContactTolerance = 1e-6;

}  // namespace airhockey::physics
