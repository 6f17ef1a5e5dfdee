#pragma once

#include <utility>

#include "airhockey/physics/world.hpp"

namespace airhockey::physics {

// Impulse resolution between two touching disks. The normal impulse is
// j = -(1+e) v_rel.n / (1/m_a + 1/m_b); overlap is removed along the normal
// in proportion to inverse mass; tangential velocity of each dynamic body is
// scaled by (1 - tangential_friction). A non-closing pair is returned
// unchanged. Throws if both bodies are static.
std::pair<BodyState, BodyState> resolve_disk_collision(
    const BodyState& a, const BodyState& b, double restitution,
    double tangential_friction = 0.0);

// Positional separation only (no velocity change). Used for overlapping pairs
// that are already separating.
std::pair<BodyState, BodyState> separate_disks(const BodyState& a,
                                               const BodyState& b);

// Reflects the velocity component pointing into any wall the disk touches or
// penetrates (scaled by e), damps the tangential component, and clamps the
// disk inside the table.
BodyState resolve_wall_contact(const BodyState& body, const TableBounds& bounds,
                               double restitution,
                               double tangential_friction = 0.0);

// Same as resolve_wall_contact, also reporting how many walls were struck.
struct WallContact {
  BodyState body;
  int walls_struck = 0;
};
WallContact resolve_wall_contact_counted(const BodyState& body,
                                         const TableBounds& bounds,
                                         double restitution,
                                         double tangential_friction);

// First-order tracking of a target inside the paddle region over dt.
// Throws "invalid target" for non-finite targets.
BodyState paddle_track(const BodyState& paddle, Vec2 target,
                       const PhysicsParams& params, double dt);

struct StepOutput {
  WorldState world;
  StepEvents events;
};

// One control step of `substeps` sub-integrations. Bit-deterministic.
// Throws "numerical divergence in <body>" on NaN/Inf.
StepOutput step_world(const WorldState& world, Vec2 paddle_target,
                      const PhysicsParams& params);

}  // namespace airhockey::physics
