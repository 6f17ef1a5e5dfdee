#pragma once

#include "airhockey/json.hpp"

#include "airhockey/physics/world.hpp"

namespace airhockey::physics {

// Canonical JSON forms. Keys are emitted in a fixed order and doubles with
// round-trip precision, so dump(to_json(x)) is a stable byte string.
using airhockey::Json;

Json to_json(const Vec2& v);
Json to_json(const BodyState& body);
Json to_json(const WorldState& world);
Json to_json(const TableBounds& table);
Json to_json(const PhysicsParams& params);

Vec2 vec2_from_json(const Json& j);
BodyState body_from_json(const Json& j);
WorldState world_from_json(const Json& j);
TableBounds table_from_json(const Json& j);

// Missing keys keep the values from `base`, so partial override documents
// are accepted.
PhysicsParams physics_from_json(const Json& j, const PhysicsParams& base = {});

}  // namespace airhockey::physics
