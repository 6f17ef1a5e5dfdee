#include "airhockey/physics/serialize.hpp"

#include "airhockey/error.hpp"
#include "airhockey/json.hpp"

namespace airhockey::physics {
Json to_json(const Vec2& v) { return Json::array({v.x, v.y}); }

Vec2 vec2_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw Error("expected a 2-element array");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json to_json(const BodyState& body) {
  Json j;
  j["position"] = to_json(body.position);
  j["velocity"] = to_json(body.velocity);
  j["radius"] = body.radius;
  j["mass"] = body.mass;
  j["kind"] = to_string(body.kind);
  j["active"] = body.active;
  return j;
}

BodyState body_from_json(const Json& j) {
  BodyState b;
  b.position = vec2_from_json(j.at("position"));
  b.velocity = vec2_from_json(j.at("velocity"));
  b.radius = j.at("radius").get<double>();
  b.mass = j.at("mass").get<double>();
  b.kind = body_kind_from_string(j.at("kind").get<std::string>());
  b.active = j.value("active", true);
  return b;
}

Json to_json(const WorldState& world) {
  Json j;
  j["tick"] = world.tick;
  j["paddle"] = to_json(world.paddle);
  j["puck"] = to_json(world.puck);
  j["objects"] = Json::array();
  for (const auto& obj : world.objects) j["objects"].push_back(to_json(obj));
  j["rng_state"] = world.rng_state;
  return j;
}

WorldState world_from_json(const Json& j) {
  WorldState w;
  w.tick = j.at("tick").get<std::int64_t>();
  w.paddle = body_from_json(j.at("paddle"));
  w.puck = body_from_json(j.at("puck"));
  for (const auto& obj : j.at("objects")) w.objects.push_back(body_from_json(obj));
  w.rng_state = j.at("rng_state").get<std::uint64_t>();
  return w;
}

Json to_json(const TableBounds& table) {
  Json j;
  j["half_width"] = table.half_width;
  j["half_length"] = table.half_length;
  j["paddle_region_y_max"] = table.paddle_region_y_max;
  return j;
}

TableBounds table_from_json(const Json& j) {
  TableBounds t;
  read_if(j, "half_width", t.half_width);
  read_if(j, "half_length", t.half_length);
  read_if(j, "paddle_region_y_max", t.paddle_region_y_max);
  return t;
}

Json to_json(const PhysicsParams& p) {
  Json j;
  j["puck_mass"] = p.puck_mass;
  j["paddle_mass"] = p.paddle_mass;
  j["object_mass"] = p.object_mass;
  j["puck_radius"] = p.puck_radius;
  j["paddle_radius"] = p.paddle_radius;
  j["block_radius"] = p.block_radius;
  j["restitution_paddle_puck"] = p.restitution_paddle_puck;
  j["restitution_wall"] = p.restitution_wall;
  j["restitution_puck_object"] = p.restitution_puck_object;
  j["puck_damping"] = p.puck_damping;
  j["block_damping"] = p.block_damping;
  j["block_tilt_scale"] = p.block_tilt_scale;
  j["tilt_deg"] = p.tilt_deg;
  j["gravity"] = p.gravity;
  j["paddle_max_speed"] = p.paddle_max_speed;
  j["paddle_tracking_time"] = p.paddle_tracking_time;
  j["control_dt"] = p.control_dt;
  j["substeps"] = p.substeps;
  j["tangential_friction"] = p.tangential_friction;
  j["table"] = to_json(p.table);
  return j;
}

PhysicsParams physics_from_json(const Json& j, const PhysicsParams& base) {
  if (!j.is_object()) throw Error("physics config must be an object");
  PhysicsParams p = base;
  read_if(j, "puck_mass", p.puck_mass);
  read_if(j, "paddle_mass", p.paddle_mass);
  read_if(j, "object_mass", p.object_mass);
  read_if(j, "puck_radius", p.puck_radius);
  read_if(j, "paddle_radius", p.paddle_radius);
  read_if(j, "block_radius", p.block_radius);
  read_if(j, "restitution_paddle_puck", p.restitution_paddle_puck);
  read_if(j, "restitution_wall", p.restitution_wall);
  read_if(j, "restitution_puck_object", p.restitution_puck_object);
  read_if(j, "puck_damping", p.puck_damping);
  read_if(j, "block_damping", p.block_damping);
  read_if(j, "block_tilt_scale", p.block_tilt_scale);
  read_if(j, "tilt_deg", p.tilt_deg);
  read_if(j, "gravity", p.gravity);
  read_if(j, "paddle_max_speed", p.paddle_max_speed);
  read_if(j, "paddle_tracking_time", p.paddle_tracking_time);
  read_if(j, "control_dt", p.control_dt);
  read_if(j, "substeps", p.substeps);
  read_if(j, "tangential_friction", p.tangential_friction);
  if (auto it = j.find("table"); it != j.end()) {
    TableBounds t = p.table;
    read_if(*it, "half_width", t.half_width);
    read_if(*it, "half_length", t.half_length);
    read_if(*it, "paddle_region_y_max", t.paddle_region_y_max);
    p.table = t;
  }
  p.validate();
  return p;
}

}  // namespace airhockey::physics
