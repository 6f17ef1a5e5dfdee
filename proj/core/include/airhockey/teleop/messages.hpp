#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "airhockey/env/task.hpp"
#include "airhockey/json.hpp"
#include "airhockey/physics/world.hpp"

namespace airhockey::teleop {

using airhockey::Json;

// Wire protocol: one JSON object per WebSocket text frame, discriminated by
// "type". Client to server: "target" and "control". Server to client: "state"
// and "ack".

struct BodySummary {
  physics::Vec2 position;
  physics::Vec2 velocity;
};

struct StateBroadcast {
  std::int64_t tick = 0;  // server-wide, strictly increasing
  std::int64_t step = 0;  // steps into the current episode
  std::int64_t episode_id = 0;
  env::TaskId task_id = env::TaskId::kReach;
  BodySummary paddle;
  BodySummary puck;
  std::vector<BodySummary> objects;
  std::optional<env::Goal> goal;
  double reward = 0.0;
  double episode_return = 0.0;
  bool done = false;
  bool success = false;
  bool recording = false;
};

// Pointer target in normalized table coordinates.
struct TargetCommand {
  double x = 0.0;
  double y = 0.0;
};

enum class ControlKind { kReset, kSetTask, kStartRecord, kStopRecord, kSetSeed };

struct ControlCommand {
  ControlKind cmd = ControlKind::kReset;
  std::optional<env::TaskId> task_id;  // set_task
  std::optional<std::uint64_t> seed;   // set_seed
};

struct Ack {
  bool ok = true;
  std::string detail;
};

using ClientMessage = std::variant<TargetCommand, ControlCommand>;

std::string to_string(ControlKind k);

Json to_json(const StateBroadcast& s);
Json to_json(const TargetCommand& t);
Json to_json(const ControlCommand& c);
Json to_json(const Ack& a);

StateBroadcast state_from_json(const Json& j);
Ack ack_from_json(const Json& j);

// Throws Error on anything that is not a well-formed target or control
// message.
ClientMessage parse_client_message(const std::string& text);

}  // namespace airhockey::teleop
