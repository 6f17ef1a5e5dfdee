#include "airhockey/teleop/messages.hpp"

#include "airhockey/error.hpp"
#include "airhockey/physics/serialize.hpp"

namespace airhockey::teleop {
namespace {

Json body_json(const BodySummary& b) {
  return {{"position", physics::to_json(b.position)},
          {"velocity", physics::to_json(b.velocity)}};
}

BodySummary body_from(const Json& j) {
  return {physics::vec2_from_json(j.at("position")),
          physics::vec2_from_json(j.at("velocity"))};
}

ControlKind control_kind(const std::string& s) {
  for (ControlKind k : {ControlKind::kReset, ControlKind::kSetTask, ControlKind::kStartRecord,
                        ControlKind::kStopRecord, ControlKind::kSetSeed}) {
    if (s == to_string(k)) return k;
  }
  throw Error("unknown control cmd '" + s + "'");
}

}  // namespace

std::string to_string(ControlKind k) {
  switch (k) {
    case ControlKind::kReset: return "reset";
    case ControlKind::kSetTask: return "set_task";
    case ControlKind::kStartRecord: return "start_record";
    case ControlKind::kStopRecord: return "stop_record";
    case ControlKind::kSetSeed: return "set_seed";
  }
  return "?";
}

Json to_json(const StateBroadcast& s) {
  Json objects = Json::array();
  for (const BodySummary& o : s.objects) objects.push_back(body_json(o));
  Json j;
  j["type"] = "state";
  j["tick"] = s.tick;
  j["step"] = s.step;
  j["episode_id"] = s.episode_id;
  j["task_id"] = env::to_string(s.task_id);
  j["paddle"] = body_json(s.paddle);
  j["puck"] = body_json(s.puck);
  j["objects"] = std::move(objects);
  j["goal"] = s.goal ? env::to_json(*s.goal) : Json(nullptr);
  j["reward"] = s.reward;
  j["episode_return"] = s.episode_return;
  j["done"] = s.done;
  j["success"] = s.success;
  j["recording"] = s.recording;
  return j;
}

Json to_json(const TargetCommand& t) { return {{"type", "target"}, {"x", t.x}, {"y", t.y}}; }

Json to_json(const ControlCommand& c) {
  Json j = {{"type", "control"}, {"cmd", to_string(c.cmd)}};
  if (c.task_id) j["task_id"] = env::to_string(*c.task_id);
  if (c.seed) j["seed"] = *c.seed;
  return j;
}

Json to_json(const Ack& a) { return {{"type", "ack"}, {"ok", a.ok}, {"detail", a.detail}}; }

StateBroadcast state_from_json(const Json& j) {
  StateBroadcast s;
  s.tick = j.at("tick").get<std::int64_t>();
  s.step = j.at("step").get<std::int64_t>();
  s.episode_id = j.at("episode_id").get<std::int64_t>();
  s.task_id = env::parse_task_id(j.at("task_id").get<std::string>());
  s.paddle = body_from(j.at("paddle"));
  s.puck = body_from(j.at("puck"));
  for (const Json& o : j.at("objects")) s.objects.push_back(body_from(o));
  if (!j.at("goal").is_null()) s.goal = env::goal_from_json(j.at("goal"));
  s.reward = j.at("reward").get<double>();
  s.episode_return = j.at("episode_return").get<double>();
  s.done = j.at("done").get<bool>();
  s.success = j.at("success").get<bool>();
  s.recording = j.at("recording").get<bool>();
  return s;
}

Ack ack_from_json(const Json& j) {
  return {j.at("ok").get<bool>(), j.value("detail", std::string())};
}

ClientMessage parse_client_message(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception&) {
    throw Error("message is not JSON");
  }
  if (!j.is_object()) throw Error("message must be a JSON object");
  const auto type = j.find("type");
  if (type == j.end() || !type->is_string()) throw Error("message has no type");
  try {
    if (*type == "target") {
      // Non-finite values cannot be spelled in JSON; a null lands here too.
      if (!j.at("x").is_number() || !j.at("y").is_number()) {
        throw Error("target x and y must be finite numbers");
      }
      return TargetCommand{j["x"].get<double>(), j["y"].get<double>()};
    }
    if (*type == "control") {
      ControlCommand c;
      c.cmd = control_kind(j.at("cmd").get<std::string>());
      if (c.cmd == ControlKind::kSetTask) {
        c.task_id = env::parse_task_id(j.at("task_id").get<std::string>());
      }
      if (c.cmd == ControlKind::kSetSeed) c.seed = j.at("seed").get<std::uint64_t>();
      return c;
    }
  } catch (const Json::exception& e) {
    throw Error(std::string("malformed ") + type->get<std::string>() + " message: " + e.what());
  }
  throw Error("unknown message type '" + type->get<std::string>() + "'");
}

}  // namespace airhockey::teleop
