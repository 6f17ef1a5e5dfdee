#include "airhockey/teleop/session.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "airhockey/error.hpp"
#include "airhockey/io.hpp"
#include "airhockey/physics/serialize.hpp"

namespace airhockey::teleop {
namespace {

BodySummary summary(const physics::BodyState& b) { return {b.position, b.velocity}; }

}  // namespace

Json to_json(const TeleopConfig& c) {
  Json j;
  j["address"] = c.address;
  j["port"] = c.port;
  j["task_id"] = env::to_string(c.task_id);
  j["seed"] = c.seed;
  j["participant_id"] = c.participant_id ? Json(*c.participant_id) : Json(nullptr);
  j["output_dir"] = c.output_dir.generic_string();
  j["static_dir"] = c.static_dir.generic_string();
  j["physics"] = physics::to_json(c.physics);
  return j;
}

TeleopConfig teleop_config_from_json(const Json& j) {
  if (!j.is_object()) throw Error("teleop config must be a JSON object");
  TeleopConfig c;
  read_if(j, "address", c.address);
  read_if(j, "port", c.port);
  if (auto it = j.find("task_id"); it != j.end()) {
    c.task_id = env::parse_task_id(it->get<std::string>());
  }
  read_if(j, "seed", c.seed);
  if (auto it = j.find("participant_id"); it != j.end() && !it->is_null()) {
    c.participant_id = it->get<std::string>();
  }
  if (auto it = j.find("output_dir"); it != j.end()) c.output_dir = it->get<std::string>();
  if (auto it = j.find("static_dir"); it != j.end()) c.static_dir = it->get<std::string>();
  if (auto it = j.find("physics"); it != j.end()) {
    c.physics = physics::physics_from_json(*it, c.physics);
  }
  return c;
}

TeleopConfig load_teleop_config(const std::filesystem::path& path) {
  try {
    return teleop_config_from_json(Json::parse(read_file(path)));
  } catch (const Json::exception& e) {
    throw Error("config " + path.string() + ": " + e.what());
  }
}

env::Action map_target(const TargetCommand& raw, const physics::BodyState& paddle,
                       const physics::PhysicsParams& params) {
  if (!std::isfinite(raw.x) || !std::isfinite(raw.y)) throw Error("non-finite target");
  const physics::Region region = physics::paddle_region(params.table, params.paddle_radius);
  const double x = std::clamp(std::clamp(raw.x, -1.0, 1.0) * params.table.half_width,
                              region.x_min, region.x_max);
  const double y = std::clamp(std::clamp(raw.y, -1.0, 1.0) * params.table.half_length,
                              region.y_min, region.y_max);
  const double reach = params.paddle_max_speed * params.control_dt;
  return {std::clamp((x - paddle.position.x) / reach, -1.0, 1.0),
          std::clamp((y - paddle.position.y) / reach, -1.0, 1.0)};
}

TeleopSession::TeleopSession(TeleopConfig config)
    : config_(std::move(config)),
      env_(env::make_task(config_.task_id, {config_.physics, Json::object()}, config_.seed)) {
  begin_episode();
}

void TeleopSession::rebuild_env() {
  env_ = env::make_task(config_.task_id, {config_.physics, Json::object()}, config_.seed);
}

void TeleopSession::begin_episode() {
  obs_ = env_.reset();
  ++episode_id_;
  step_ = 0;
  reward_ = 0.0;
  episode_return_ = 0.0;
  success_ = false;
  if (record_) {
    buffer_ = data::start_trajectory(env_, data::Source::kTeleopMouse, config_.seed,
                                     config_.participant_id);
  }
}

std::optional<std::filesystem::path> TeleopSession::flush() {
  if (!buffer_) return std::nullopt;
  data::TrajectoryFile file = std::move(*buffer_);
  buffer_.reset();
  if (file.steps.empty()) return std::nullopt;
  std::filesystem::create_directories(config_.output_dir);
  char name[96];
  std::snprintf(name, sizeof name, "%s_%s_s%llu_e%06lld",
                env::to_string(file.header.task_id).c_str(),
                config_.participant_id ? config_.participant_id->c_str() : "anon",
                static_cast<unsigned long long>(config_.seed),
                static_cast<long long>(episode_id_));
  std::filesystem::path path = config_.output_dir / (std::string(name) + ".jsonl");
  for (int n = 1; std::filesystem::exists(path); ++n) {
    path = config_.output_dir / (std::string(name) + "_" + std::to_string(n) + ".jsonl");
  }
  data::write_trajectory(path, file);
  written_.push_back(path);
  return path;
}

Ack TeleopSession::set_target(const TargetCommand& target) {
  if (!std::isfinite(target.x) || !std::isfinite(target.y)) {
    return {false, "non-finite target"};
  }
  target_ = target;
  return {true, ""};
}

Ack TeleopSession::apply(const ControlCommand& command) {
  try {
    switch (command.cmd) {
      case ControlKind::kReset: {
        const auto path = flush();
        begin_episode();
        return {true, path ? "saved " + path->string() : "reset"};
      }
      case ControlKind::kSetTask:
      case ControlKind::kSetSeed: {
        if (command.cmd == ControlKind::kSetTask) {
          if (!command.task_id) return {false, "set_task needs task_id"};
          config_.task_id = *command.task_id;
        } else {
          if (!command.seed) return {false, "set_seed needs seed"};
          config_.seed = *command.seed;
        }
        flush();
        rebuild_env();
        target_.reset();
        begin_episode();
        return {true, env::to_string(config_.task_id) + " seed " + std::to_string(config_.seed)};
      }
      case ControlKind::kStartRecord: {
        flush();
        record_ = true;
        begin_episode();
        return {true, "recording"};
      }
      case ControlKind::kStopRecord: {
        if (!record_) return {false, "not recording"};
        record_ = false;
        const auto path = flush();
        return {true, path ? "saved " + path->string() : "nothing recorded"};
      }
    }
  } catch (const std::exception& e) {
    return {false, e.what()};
  }
  return {false, "unknown command"};
}

StateBroadcast TeleopSession::tick() {
  if (env_.done()) begin_episode();
  const env::Action a = target_ ? map_target(*target_, env_.world().paddle, env_.physics())
                                : env::Action{0.0, 0.0};
  const env::StepResult r = env_.step(a);
  last_action_ = a;
  if (buffer_) data::append_step(*buffer_, obs_, a, r);
  obs_ = r.observation;
  ++tick_;
  ++step_;
  reward_ = r.reward;
  episode_return_ += r.reward;
  success_ = r.info.success;
  if (r.done) flush();
  return snapshot();
}

StateBroadcast TeleopSession::snapshot() const {
  StateBroadcast s;
  s.tick = tick_;
  s.step = step_;
  s.episode_id = episode_id_;
  s.task_id = config_.task_id;
  const physics::WorldState& w = env_.world();
  s.paddle = summary(w.paddle);
  s.puck = summary(w.puck);
  for (const physics::BodyState& o : w.objects) s.objects.push_back(summary(o));
  s.goal = env_.goal();
  s.reward = reward_;
  s.episode_return = episode_return_;
  s.done = env_.done();
  s.success = success_;
  s.recording = record_;
  return s;
}

void TeleopSession::close() {
  flush();
  record_ = false;
}

}  // namespace airhockey::teleop
