#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "airhockey/data/trajectory.hpp"
#include "airhockey/env/env.hpp"
#include "airhockey/teleop/messages.hpp"

namespace airhockey::teleop {

struct TeleopConfig {
  std::string address = "127.0.0.1";
  unsigned short port = 8765;  // 0 picks a free port
  env::TaskId task_id = env::TaskId::kReach;
  std::uint64_t seed = 0;
  std::optional<std::string> participant_id;
  std::filesystem::path output_dir = "teleop_data";
  std::filesystem::path static_dir;  // UI bundle; empty serves a placeholder page
  physics::PhysicsParams physics;
};

Json to_json(const TeleopConfig& c);
TeleopConfig teleop_config_from_json(const Json& j);
TeleopConfig load_teleop_config(const std::filesystem::path& path);

// Pointer target (normalized table coordinates) to the action that moves the
// paddle toward it: clamp to [-1,1]^2, scale to meters, clamp into the paddle
// region, then divide the displacement by the per-step reach and clamp.
// Throws on non-finite input.
env::Action map_target(const TargetCommand& raw, const physics::BodyState& paddle,
                       const physics::PhysicsParams& params);

// The simulation side of a teleop session, free of any networking. The
// server calls tick() once per control period and forwards client messages
// in between.
class TeleopSession {
 public:
  explicit TeleopSession(TeleopConfig config);

  // Latest wins; the target is held until replaced.
  Ack set_target(const TargetCommand& target);
  Ack apply(const ControlCommand& command);

  // One env step with the held target. Starts a new episode first when the
  // previous one ended. Recording buffers are flushed on episode end.
  StateBroadcast tick();
  StateBroadcast snapshot() const;

  // Writes any open recording (used on shutdown).
  void close();

  bool recording() const { return record_; }
  const std::vector<std::filesystem::path>& written() const { return written_; }
  const env::Env& env() const { return env_; }
  // Action consumed by the last tick.
  const env::Action& last_action() const { return last_action_; }

 private:
  void rebuild_env();
  void begin_episode();
  std::optional<std::filesystem::path> flush();

  TeleopConfig config_;
  env::Env env_;
  std::optional<TargetCommand> target_;
  std::optional<data::TrajectoryFile> buffer_;
  bool record_ = false;
  std::int64_t tick_ = 0;
  std::int64_t step_ = 0;
  std::int64_t episode_id_ = 0;
  double reward_ = 0.0;
  double episode_return_ = 0.0;
  bool success_ = false;
  env::Observation obs_;
  env::Action last_action_{0.0, 0.0};
  std::vector<std::filesystem::path> written_;
};

}  // namespace airhockey::teleop
