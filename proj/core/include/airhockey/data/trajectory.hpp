#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "airhockey/env/env.hpp"
#include "airhockey/json.hpp"
#include "airhockey/learn/transition.hpp"
#include "airhockey/physics/world.hpp"

namespace airhockey::data {

inline constexpr int kFormatVersion = 1;

enum class Source { kTeleopMouse, kPolicy, kScripted };

std::string to_string(Source s);
Source source_from_string(const std::string& s);

// SHA-256 (hex) of the canonical JSON of {physics, task}.
std::string config_hash(const physics::PhysicsParams& physics, const env::TaskSpec& task);
Json config_json(const physics::PhysicsParams& physics, const env::TaskSpec& task);

struct TrajectoryHeader {
  int format_version = kFormatVersion;
  env::TaskId task_id = env::TaskId::kReach;
  std::string config_hash;
  std::uint64_t seed = 0;
  int obs_dim = 0;
  int act_dim = env::Env::kActionDim;
  Source source = Source::kPolicy;
  std::optional<std::string> participant_id;
  std::optional<env::Goal> goal;
  Json config;  // {"physics": ..., "task": ...}; hashes to config_hash
};

struct StepRecord {
  std::vector<double> obs;
  std::vector<double> action;  // the clamped action the env consumed
  double reward = 0.0;
  std::vector<double> next_obs;
  bool terminated = false;
  bool truncated = false;
  bool success = false;
  env::RewardComponents components;
  std::vector<double> achieved_goal;

  bool done() const { return terminated || truncated; }
};

struct TrajectoryFile {
  TrajectoryHeader header;
  physics::WorldState initial_world;
  std::vector<StepRecord> steps;

  // Throws on dimension or terminal-flag violations.
  void validate() const;
};

// Opens a trajectory for an env that was just reset (or restored).
TrajectoryFile start_trajectory(const env::Env& env, Source source, std::uint64_t seed,
                                std::optional<std::string> participant_id = {});

// Appends one step: `obs` is the observation before the step.
void append_step(TrajectoryFile& file, const env::Observation& obs,
                 const env::Action& action, const env::StepResult& result);

// JSON-lines: header, initial world, then one step per line. Validation runs
// before any byte is written; the write is atomic.
void write_trajectory(const std::filesystem::path& path, const TrajectoryFile& file);
std::string serialize_trajectory(const TrajectoryFile& file);

// Errors name the file and 1-based line: "file X line N: ...".
TrajectoryFile read_trajectory(const std::filesystem::path& path);

// Rebuilds the env the trajectory was recorded with, restored to its start.
// Throws "unknown config_hash" if the embedded config does not hash to the
// header's config_hash.
env::Env replay_env(const TrajectoryFile& file);

// Learning view of a trajectory, including the goal fields HER needs.
std::vector<learn::Transition> to_transitions(const TrajectoryFile& file);

}  // namespace airhockey::data
