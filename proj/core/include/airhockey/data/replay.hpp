#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "airhockey/data/trajectory.hpp"
#include "airhockey/json.hpp"

namespace airhockey::data {

struct ReplayReport {
  bool pass = false;
  std::size_t steps = 0;
  std::optional<std::size_t> first_divergent_step;
  double max_obs_deviation = 0.0;
  double max_reward_deviation = 0.0;
  std::string detail;  // first mismatch description, empty on PASS
};

Json to_json(const ReplayReport& r);

// Re-simulates from the initial world with the stored actions. PASS iff every
// observation, reward and terminal flag matches bit for bit.
ReplayReport verify_replay(const TrajectoryFile& file);
ReplayReport verify_replay(const std::filesystem::path& path);

}  // namespace airhockey::data
