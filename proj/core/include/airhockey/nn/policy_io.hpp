#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "airhockey/json.hpp"

#include "airhockey/nn/gaussian.hpp"

namespace airhockey::nn {

using airhockey::Json;

inline constexpr int kPolicyFormatVersion = 1;

// On-disk policy: the network plus what is needed to use it safely.
struct PolicyFile {
  std::string kind = "gaussian_mlp";
  std::string task_id;
  std::string algorithm;
  GaussianPolicy policy;
  std::vector<std::string> obs_layout;
  double action_scale = 1.0;
};

Json to_json(const PolicyFile& file);
PolicyFile policy_file_from_json(const Json& j);

void save_policy(const std::filesystem::path& path, const PolicyFile& file);
PolicyFile load_policy(const std::filesystem::path& path);

// Deterministic action in env units: mean action times action_scale.
Vector policy_action(const PolicyFile& file, const Vector& obs);

}  // namespace airhockey::nn
