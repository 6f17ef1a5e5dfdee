#pragma once

#include <cstdint>
#include <filesystem>

#include "airhockey/env/task.hpp"
#include "airhockey/learn/her.hpp"

namespace airhockey::harness {

struct CollectOptions {
  std::int64_t steps = 1000000;
  std::uint64_t seed = 0;
  // Sample from the policy's Gaussian instead of taking its mean.
  bool stochastic = true;
  env::EnvConfig env;
};

struct CollectSummary {
  int episodes = 0;
  std::int64_t steps = 0;
  int successes = 0;
};

// Rolls the policy until at least `steps` env steps are recorded, finishing
// the episode in progress, and writes one trajectory file per episode
// (ep_000000.jsonl, ...) with source "policy".
CollectSummary collect_expert(const std::filesystem::path& policy_path,
                              const std::filesystem::path& out_dir,
                              const CollectOptions& options);

struct RelabelSummary {
  int files = 0;
  std::size_t input_transitions = 0;
  std::size_t output_transitions = 0;
};

// Hindsight-relabels every trajectory file in `in_dir` and writes a
// transitions file of the same name to `out_dir`.
RelabelSummary relabel_directory(const std::filesystem::path& in_dir,
                                 const std::filesystem::path& out_dir,
                                 const learn::HerConfig& config, std::uint64_t seed);

}  // namespace airhockey::harness
