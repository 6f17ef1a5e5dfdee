#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "airhockey/harness/evaluate.hpp"
#include "airhockey/harness/run_config.hpp"

namespace airhockey::harness {

using ProgressFn = std::function<void(const std::string&)>;

// Seeds for the two evaluation streams, kept apart from the training env
// seeds so early stopping cannot pick the final evaluation's episodes.
inline constexpr std::uint64_t kPeriodicEvalSeedOffset = 1'000'003;
inline constexpr std::uint64_t kFinalEvalSeedOffset = 2'000'003;

struct SeedRun {
  std::uint64_t seed = 0;
  std::filesystem::path policy_path;
  std::int64_t steps = 0;  // env steps (online) or gradient steps (offline)
  bool early_stopped = false;
  SeedResult final_eval;
};

struct TrainSummary {
  std::vector<SeedRun> seeds;
  EvalReport report;  // final evaluation of every seed's policy
};

// Trains each seed in order and writes, under config.output_dir:
//   config.json, report.json and seed_<s>/{policy.json, metrics.csv, curve.csv}.
// Output is a pure function of the config.
TrainSummary train(const RunConfig& config, const ProgressFn& progress = {});

// Min-max normalization into [0, 1]; a constant series maps to 0.
std::vector<double> min_max_normalize(const std::vector<double>& values);

// "step,return,normalized" rows.
std::string curve_csv(const std::vector<std::pair<std::int64_t, double>>& points);

}  // namespace airhockey::harness
