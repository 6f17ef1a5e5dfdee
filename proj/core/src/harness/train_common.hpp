#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "airhockey/data/dataset.hpp"
#include "airhockey/harness/train.hpp"
#include "airhockey/nn/policy_io.hpp"

namespace airhockey::harness::detail {

std::string fmt_double(double v);

// Per-seed metrics CSV. Empty cells mean "not measured at this row".
class MetricsLog {
 public:
  explicit MetricsLog(std::vector<std::string> loss_names);

  void row(std::int64_t step, std::optional<double> episodic_return,
           std::optional<double> success_rate, std::optional<double> eval_success,
           const std::vector<double>& losses);
  std::string csv() const { return text_; }

 private:
  std::size_t n_losses_;
  std::string text_;
};

// Rolling statistics of finished training episodes between log rows.
struct EpisodeStats {
  int episodes = 0;
  int successes = 0;
  double return_sum = 0.0;

  void add(double ret, bool success);
  std::optional<double> mean_return() const;
  std::optional<double> success_rate() const;
};

struct SeedContext {
  const RunConfig& config;
  std::uint64_t seed;
  const ProgressFn& progress;
  const data::Dataset* dataset = nullptr;  // offline algorithms
};

struct SeedOutcome {
  nn::PolicyFile policy;
  std::int64_t steps = 0;
  bool early_stopped = false;
  std::string metrics_csv;
  std::vector<std::pair<std::int64_t, double>> curve;
};

nn::PolicyFile make_policy_file(const RunConfig& config, const nn::GaussianPolicy& policy);

// Greedy success rate on the periodic-evaluation stream of `seed`.
SeedResult periodic_eval(const RunConfig& config, const nn::PolicyFile& policy,
                         std::uint64_t seed);

// True when [prev, now) crossed a multiple of `every`.
bool crossed(std::int64_t prev, std::int64_t now, std::int64_t every);

SeedOutcome train_ppo_seed(const SeedContext& ctx);
SeedOutcome train_sac_her_seed(const SeedContext& ctx);
SeedOutcome train_offline_seed(const SeedContext& ctx);

}  // namespace airhockey::harness::detail
