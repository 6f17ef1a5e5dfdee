#include "airhockey/harness/train.hpp"

#include <algorithm>
#include <cstdio>

#include "airhockey/data/dataset.hpp"
#include "airhockey/error.hpp"
#include "airhockey/io.hpp"
#include "train_common.hpp"

namespace airhockey::harness {
namespace detail {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

MetricsLog::MetricsLog(std::vector<std::string> loss_names)
    : n_losses_(loss_names.size()),
      text_("step,episodic_return,success_rate,eval_success_rate") {
  for (const std::string& n : loss_names) text_ += "," + n;
  text_ += "\n";
}

void MetricsLog::row(std::int64_t step, std::optional<double> episodic_return,
                     std::optional<double> success_rate,
                     std::optional<double> eval_success,
                     const std::vector<double>& losses) {
  auto cell = [](std::optional<double> v) { return v ? fmt_double(*v) : std::string(); };
  text_ += std::to_string(step) + "," + cell(episodic_return) + "," +
           cell(success_rate) + "," + cell(eval_success);
  for (std::size_t i = 0; i < n_losses_; ++i) {
    text_ += ",";
    if (i < losses.size()) text_ += fmt_double(losses[i]);
  }
  text_ += "\n";
}

void EpisodeStats::add(double ret, bool success) {
  ++episodes;
  successes += success ? 1 : 0;
  return_sum += ret;
}

std::optional<double> EpisodeStats::mean_return() const {
  if (episodes == 0) return std::nullopt;
  return return_sum / episodes;
}

std::optional<double> EpisodeStats::success_rate() const {
  if (episodes == 0) return std::nullopt;
  return static_cast<double>(successes) / episodes;
}

nn::PolicyFile make_policy_file(const RunConfig& config, const nn::GaussianPolicy& policy) {
  nn::PolicyFile f;
  f.task_id = env::to_string(config.task_id);
  f.algorithm = to_string(config.algorithm);
  f.policy = policy;
  f.obs_layout = env::observation_layout(config.task);
  return f;
}

SeedResult periodic_eval(const RunConfig& config, const nn::PolicyFile& policy,
                         std::uint64_t seed) {
  return evaluate(policy, config.task_id, config.env_config(), config.n_eval_episodes,
                  {seed + kPeriodicEvalSeedOffset})
      .per_seed.front();
}

bool crossed(std::int64_t prev, std::int64_t now, std::int64_t every) {
  return now / every > prev / every;
}

}  // namespace detail

std::vector<double> min_max_normalize(const std::vector<double>& values) {
  std::vector<double> out(values.size(), 0.0);
  if (values.empty()) return out;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) return out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = std::clamp((values[i] - *lo) / range, 0.0, 1.0);
  }
  return out;
}

std::string curve_csv(const std::vector<std::pair<std::int64_t, double>>& points) {
  std::vector<double> raw;
  raw.reserve(points.size());
  for (const auto& p : points) raw.push_back(p.second);
  const std::vector<double> norm = min_max_normalize(raw);
  std::string text = "step,return,normalized\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    text += std::to_string(points[i].first) + "," + detail::fmt_double(raw[i]) + "," +
            detail::fmt_double(norm[i]) + "\n";
  }
  return text;
}

TrainSummary train(const RunConfig& config, const ProgressFn& progress) {
  config.validate();
  std::optional<data::Dataset> dataset;
  if (is_offline(config.algorithm)) {
    if (config.dataset_dir.empty()) {
      throw Error(to_string(config.algorithm) + " needs dataset_dir");
    }
    dataset = data::read_dataset(config.dataset_dir, config.task_id);
    if (dataset->transitions.empty()) {
      throw Error("empty dataset: no " + env::to_string(config.task_id) +
                  " transitions in " + config.dataset_dir.string());
    }
    if (dataset->obs_dim != env::observation_dim(config.task)) {
      throw Error("dataset obs_dim " + std::to_string(dataset->obs_dim) +
                  " does not match the task's " +
                  std::to_string(env::observation_dim(config.task)));
    }
  }

  const std::filesystem::path& out = config.output_dir;
  save_run_config(out / "config.json", config);

  TrainSummary summary;
  summary.report.task_id = config.task_id;
  summary.report.algorithm = to_string(config.algorithm);
  summary.report.policy_file = "seed_<seed>/policy.json";
  double rate_sum = 0.0;
  for (std::uint64_t seed : config.seeds) {
    const detail::SeedContext ctx{config, seed, progress, dataset ? &*dataset : nullptr};
    detail::SeedOutcome o;
    switch (config.algorithm) {
      case Algorithm::kPpo: o = detail::train_ppo_seed(ctx); break;
      case Algorithm::kSacHer: o = detail::train_sac_her_seed(ctx); break;
      case Algorithm::kBc:
      case Algorithm::kIql: o = detail::train_offline_seed(ctx); break;
    }
    const std::filesystem::path dir = out / ("seed_" + std::to_string(seed));
    SeedRun run;
    run.seed = seed;
    run.policy_path = dir / "policy.json";
    run.steps = o.steps;
    run.early_stopped = o.early_stopped;
    nn::save_policy(run.policy_path, o.policy);
    write_file_atomic(dir / "metrics.csv", o.metrics_csv);
    write_file_atomic(dir / "curve.csv", curve_csv(o.curve));

    const EvalReport final = evaluate(o.policy, config.task_id, config.env_config(),
                                      config.n_eval_episodes,
                                      {seed + kFinalEvalSeedOffset});
    run.final_eval = final.per_seed.front();
    run.final_eval.seed = seed;
    summary.report.per_seed.push_back(run.final_eval);
    summary.report.episodes += run.final_eval.episodes;
    rate_sum += run.final_eval.success_rate;
    if (progress) {
      progress("seed " + std::to_string(seed) + ": " + std::to_string(o.steps) +
               " steps, final success " + detail::fmt_double(run.final_eval.success_rate));
    }
    summary.seeds.push_back(std::move(run));
  }
  summary.report.mean = rate_sum / static_cast<double>(config.seeds.size());

  Json report = to_json(summary.report);
  Json runs = Json::array();
  for (const SeedRun& r : summary.seeds) {
    runs.push_back({{"seed", r.seed},
                    {"policy_file", std::filesystem::relative(r.policy_path, out).generic_string()},
                    {"steps", r.steps},
                    {"early_stopped", r.early_stopped}});
  }
  report["runs"] = std::move(runs);
  write_file_atomic(out / "report.json", report.dump(2) + "\n");
  return summary;
}

}  // namespace airhockey::harness
