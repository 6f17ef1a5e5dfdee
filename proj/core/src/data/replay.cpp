#include "airhockey/data/replay.hpp"

#include <algorithm>
#include <cmath>

#include "airhockey/error.hpp"

namespace airhockey::data {
namespace {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

Json to_json(const ReplayReport& r) {
  Json j;
  j["verdict"] = r.pass ? "PASS" : "FAIL";
  j["steps"] = r.steps;
  j["first_divergent_step"] =
      r.first_divergent_step ? Json(*r.first_divergent_step) : Json(nullptr);
  j["max_obs_deviation"] = r.max_obs_deviation;
  j["max_reward_deviation"] = r.max_reward_deviation;
  j["detail"] = r.detail;
  return j;
}

ReplayReport verify_replay(const TrajectoryFile& file) {
  env::Env e = replay_env(file);
  ReplayReport r;
  r.steps = file.steps.size();
  const auto diverge = [&](std::size_t t, const std::string& what) {
    if (!r.first_divergent_step) {
      r.first_divergent_step = t;
      r.detail = "step " + std::to_string(t) + ": " + what;
    }
  };
  for (std::size_t t = 0; t < file.steps.size(); ++t) {
    const StepRecord& s = file.steps[t];
    const double d_obs = max_abs_diff(e.observation(), s.obs);
    r.max_obs_deviation = std::max(r.max_obs_deviation, d_obs);
    if (e.observation() != s.obs) diverge(t, "observation differs");
    if (e.done()) {
      diverge(t, "replay ended before the recording");
      break;
    }
    const env::StepResult res = e.step({s.action[0], s.action[1]});
    r.max_reward_deviation = std::max(r.max_reward_deviation, std::abs(res.reward - s.reward));
    r.max_obs_deviation = std::max(r.max_obs_deviation, max_abs_diff(res.observation, s.next_obs));
    if (res.reward != s.reward) diverge(t, "reward differs");
    if (res.observation != s.next_obs) diverge(t, "next observation differs");
    if (res.info.terminated != s.terminated || res.info.truncated != s.truncated) {
      diverge(t, "terminal flags differ");
    }
  }
  r.pass = !r.first_divergent_step;
  return r;
}

ReplayReport verify_replay(const std::filesystem::path& path) {
  return verify_replay(read_trajectory(path));
}

}  // namespace airhockey::data
