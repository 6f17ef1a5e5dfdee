// Acceptance runner: one PASS/FAIL line per criterion on stdout, progress on
// stderr, nonzero exit when any criterion fails.
//
//   acceptance --cli <path to airhockey> [--work <dir>] [--only 1,5,7] [--reuse]
//
// The learning sweep (criterion 5) drives the CLI end to end; the table and
// curve criteria inspect that sweep's output directory.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "airhockey/data/replay.hpp"
#include "airhockey/data/trajectory.hpp"
#include "airhockey/env/env.hpp"
#include "airhockey/harness/run_config.hpp"
#include "airhockey/io.hpp"
#include "airhockey/learn/gae.hpp"
#include "airhockey/learn/her.hpp"
#include "airhockey/learn/iql.hpp"
#include "airhockey/physics/dynamics.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using namespace airhockey;
namespace oracle = airhockey::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Options {
  std::string cli;
  fs::path work = "acceptance_work";
  std::set<int> only;
  bool reuse = false;
};

// ------------------------------------------------------------------ physics

Outcome physics_oracle() {
  const auto t0 = Clock::now();
  Rng rng(101);
  double worst_v = 0.0, worst_momentum = 0.0, worst_restitution = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double m = rng.uniform(0.05, 2.0);
    const double r = rng.uniform(0.01, 0.05);
    const double e = rng.uniform(0.0, 1.0);
    const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const physics::Vec2 n{std::cos(angle), std::sin(angle)};  // from b to a
    // Closing speeds along the line of centers: va < vb.
    const double va = rng.uniform(-3.0, 0.5);
    const double vb = va + rng.uniform(0.01, 3.0);
    const physics::BodyState a =
        oracle::disk({n.x * 2 * r, n.y * 2 * r}, {n.x * va, n.y * va}, r, m);
    const physics::BodyState b = oracle::disk({0.0, 0.0}, {n.x * vb, n.y * vb}, r, m);
    const auto [ra, rb] = physics::resolve_disk_collision(a, b, e);
    const auto [oa, ob] = oracle::head_on_oracle(m, va, m, vb, e);
    const double pa = ra.velocity.x * n.x + ra.velocity.y * n.y;
    const double pb = rb.velocity.x * n.x + rb.velocity.y * n.y;
    const double ta = -ra.velocity.x * n.y + ra.velocity.y * n.x;
    const double tb = -rb.velocity.x * n.y + rb.velocity.y * n.x;
    worst_v = std::max({worst_v, std::abs(pa - oa), std::abs(pb - ob), std::abs(ta),
                        std::abs(tb)});
    worst_momentum = std::max(worst_momentum, std::abs(m * (pa + pb) - m * (va + vb)));
    worst_restitution =
        std::max(worst_restitution, std::abs((pa - pb) + e * (va - vb)));
  }

  physics::PhysicsParams p;
  p.puck_damping = 0.0;
  const double expected = -9.81 * std::sin(5.5 * std::numbers::pi / 180.0);
  physics::WorldState w = oracle::single_puck_world(p, {0.2, 0.7}, {0.0, 0.0});
  const int steps = static_cast<int>(std::lround(1.0 / p.control_dt));
  for (int i = 0; i < steps; ++i) w = physics::step_world(w, w.paddle.position, p).world;
  const double slope_err = std::abs(w.puck.velocity.y - expected);

  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = worst_v <= 1e-9 && worst_momentum <= 1e-9 && worst_restitution <= 1e-9 &&
           slope_err <= 1e-6 && secs < 1.0;
  o.detail = "1000 collisions max velocity error " + fmt("%.2e", worst_v) + ", momentum " +
             fmt("%.2e", worst_momentum) + ", restitution " + fmt("%.2e", worst_restitution) +
             "; v_y after 1 s " + fmt("%.9f", w.puck.velocity.y) + " vs " +
             fmt("%.9f", expected) + " (err " + fmt("%.1e", slope_err) + "); " +
             fmt("%.3f", secs) + " s";
  return o;
}

// ------------------------------------------------------------------- replay

Outcome replay_determinism(const Options& opt) {
  const auto t0 = Clock::now();
  const fs::path dir = opt.work / "replay";
  fs::remove_all(dir);
  fs::create_directories(dir);
  int pass = 0, total = 0;
  std::string first_failure;
  for (int t = 0; t < 10; ++t) {
    const auto id = static_cast<env::TaskId>(t);
    for (int k = 0; k < 10; ++k) {
      const std::uint64_t seed = 1000 + static_cast<std::uint64_t>(10 * t + k);
      const data::TrajectoryFile f = oracle::record_episode(id, seed, 1000);
      const fs::path path = dir / (env::to_string(id) + "_" + std::to_string(k) + ".jsonl");
      data::write_trajectory(path, f);
      const data::ReplayReport r = data::verify_replay(path);
      ++total;
      if (r.pass) {
        ++pass;
      } else if (first_failure.empty()) {
        first_failure = path.filename().string() + ": " + r.detail;
      }
    }
  }
  fs::remove_all(dir);
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = pass == 100 && total == 100 && secs < 30.0;
  o.detail = std::to_string(pass) + "/" + std::to_string(total) +
             " episodes replay bit-exact across all 10 tasks; " + fmt("%.2f", secs) + " s";
  if (!first_failure.empty()) o.detail += "; first failure " + first_failure;
  return o;
}

// ---------------------------------------------------------------- gradients

Outcome gradient_fidelity() {
  const auto t0 = Clock::now();
  Rng rng(202);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::vector<int> dims = oracle::random_dims(rng);
    const nn::MlpParams p = oracle::random_net(dims, rng);
    const nn::Matrix x = oracle::random_matrix(dims.front(), 3, rng);
    const nn::Matrix up = oracle::random_matrix(dims.back(), 3, rng);
    worst = std::max(worst, oracle::fd_max_relative_error(p, x, up));
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-4 && secs < 10.0,
          "50 random MLPs, max relative error " + fmt("%.2e", worst) + "; " +
              fmt("%.2f", secs) + " s"};
}

// --------------------------------------------------------------- algorithms

Outcome algorithm_oracles() {
  const auto t0 = Clock::now();
  Rng rng(303);
  int expectile_mismatch = 0;
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform(-100.0, 100.0);
    if (learn::expectile_loss(u, 0.5) != 0.5 * u * u) ++expectile_mismatch;
  }
  // r = (0, 1), V = 0, gamma 0.99, lambda 0.95: A0 = 0.99 * 0.95 * 1, A1 = 1.
  const learn::GaeResult g =
      learn::compute_gae({0.0, 1.0}, {0.0, 0.0, 0.0}, {false, false}, 0.99, 0.95);
  const double gae_err =
      std::max(std::abs(g.advantages[0] - 0.99 * 0.95), std::abs(g.advantages[1] - 1.0));

  const learn::IqlAgent iql = oracle::train_iql_on_chain(21);
  const double iql_err =
      oracle::max_abs_diff(oracle::q_table(iql.q1, iql.q2),
                           oracle::expectile_value_iteration(
                               oracle::chain_iql_config().expectile_tau));
  const learn::SacAgent sac = oracle::train_sac_on_chain(31);
  const double sac_err = oracle::max_abs_diff(oracle::q_table(sac.q1, sac.q2),
                                              oracle::max_value_iteration());
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = expectile_mismatch == 0 && gae_err <= 1e-12 && iql_err <= 0.05 &&
           sac_err <= 0.05 && secs < 120.0;
  o.detail = "expectile(u,0.5) == 0.5u^2 on " + std::to_string(10000 - expectile_mismatch) +
             "/10000 draws; GAE 2-step error " + fmt("%.1e", gae_err) +
             "; chain MDP max |Q - oracle| IQL " + fmt("%.4f", iql_err) + ", SAC " +
             fmt("%.4f", sac_err) + "; " + fmt("%.1f", secs) + " s";
  return o;
}

// ---------------------------------------------------------------------- HER

Outcome her_final_property() {
  env::Env e = env::make_task(env::TaskId::kReach, env::EnvConfig{}, 404);
  Rng rng(404);
  const double eps = e.task().eps_position;
  int ok = 0, total = 0;
  for (int i = 0; i < 500; ++i) {
    const oracle::RandomEpisode ep = oracle::random_episode(e, rng, 1000);
    const std::vector<learn::Transition> out = learn::her_relabel(
        ep.steps, {learn::HerStrategy::kFinal, 1}, e.task(), e.physics().table, rng);
    const learn::Transition& terminal = out.back();
    const double dist = std::hypot(terminal.achieved_goal[0] - terminal.desired_goal[0],
                                   terminal.achieved_goal[1] - terminal.desired_goal[1]);
    ++total;
    if (dist <= eps && terminal.success) ++ok;
  }
  return {ok == total,
          std::to_string(ok) + "/" + std::to_string(total) +
              " relabeled terminal Reach transitions within eps_position of their new goal"};
}

// -------------------------------------------------------------------- sweep

constexpr std::array<std::uint64_t, 3> kSeeds = {0, 1, 2};

std::string shell_quote(const fs::path& p) { return "'" + p.string() + "'"; }

// Runs a CLI command with stdout and stderr appended to `log`.
int run_cli(const Options& opt, const std::string& args, const fs::path& log) {
  const std::string cmd = shell_quote(opt.cli) + " " + args + " >> " + shell_quote(log) + " 2>&1";
  std::cerr << "  $ airhockey " << args << "\n";
  const int rc = std::system(cmd.c_str());
  return rc;
}

std::string capture_cli(const Options& opt, const std::string& args, int& rc) {
  const std::string cmd = shell_quote(opt.cli) + " " + args + " 2>&1";
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    rc = -1;
    return out;
  }
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), static_cast<int>(buf.size()), pipe)) out += buf.data();
  rc = pclose(pipe);
  return out;
}

struct SweepRun {
  std::string name;  // directory under the sweep
  std::string task;
  std::string algorithm;
  std::int64_t steps;
  std::string dataset;  // task whose shared expert data the run uses
};

fs::path sweep_dir(const Options& opt) { return opt.work / "sweep"; }

Json run_config_json(const Options& opt, const SweepRun& r) {
  Json j;
  j["task_id"] = r.task;
  j["algorithm"] = r.algorithm;
  j["total_steps"] = r.steps;
  j["seeds"] = kSeeds;
  j["output_dir"] = (sweep_dir(opt) / r.name).string();
  j["stop_at_success"] = 0.95;
  if (r.algorithm == "ppo") {
    j["eval_every"] = 50000;
  } else {
    j["eval_every"] = 5000;
    j["dataset_dir"] = (sweep_dir(opt) / "data" / r.dataset).string();
  }
  return j;
}

// A finished run whose saved config matches the one requested.
bool reusable(const fs::path& run_dir, const fs::path& config_file) {
  if (!fs::exists(run_dir / "report.json") || !fs::exists(run_dir / "config.json")) {
    return false;
  }
  try {
    const Json want = harness::to_json(harness::load_run_config(config_file));
    const Json have = harness::to_json(harness::load_run_config(run_dir / "config.json"));
    return want == have;
  } catch (const std::exception&) {
    return false;
  }
}

struct SweepResult {
  bool ran = true;
  std::string failure;             // infrastructure failure, empty when fine
  std::map<std::string, double> wall_seconds;  // per training run
};

SweepResult run_sweep(const Options& opt, const std::vector<SweepRun>& runs) {
  SweepResult res;
  const fs::path sweep = sweep_dir(opt);
  const fs::path configs = opt.work / "configs";
  fs::create_directories(sweep);
  fs::create_directories(configs);
  const fs::path log = opt.work / "sweep.log";
  if (!opt.reuse) {
    fs::remove_all(sweep);
    fs::create_directories(sweep);
    fs::remove(log);
  }

  std::set<std::string> collected;
  for (const SweepRun& r : runs) {
    if (!r.dataset.empty() && !collected.count(r.dataset)) {
      // Shared expert data: the seed-0 PPO policy, sampled stochastically.
      const fs::path data = sweep / "data" / r.dataset;
      const std::int64_t n = r.dataset == "Reach" ? 100000 : 200000;
      if (!(opt.reuse && fs::exists(data / "collected"))) {
        fs::remove_all(data);
        const fs::path expert = sweep / ("ppo_" + r.dataset) / "seed_0" / "policy.json";
        const int rc = run_cli(opt,
                               "collect-expert --policy " + shell_quote(expert) + " --steps " +
                                   std::to_string(n) + " --seed 0 --out " + shell_quote(data),
                               log);
        if (rc != 0) {
          res.failure = "collect-expert for " + r.dataset + " failed (see " + log.string() + ")";
          return res;
        }
        write_file_atomic(data / "collected", "");
      }
      collected.insert(r.dataset);
    }
    const fs::path cfg = configs / (r.name + ".json");
    write_file_atomic(cfg, run_config_json(opt, r).dump(2) + "\n");
    const fs::path out = sweep / r.name;
    if (opt.reuse && reusable(out, cfg)) {
      std::cerr << "  reusing " << r.name << "\n";
      continue;
    }
    const auto t0 = Clock::now();
    const int rc = run_cli(opt, "train --config " + shell_quote(cfg), log);
    res.wall_seconds[r.name] = seconds_since(t0);
    std::cerr << "  " << r.name << " done in " << fmt("%.0f", res.wall_seconds[r.name])
              << " s\n";
    if (rc != 0) {
      res.failure = "train " + r.name + " failed (see " + log.string() + ")";
      return res;
    }
  }
  return res;
}

std::vector<SweepRun> sweep_plan() {
  return {
      {"ppo_Reach", "Reach", "ppo", 300000, ""},
      {"ppo_Touch", "Touch", "ppo", 1000000, ""},
      {"ppo_Strike", "Strike", "ppo", 2000000, ""},
      {"ppo_PuckVelocity", "PuckVelocity", "ppo", 2000000, ""},
      {"bc_Reach", "Reach", "bc", 20000, "Reach"},
      {"bc_Touch", "Touch", "bc", 20000, "Touch"},
      {"iql_Touch", "Touch", "iql", 20000, "Touch"},
      {"bc_Strike", "Strike", "bc", 20000, "Strike"},
      {"iql_Strike", "Strike", "iql", 20000, "Strike"},
  };
}

// Per-seed final success rates of a finished run, keyed by seed.
std::map<std::uint64_t, double> seed_rates(const fs::path& run_dir) {
  std::map<std::uint64_t, double> out;
  const Json j = Json::parse(read_file(run_dir / "report.json"));
  for (const Json& s : j.at("per_seed")) {
    out[s.at("seed").get<std::uint64_t>()] = s.at("success_rate").get<double>();
  }
  return out;
}

std::string rates_text(const std::map<std::uint64_t, double>& r) {
  std::string s;
  for (const auto& [seed, v] : r) s += (s.empty() ? "" : "/") + fmt("%.2f", v);
  return s;
}

Outcome learning_reproduction(const Options& opt) {
  const std::vector<SweepRun> plan = sweep_plan();
  const SweepResult sweep = run_sweep(opt, plan);
  if (!sweep.failure.empty()) return {false, sweep.failure};
  const fs::path dir = sweep_dir(opt);
  // Expert data is only an input to the offline runs; --reuse keeps it.
  if (!opt.reuse) fs::remove_all(dir / "data");

  bool pass = true;
  std::vector<std::string> parts;
  const auto all_at_least = [&](const std::string& run, double bar) {
    const auto rates = seed_rates(dir / run);
    int ok = 0;
    for (const auto& [seed, v] : rates) ok += v >= bar ? 1 : 0;
    const bool good = ok == static_cast<int>(kSeeds.size()) && rates.size() == kSeeds.size();
    pass = pass && good;
    parts.push_back(run + " " + rates_text(rates) + " (>= " + fmt("%.1f", bar) + ", " +
                    std::to_string(ok) + "/3)");
  };
  all_at_least("ppo_Reach", 0.9);
  all_at_least("ppo_Touch", 0.9);
  all_at_least("ppo_Strike", 0.8);
  all_at_least("ppo_PuckVelocity", 0.8);
  all_at_least("bc_Reach", 0.7);
  for (const std::string task : {"Touch", "Strike"}) {
    const auto bc = seed_rates(dir / ("bc_" + task));
    const auto iql = seed_rates(dir / ("iql_" + task));
    int ok = 0;
    for (std::uint64_t s : kSeeds) {
      if (bc.count(s) && iql.count(s) && iql.at(s) >= bc.at(s) - 0.1) ++ok;
    }
    pass = pass && ok == 3;
    parts.push_back("iql_" + task + " " + rates_text(iql) + " vs bc " + rates_text(bc) +
                    " (iql >= bc - 0.1, " + std::to_string(ok) + "/3)");
  }
  double longest = 0.0;
  for (const auto& [name, secs] : sweep.wall_seconds) longest = std::max(longest, secs);
  if (longest > 3600.0) pass = false;
  std::string detail;
  for (const auto& p : parts) detail += (detail.empty() ? "" : "; ") + p;
  detail += "; longest training run " + fmt("%.0f", longest) + " s";
  return {pass, detail};
}

// -------------------------------------------------------------------- table

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(' ');
  const auto e = s.find_last_not_of(' ');
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

// Expected cells recomputed from the report files: per (row label, task
// display name) the mean of every per-seed rate, to one decimal.
std::map<std::pair<std::string, std::string>, std::string> expected_cells(const fs::path& dir) {
  const std::map<std::string, std::string> labels = {
      {"bc", "BC"}, {"iql", "IQL"}, {"ppo", "PPO"}, {"sac_her", "SAC+HER"}};
  std::map<std::pair<std::string, std::string>, std::pair<double, int>> acc;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.path().filename() != "report.json") continue;
    const Json j = Json::parse(read_file(entry.path()));
    const std::string task =
        env::display_name(env::parse_task_id(j.at("task_id").get<std::string>()));
    auto& [sum, n] = acc[{labels.at(j.at("algorithm").get<std::string>()), task}];
    for (const Json& s : j.at("per_seed")) {
      sum += s.at("success_rate").get<double>();
      ++n;
    }
  }
  std::map<std::pair<std::string, std::string>, std::string> out;
  for (const auto& [key, v] : acc) out[key] = fmt("%.1f", v.first / v.second);
  return out;
}

// Checks one table rendering (rows of cells, first row the header).
std::string check_table(const std::vector<std::vector<std::string>>& rows,
                        const std::map<std::pair<std::string, std::string>, std::string>& want,
                        int& dashes) {
  static const std::regex one_decimal(R"(^\d+\.\d$)");
  if (rows.size() < 2) return "no data rows";
  const auto& header = rows.front();
  if (header.size() != 11) return "header has " + std::to_string(header.size() - 1) + " task columns";
  for (int t = 0; t < 10; ++t) {
    if (header[static_cast<std::size_t>(t) + 1] != env::display_name(static_cast<env::TaskId>(t))) {
      return "column " + std::to_string(t + 1) + " is '" + header[static_cast<std::size_t>(t) + 1] + "'";
    }
  }
  std::set<std::string> row_labels;
  for (const auto& [key, v] : want) row_labels.insert(key.first);
  if (rows.size() - 1 != row_labels.size()) {
    return std::to_string(rows.size() - 1) + " rows for " + std::to_string(row_labels.size()) +
           " algorithms";
  }
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != 11) return "row '" + row.front() + "' has " + std::to_string(row.size()) + " cells";
    for (std::size_t c = 1; c < row.size(); ++c) {
      const auto it = want.find({row.front(), header[c]});
      const std::string expect = it == want.end() ? "-" : it->second;
      if (row[c] != expect) {
        return row.front() + "/" + header[c] + " is '" + row[c] + "', expected '" + expect + "'";
      }
      if (row[c] == "-") {
        ++dashes;
      } else if (!std::regex_match(row[c], one_decimal)) {
        return "cell '" + row[c] + "' is not a one-decimal rate";
      }
    }
  }
  return "";
}

Outcome table_reporting(const Options& opt) {
  const fs::path dir = sweep_dir(opt);
  if (!fs::exists(dir)) return {false, "no sweep at " + dir.string()};
  const auto want = expected_cells(dir);
  int rc_md = 0, rc_csv = 0;
  const std::string md = capture_cli(opt, "table --runs " + shell_quote(dir), rc_md);
  const std::string csv = capture_cli(opt, "table --runs " + shell_quote(dir) + " --format csv", rc_csv);
  if (rc_md != 0 || rc_csv != 0) return {false, "table verb failed: " + md + csv};

  std::vector<std::vector<std::string>> md_rows, csv_rows;
  for (const std::string& line : split(md, '\n')) {
    if (line.empty() || line.rfind("|---", 0) == 0) continue;
    auto cells = split(line, '|');
    // Leading and trailing pipes give empty first and last fields.
    if (cells.size() < 2) return {false, "malformed markdown line: " + line};
    std::vector<std::string> row;
    for (std::size_t i = 1; i + 1 < cells.size(); ++i) row.push_back(trim(cells[i]));
    md_rows.push_back(row);
  }
  for (const std::string& line : split(csv, '\n')) {
    if (!line.empty()) csv_rows.push_back(split(line, ','));
  }
  if (!csv_rows.empty() && !csv_rows.front().empty()) csv_rows.front().front() = "Method";

  int md_dashes = 0, csv_dashes = 0;
  const std::string md_err = check_table(md_rows, want, md_dashes);
  if (!md_err.empty()) return {false, "markdown: " + md_err};
  const std::string csv_err = check_table(csv_rows, want, csv_dashes);
  if (!csv_err.empty()) return {false, "csv: " + csv_err};
  const bool pass = md_dashes > 0 && md_dashes == csv_dashes;
  return {pass, std::to_string(md_rows.size() - 1) + " rows x 10 task columns in markdown and CSV; " +
                    std::to_string(want.size()) + " cells match pooled report means to one decimal; " +
                    std::to_string(md_dashes) + " missing cells rendered as '-'"};
}

// ------------------------------------------------------------------- curves

Outcome curve_emission(const Options& opt) {
  const fs::path dir = sweep_dir(opt);
  if (!fs::exists(dir)) return {false, "no sweep at " + dir.string()};
  int curves = 0, values = 0;
  std::string bad;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.path().filename() != "curve.csv") continue;
    ++curves;
    const auto lines = split(read_file(entry.path()), '\n');
    if (lines.empty() || lines.front() != "step,return,normalized") {
      bad = entry.path().string() + ": unexpected header";
      break;
    }
    int rows = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      if (lines[i].empty()) continue;
      const auto cells = split(lines[i], ',');
      const double v = cells.size() == 3 ? std::stod(cells[2]) : NAN;
      ++rows;
      ++values;
      if (!(v >= 0.0 && v <= 1.0)) bad = entry.path().string() + " line " + std::to_string(i + 1);
    }
    if (rows == 0) bad = entry.path().string() + ": empty curve";
    if (!bad.empty()) break;
  }
  // Every trained seed of every run has a curve.
  const std::size_t expected = sweep_plan().size() * kSeeds.size();
  const bool pass = bad.empty() && static_cast<std::size_t>(curves) == expected;
  std::string detail = std::to_string(curves) + "/" + std::to_string(expected) +
                       " curve.csv files, " + std::to_string(values) +
                       " normalized values all in [0,1]";
  if (!bad.empty()) detail = "out of range or malformed: " + bad;
  return {pass, detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria runner"};
  Options opt;
  std::vector<int> only;
  std::string work = opt.work.string();
  app.add_option("--cli", opt.cli, "Path to the airhockey executable");
  app.add_option("--work", work, "Scratch directory for the sweep and replay files");
  app.add_option("--only", only, "Comma-separated criterion numbers")->delimiter(',');
  app.add_flag("--reuse", opt.reuse, "Keep finished sweep runs whose config is unchanged");
  CLI11_PARSE(app, argc, argv);
  opt.work = fs::absolute(work);
  opt.only.insert(only.begin(), only.end());
  fs::create_directories(opt.work);

  struct Criterion {
    int id;
    std::string name;
    bool needs_cli;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "physics-oracle", false, physics_oracle},
      {2, "determinism-replay", false, [&] { return replay_determinism(opt); }},
      {3, "gradient-fidelity", false, gradient_fidelity},
      {4, "algorithm-oracles", false, algorithm_oracles},
      {5, "learning-reproduction", true, [&] { return learning_reproduction(opt); }},
      {6, "her-final-property", false, her_final_property},
      {7, "table-reporting", true, [&] { return table_reporting(opt); }},
      {8, "curve-emission", true, [&] { return curve_emission(opt); }},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    if (!opt.only.empty() && !opt.only.count(c.id)) continue;
    std::cerr << "[" << c.id << "] " << c.name << "\n";
    Outcome o;
    if (c.needs_cli && opt.cli.empty()) {
      o = {false, "needs --cli"};
    } else {
      try {
        o = c.run();
      } catch (const std::exception& e) {
        o = {false, std::string("error: ") + e.what()};
      }
    }
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS " : "FAIL ") << c.name << ": " << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
