// airhockey: command-line front end for training, evaluation, datasets and
// the teleoperation service.
//
// Failures print exactly one line to stderr, "error: <verb>: <message>", and
// exit nonzero (1 for runtime errors, 2 for usage errors).

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "airhockey/data/replay.hpp"
#include "airhockey/env/task.hpp"
#include "airhockey/error.hpp"
#include "airhockey/harness/evaluate.hpp"
#include "airhockey/harness/expert.hpp"
#include "airhockey/harness/report.hpp"
#include "airhockey/harness/run_config.hpp"
#include "airhockey/harness/train.hpp"
#include "airhockey/io.hpp"
#include "airhockey/nn/policy_io.hpp"

#ifdef AIRHOCKEY_WITH_TELEOP
#include "airhockey/teleop/server.hpp"
#endif

namespace fs = std::filesystem;
using namespace airhockey;

namespace {

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

int fail(const std::string& verb, const std::string& message) {
  std::cerr << "error: " << verb << ": " << one_line(message) << "\n";
  return 1;
}

void log_progress(const std::string& line) { std::cerr << line << "\n"; }

// Goal-conditioned tasks are evaluated on one seed, the rest on five.
std::vector<std::uint64_t> default_eval_seeds(env::TaskId task) {
  if (env::is_goal_conditioned(task)) return {0};
  return {0, 1, 2, 3, 4};
}

struct TrainArgs {
  std::string config;
};

int run_train(const TrainArgs& a) {
  const harness::RunConfig config = harness::load_run_config(a.config);
  const harness::TrainSummary s = harness::train(config, log_progress);
  Json out;
  out["output_dir"] = config.output_dir.string();
  out["mean"] = s.report.mean;
  out["per_seed"] = Json::array();
  for (const auto& run : s.seeds) {
    out["per_seed"].push_back({{"seed", run.seed},
                               {"success_rate", run.final_eval.success_rate},
                               {"steps", run.steps},
                               {"early_stopped", run.early_stopped}});
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

struct EvalArgs {
  std::string policy;
  std::string task;
  int episodes = 50;
  std::vector<std::uint64_t> seeds;
  std::string config;
  std::string out;
};

int run_eval(const EvalArgs& a) {
  const env::TaskId task = env::parse_task_id(a.task);
  env::EnvConfig env_config;
  if (!a.config.empty()) env_config = harness::load_run_config(a.config).env_config();
  const std::vector<std::uint64_t> seeds =
      a.seeds.empty() ? default_eval_seeds(task) : a.seeds;
  const harness::EvalReport report =
      harness::evaluate(fs::path(a.policy), task, a.episodes, seeds, env_config);
  const std::string text = harness::to_json(report).dump(2) + "\n";
  if (!a.out.empty()) write_file_atomic(a.out, text);
  std::cout << text;
  return 0;
}

struct TableArgs {
  std::string runs;
  std::string format = "md";
};

int run_table(const TableArgs& a) {
  const std::vector<harness::EvalReport> reports = harness::collect_reports(a.runs);
  if (reports.empty()) throw Error("no report.json found under " + a.runs);
  const harness::ResultsTable t = harness::emit_results_table(reports);
  std::cout << (a.format == "csv" ? t.csv : t.markdown);
  return 0;
}

struct CollectArgs {
  std::string policy;
  std::int64_t steps = 1000000;
  std::string out;
  std::uint64_t seed = 0;
  bool greedy = false;
};

int run_collect(const CollectArgs& a) {
  harness::CollectOptions opts;
  opts.steps = a.steps;
  opts.seed = a.seed;
  opts.stochastic = !a.greedy;
  const harness::CollectSummary s = harness::collect_expert(a.policy, a.out, opts);
  std::cout << Json{{"episodes", s.episodes}, {"steps", s.steps}, {"successes", s.successes}}
                   .dump()
            << "\n";
  return 0;
}

int run_replay_verify(const std::string& file) {
  const data::ReplayReport r = data::verify_replay(fs::path(file));
  std::cout << data::to_json(r).dump() << "\n";
  if (!r.pass) throw Error("FAIL: " + r.detail);
  return 0;
}

struct RelabelArgs {
  std::string in;
  std::string strategy = "future";
  int k = 4;
  std::string out;
  std::uint64_t seed = 0;
};

int run_relabel(const RelabelArgs& a) {
  learn::HerConfig her;
  her.strategy = learn::her_strategy_from_string(a.strategy);
  her.k = a.k;
  const harness::RelabelSummary s = harness::relabel_directory(a.in, a.out, her, a.seed);
  std::cout << Json{{"files", s.files},
                    {"input_transitions", s.input_transitions},
                    {"output_transitions", s.output_transitions}}
                   .dump()
            << "\n";
  return 0;
}

int run_serve(const std::string& config_path) {
#ifdef AIRHOCKEY_WITH_TELEOP
  teleop::TeleopServer server(teleop::load_teleop_config(config_path));
  server.start();
  std::cerr << "serving on port " << server.port() << " (Ctrl-C to stop)\n";
  server.wait();
  return 0;
#else
  (void)config_path;
  throw Error("built without the teleoperation service");
#endif
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Air hockey simulation, learning and teleoperation tools"};
  app.require_subcommand(1);

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train from a run config");
  train_cmd->add_option("--config", train.config, "Run config JSON")->required();

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a saved policy");
  eval_cmd->add_option("--policy", eval.policy, "Policy JSON")->required();
  eval_cmd->add_option("--task", eval.task, "Task id")->required();
  eval_cmd->add_option("--episodes", eval.episodes, "Episodes per seed")
      ->check(CLI::PositiveNumber);
  eval_cmd->add_option("--seeds", eval.seeds, "Comma-separated seeds")->delimiter(',');
  eval_cmd->add_option("--config", eval.config, "Run config supplying physics and task overrides");
  eval_cmd->add_option("--out", eval.out, "Also write the report here");

  TableArgs table;
  auto* table_cmd = app.add_subcommand("table", "Results table over a sweep directory");
  table_cmd->add_option("--runs", table.runs, "Directory searched for report.json")->required();
  table_cmd->add_option("--format", table.format, "md or csv")
      ->check(CLI::IsMember({"md", "csv"}));

  CollectArgs collect;
  auto* collect_cmd = app.add_subcommand("collect-expert", "Record expert rollouts");
  collect_cmd->add_option("--policy", collect.policy, "Policy JSON")->required();
  collect_cmd->add_option("--steps", collect.steps, "Minimum env steps")
      ->check(CLI::PositiveNumber);
  collect_cmd->add_option("--out", collect.out, "Output directory")->required();
  collect_cmd->add_option("--seed", collect.seed, "Env and sampling seed");
  collect_cmd->add_flag("--greedy", collect.greedy, "Use the policy mean instead of sampling");

  std::string replay_file;
  auto* replay_cmd = app.add_subcommand("replay-verify", "Re-simulate a trajectory file");
  replay_cmd->add_option("--file", replay_file, "Trajectory JSONL")->required();

  RelabelArgs relabel;
  auto* relabel_cmd = app.add_subcommand("relabel", "Hindsight-relabel a trajectory directory");
  relabel_cmd->add_option("--in", relabel.in, "Trajectory directory")->required();
  relabel_cmd->add_option("--strategy", relabel.strategy, "final or future")
      ->check(CLI::IsMember({"final", "future"}));
  relabel_cmd->add_option("--k", relabel.k, "Relabeled goals per transition")
      ->check(CLI::PositiveNumber);
  relabel_cmd->add_option("--out", relabel.out, "Output directory")->required();
  relabel_cmd->add_option("--seed", relabel.seed, "Goal sampling seed");

  std::string serve_config;
  auto* serve_cmd = app.add_subcommand("serve-teleop", "Run the teleoperation service");
  serve_cmd->add_option("--config", serve_config, "Teleop config JSON")->required();

  auto* catalog_cmd = app.add_subcommand("catalog", "Print the task catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    const auto subs = app.get_subcommands();
    std::cerr << "error: " << (subs.empty() ? "usage" : subs.front()->get_name()) << ": "
              << one_line(e.what()) << "\n";
    return 2;
  }

  CLI::App* cmd = app.get_subcommands().front();
  const std::string verb = cmd->get_name();
  try {
    if (cmd == train_cmd) return run_train(train);
    if (cmd == eval_cmd) return run_eval(eval);
    if (cmd == table_cmd) return run_table(table);
    if (cmd == collect_cmd) return run_collect(collect);
    if (cmd == replay_cmd) return run_replay_verify(replay_file);
    if (cmd == relabel_cmd) return run_relabel(relabel);
    if (cmd == serve_cmd) return run_serve(serve_config);
    if (cmd == catalog_cmd) {
      std::cout << env::task_catalog().dump(2) << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    return fail(verb, e.what());
  }
  return fail(verb, "unhandled command");
}
