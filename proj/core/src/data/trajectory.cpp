#include "airhockey/data/trajectory.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "airhockey/error.hpp"
#include "airhockey/io.hpp"
#include "airhockey/physics/serialize.hpp"

namespace airhockey::data {
namespace {

constexpr std::array<std::pair<Source, const char*>, 3> kSources = {{
    {Source::kTeleopMouse, "teleop_mouse"},
    {Source::kPolicy, "policy"},
    {Source::kScripted, "scripted"},
}};

std::string sha256_hex(const std::string& data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    char buf[3];
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

Json header_to_json(const TrajectoryHeader& h) {
  Json j;
  j["kind"] = "trajectory";
  j["format_version"] = h.format_version;
  j["task_id"] = env::to_string(h.task_id);
  j["config_hash"] = h.config_hash;
  j["seed"] = h.seed;
  j["obs_dim"] = h.obs_dim;
  j["act_dim"] = h.act_dim;
  j["source"] = to_string(h.source);
  j["participant_id"] = h.participant_id ? Json(*h.participant_id) : Json(nullptr);
  j["goal"] = h.goal ? env::to_json(*h.goal) : Json(nullptr);
  j["config"] = h.config;
  return j;
}

TrajectoryHeader header_from_json(const Json& j) {
  if (j.value("kind", std::string()) != "trajectory") throw Error("not a trajectory header");
  TrajectoryHeader h;
  h.format_version = j.at("format_version").get<int>();
  h.task_id = env::parse_task_id(j.at("task_id").get<std::string>());
  h.config_hash = j.at("config_hash").get<std::string>();
  h.seed = j.at("seed").get<std::uint64_t>();
  h.obs_dim = j.at("obs_dim").get<int>();
  h.act_dim = j.at("act_dim").get<int>();
  h.source = source_from_string(j.at("source").get<std::string>());
  if (const Json& p = j.at("participant_id"); !p.is_null()) h.participant_id = p.get<std::string>();
  if (const Json& g = j.at("goal"); !g.is_null()) h.goal = env::goal_from_json(g);
  h.config = j.at("config");
  return h;
}

Json step_to_json(const StepRecord& s) {
  Json info;
  info["terminated"] = s.terminated;
  info["truncated"] = s.truncated;
  info["success"] = s.success;
  Json comps = Json::object();
  for (const auto& [name, value] : s.components.items()) comps[name] = value;
  info["components"] = std::move(comps);
  info["achieved_goal"] = s.achieved_goal;
  Json j;
  j["obs"] = s.obs;
  j["action"] = s.action;
  j["reward"] = s.reward;
  j["next_obs"] = s.next_obs;
  j["done"] = s.done();
  j["info"] = std::move(info);
  return j;
}

StepRecord step_from_json(const Json& j) {
  StepRecord s;
  s.obs = j.at("obs").get<std::vector<double>>();
  s.action = j.at("action").get<std::vector<double>>();
  s.reward = j.at("reward").get<double>();
  s.next_obs = j.at("next_obs").get<std::vector<double>>();
  const Json& info = j.at("info");
  s.terminated = info.at("terminated").get<bool>();
  s.truncated = info.at("truncated").get<bool>();
  s.success = info.at("success").get<bool>();
  for (const auto& [name, value] : info.at("components").items()) {
    s.components.add(name, value.get<double>());
  }
  s.achieved_goal = info.at("achieved_goal").get<std::vector<double>>();
  if (j.at("done").get<bool>() != s.done()) {
    throw Error("done disagrees with terminated/truncated");
  }
  return s;
}

env::TaskSpec task_spec_of(const TrajectoryHeader& h) {
  return env::task_spec_from_json(h.config.at("task"), env::default_task_spec(h.task_id));
}

}  // namespace

std::string to_string(Source s) {
  for (const auto& [src, name] : kSources) {
    if (src == s) return name;
  }
  return "unknown";
}

Source source_from_string(const std::string& s) {
  for (const auto& [src, name] : kSources) {
    if (s == name) return src;
  }
  throw Error("unknown trajectory source '" + s + "'");
}

Json config_json(const physics::PhysicsParams& physics, const env::TaskSpec& task) {
  Json j;
  j["physics"] = physics::to_json(physics);
  j["task"] = env::to_json(task);
  return j;
}

std::string config_hash(const physics::PhysicsParams& physics, const env::TaskSpec& task) {
  return sha256_hex(config_json(physics, task).dump());
}

void TrajectoryFile::validate() const {
  const TrajectoryHeader& h = header;
  if (h.format_version != kFormatVersion) {
    throw Error("unsupported format_version " + std::to_string(h.format_version));
  }
  if (h.obs_dim < 1 || h.act_dim != env::Env::kActionDim) {
    throw Error("header dims invalid: obs_dim " + std::to_string(h.obs_dim) + ", act_dim " +
                std::to_string(h.act_dim));
  }
  const auto od = static_cast<std::size_t>(h.obs_dim);
  const auto ad = static_cast<std::size_t>(h.act_dim);
  for (std::size_t t = 0; t < steps.size(); ++t) {
    const StepRecord& s = steps[t];
    if (s.obs.size() != od || s.next_obs.size() != od || s.action.size() != ad) {
      throw Error("step " + std::to_string(t) + " dimension mismatch: obs " +
                  std::to_string(s.obs.size()) + ", next_obs " +
                  std::to_string(s.next_obs.size()) + ", action " +
                  std::to_string(s.action.size()) + " (header " + std::to_string(od) +
                  "/" + std::to_string(ad) + ")");
    }
    if (s.done() && t + 1 != steps.size()) {
      throw Error("step " + std::to_string(t) + " is terminal but not last");
    }
    if (s.terminated && s.truncated) {
      throw Error("step " + std::to_string(t) + " is both terminated and truncated");
    }
  }
}

TrajectoryFile start_trajectory(const env::Env& env, Source source, std::uint64_t seed,
                                std::optional<std::string> participant_id) {
  TrajectoryFile f;
  TrajectoryHeader& h = f.header;
  h.task_id = env.task().task_id;
  h.config = config_json(env.physics(), env.task());
  h.config_hash = sha256_hex(h.config.dump());
  h.seed = seed;
  h.obs_dim = env.observation_dim();
  h.source = source;
  h.participant_id = std::move(participant_id);
  h.goal = env.goal();
  f.initial_world = env.world();
  return f;
}

void append_step(TrajectoryFile& file, const env::Observation& obs,
                 const env::Action& action, const env::StepResult& result) {
  StepRecord s;
  s.obs = obs;
  s.action.assign(action.begin(), action.end());
  s.reward = result.reward;
  s.next_obs = result.observation;
  s.terminated = result.info.terminated;
  s.truncated = result.info.truncated;
  s.success = result.info.success;
  s.components = result.info.components;
  s.achieved_goal = result.info.achieved_goal;
  file.steps.push_back(std::move(s));
}

std::string serialize_trajectory(const TrajectoryFile& file) {
  file.validate();
  std::string out = header_to_json(file.header).dump();
  out += '\n';
  out += physics::to_json(file.initial_world).dump();
  out += '\n';
  for (const StepRecord& s : file.steps) {
    out += step_to_json(s).dump();
    out += '\n';
  }
  return out;
}

void write_trajectory(const std::filesystem::path& path, const TrajectoryFile& file) {
  write_file_atomic(path, serialize_trajectory(file));
}

TrajectoryFile read_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  TrajectoryFile f;
  std::string line;
  std::size_t line_no = 0;
  const auto fail = [&](const std::string& what) {
    throw Error("file " + path.string() + " line " + std::to_string(line_no) + ": " + what);
  };
  bool have_header = false, have_world = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      if (in.peek() == std::char_traits<char>::eof()) break;
      fail("empty line");
    }
    try {
      const Json j = Json::parse(line);
      if (!have_header) {
        f.header = header_from_json(j);
        have_header = true;
      } else if (!have_world) {
        f.initial_world = physics::world_from_json(j);
        have_world = true;
      } else {
        f.steps.push_back(step_from_json(j));
      }
    } catch (const Error& e) {
      fail(e.what());
    } catch (const Json::exception& e) {
      fail(e.what());
    }
  }
  if (!have_header) fail("missing header");
  if (!have_world) fail("missing initial world");
  try {
    f.validate();
  } catch (const Error& e) {
    throw Error("file " + path.string() + ": " + e.what());
  }
  return f;
}

env::Env replay_env(const TrajectoryFile& file) {
  const TrajectoryHeader& h = file.header;
  if (sha256_hex(h.config.dump()) != h.config_hash) {
    throw Error("unknown config_hash " + h.config_hash);
  }
  const physics::PhysicsParams physics = physics::physics_from_json(h.config.at("physics"));
  env::Env e(task_spec_of(h), physics, h.seed);
  e.restore(file.initial_world, h.goal);
  if (e.observation_dim() != h.obs_dim) {
    throw Error("header obs_dim " + std::to_string(h.obs_dim) + " does not match task (" +
                std::to_string(e.observation_dim()) + ")");
  }
  return e;
}

std::vector<learn::Transition> to_transitions(const TrajectoryFile& file) {
  const env::TaskSpec spec = task_spec_of(file.header);
  std::vector<learn::Transition> out;
  out.reserve(file.steps.size());
  std::vector<double> prev;
  std::vector<double> desired;
  std::vector<std::string> goal_names;
  if (spec.goal_conditioned) {
    if (!file.header.goal) throw Error("goal-conditioned trajectory without a goal");
    prev = env::achieved_goal(spec, file.initial_world);
    desired = env::goal_vector(spec, *file.header.goal);
    goal_names = env::goal_component_names(spec);
  }
  for (const StepRecord& s : file.steps) {
    learn::Transition t;
    t.obs = s.obs;
    t.action = s.action;
    t.reward = s.reward;
    t.next_obs = s.next_obs;
    t.done = s.terminated;
    t.truncated = s.truncated;
    t.success = s.success;
    if (spec.goal_conditioned) {
      t.prev_achieved_goal = prev;
      t.achieved_goal = s.achieved_goal;
      t.desired_goal = desired;
      t.goal_free_reward = s.components.total_excluding(goal_names);
      prev = s.achieved_goal;
    } else {
      t.goal_free_reward = s.reward;
    }
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace airhockey::data
