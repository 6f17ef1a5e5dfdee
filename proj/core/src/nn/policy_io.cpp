#include "airhockey/nn/policy_io.hpp"

#include "airhockey/error.hpp"
#include "airhockey/io.hpp"

namespace airhockey::nn {
namespace {

Json row_major(const Matrix& m) {
  Json a = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) a.push_back(m(r, c));
  }
  return a;
}

Json to_array(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vector vector_from(const Json& j, Eigen::Index expected, const std::string& what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != expected) {
    throw Error(what + ": expected " + std::to_string(expected) + " values");
  }
  Vector v(expected);
  for (Eigen::Index i = 0; i < expected; ++i) v[i] = j[static_cast<std::size_t>(i)].get<double>();
  return v;
}

}  // namespace

Json to_json(const PolicyFile& file) {
  const GaussianPolicy& p = file.policy;
  Json j;
  j["version"] = kPolicyFormatVersion;
  j["kind"] = file.kind;
  j["task_id"] = file.task_id;
  j["algorithm"] = file.algorithm;
  j["layer_dims"] = p.net.layer_dims;
  j["activation"] = to_string(p.net.activation);
  j["weights"] = Json::array();
  j["biases"] = Json::array();
  for (const auto& l : p.net.layers) {
    j["weights"].push_back(row_major(l.weight));
    j["biases"].push_back(to_array(l.bias));
  }
  j["state_dependent_std"] = p.state_dependent_std;
  j["squash"] = p.squash;
  j["log_std"] = to_array(p.log_std);
  j["obs_layout"] = file.obs_layout;
  j["action_scale"] = file.action_scale;
  return j;
}

PolicyFile policy_file_from_json(const Json& j) {
  const int version = j.at("version").get<int>();
  if (version != kPolicyFormatVersion) {
    throw Error("unsupported policy version " + std::to_string(version));
  }
  PolicyFile f;
  f.kind = j.at("kind").get<std::string>();
  if (f.kind != "gaussian_mlp") throw Error("unsupported policy kind '" + f.kind + "'");
  f.task_id = j.value("task_id", "");
  f.algorithm = j.value("algorithm", "");
  const auto dims = j.at("layer_dims").get<std::vector<int>>();
  GaussianPolicy& p = f.policy;
  p.net = zero_mlp(dims);
  p.net.activation = activation_from_string(j.at("activation").get<std::string>());
  const Json& weights = j.at("weights");
  const Json& biases = j.at("biases");
  if (weights.size() != p.net.layers.size() || biases.size() != p.net.layers.size()) {
    throw Error("policy has the wrong number of layers for layer_dims");
  }
  for (std::size_t l = 0; l < p.net.layers.size(); ++l) {
    Layer& layer = p.net.layers[l];
    const Vector w = vector_from(weights[l], layer.weight.size(),
                                 "weights[" + std::to_string(l) + "]");
    for (Eigen::Index r = 0, k = 0; r < layer.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) layer.weight(r, c) = w[k++];
    }
    layer.bias = vector_from(biases[l], layer.bias.size(), "biases[" + std::to_string(l) + "]");
  }
  p.state_dependent_std = j.value("state_dependent_std", false);
  p.squash = j.value("squash", false);
  const Json& log_std = j.at("log_std");
  p.log_std = vector_from(log_std, static_cast<Eigen::Index>(log_std.size()), "log_std");
  if (!p.state_dependent_std && p.log_std.size() != p.action_dim()) {
    throw Error("log_std length disagrees with the action dim");
  }
  p.net.validate();
  f.obs_layout = j.at("obs_layout").get<std::vector<std::string>>();
  if (static_cast<int>(f.obs_layout.size()) != p.obs_dim()) {
    throw Error("obs_layout length disagrees with the input dim");
  }
  f.action_scale = j.at("action_scale").get<double>();
  return f;
}

void save_policy(const std::filesystem::path& path, const PolicyFile& file) {
  write_file_atomic(path, to_json(file).dump(1) + "\n");
}

PolicyFile load_policy(const std::filesystem::path& path) {
  try {
    return policy_file_from_json(Json::parse(read_file(path)));
  } catch (const Json::exception& e) {
    throw Error("malformed policy file " + path.string() + ": " + e.what());
  }
}

Vector policy_action(const PolicyFile& file, const Vector& obs) {
  return file.action_scale * gaussian_mean(file.policy, obs);
}

}  // namespace airhockey::nn
