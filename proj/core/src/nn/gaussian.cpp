#include "airhockey/nn/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "airhockey/error.hpp"

namespace airhockey::nn {
namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5 * ln(2 pi)

double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

}  // namespace

int GaussianPolicy::action_dim() const {
  return state_dependent_std ? net.output_dim() / 2 : net.output_dim();
}

std::size_t GaussianPolicy::num_params() const {
  return net.num_params() +
         (state_dependent_std ? 0 : static_cast<std::size_t>(log_std.size()));
}

GaussianPolicy make_gaussian_policy(int obs_dim, const std::vector<int>& hidden,
                                    int action_dim, Rng& rng,
                                    bool state_dependent_std, bool squash,
                                    double init_log_std, double output_gain) {
  std::vector<int> dims = {obs_dim};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(state_dependent_std ? 2 * action_dim : action_dim);
  GaussianPolicy p;
  p.net = init_mlp(dims, rng, output_gain);
  p.state_dependent_std = state_dependent_std;
  p.squash = squash;
  if (state_dependent_std) {
    p.net.layers.back().bias.tail(action_dim).setConstant(init_log_std);
  } else {
    p.log_std = Vector::Constant(action_dim, init_log_std);
  }
  return p;
}

GaussianDist gaussian_forward(const GaussianPolicy& policy, const Matrix& obs) {
  GaussianDist d;
  const Matrix out = mlp_forward(policy.net, obs, &d.cache);
  const Eigen::Index a = policy.action_dim();
  Matrix raw;
  if (policy.state_dependent_std) {
    d.mean = out.topRows(a);
    raw = out.bottomRows(a);
  } else {
    d.mean = out;
    raw = policy.log_std.replicate(1, obs.cols());
  }
  d.log_std = raw.cwiseMax(kLogStdMin).cwiseMin(kLogStdMax);
  d.std_mask = (raw.array() >= kLogStdMin && raw.array() <= kLogStdMax)
                   .cast<double>()
                   .matrix();
  return d;
}

Vector gaussian_backward(const GaussianPolicy& policy, const GaussianDist& dist,
                         const Matrix& d_mean, const Matrix& d_log_std) {
  const Matrix d_raw = d_log_std.cwiseProduct(dist.std_mask);
  Vector flat(static_cast<Eigen::Index>(policy.num_params()));
  if (policy.state_dependent_std) {
    Matrix upstream(d_mean.rows() * 2, d_mean.cols());
    upstream << d_mean, d_raw;
    flat = flatten(mlp_backward(policy.net, dist.cache, upstream).params);
  } else {
    const auto n = static_cast<Eigen::Index>(policy.net.num_params());
    flat.head(n) = flatten(mlp_backward(policy.net, dist.cache, d_mean).params);
    flat.tail(policy.log_std.size()) = d_raw.rowwise().sum();
  }
  return flat;
}

Vector flatten(const GaussianPolicy& policy) {
  const Vector net = flatten(policy.net);
  if (policy.state_dependent_std) return net;
  Vector flat(net.size() + policy.log_std.size());
  flat << net, policy.log_std;
  return flat;
}

void unflatten(const Vector& flat, GaussianPolicy& policy) {
  if (flat.size() != static_cast<Eigen::Index>(policy.num_params())) {
    throw Error("policy parameter vector has the wrong length");
  }
  const std::size_t k = unflatten(flat, 0, policy.net);
  if (!policy.state_dependent_std) {
    policy.log_std = flat.segment(static_cast<Eigen::Index>(k), policy.log_std.size());
  }
}

Eigen::RowVectorXd batch_logprob(const Matrix& x, const GaussianDist& dist) {
  const Eigen::ArrayXXd z = (x - dist.mean).array() / dist.log_std.array().exp();
  return (-0.5 * z.square() - dist.log_std.array() - kHalfLog2Pi).colwise().sum().matrix();
}

double normal_logprob(const Vector& x, const Vector& mean, const Vector& log_std) {
  const Eigen::ArrayXd z = (x - mean).array() / log_std.array().exp();
  return (-0.5 * z.square() - log_std.array() - kHalfLog2Pi).sum();
}

double tanh_log_det(const Vector& u) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    // log(1 - tanh(u)^2) = 2 (log 2 - u - softplus(-2u))
    sum += 2.0 * (std::numbers::ln2 - u[i] - softplus(-2.0 * u[i]));
  }
  return sum;
}

GaussianSample gaussian_sample(const GaussianPolicy& policy, const Vector& obs,
                               Rng& rng) {
  const GaussianDist d = gaussian_forward(policy, Matrix(obs));
  const Vector mean = d.mean.col(0);
  const Vector log_std = d.log_std.col(0);
  GaussianSample s;
  s.pre_squash.resize(mean.size());
  for (Eigen::Index i = 0; i < mean.size(); ++i) {
    s.pre_squash[i] = mean[i] + std::exp(log_std[i]) * rng.normal();
  }
  s.logprob = normal_logprob(s.pre_squash, mean, log_std);
  if (policy.squash) {
    s.action = s.pre_squash.array().tanh().matrix();
    s.logprob -= tanh_log_det(s.pre_squash);
  } else {
    s.action = s.pre_squash;
  }
  return s;
}

double gaussian_logprob(const GaussianPolicy& policy, const Vector& obs,
                        const Vector& action) {
  if (action.size() != policy.action_dim()) {
    throw Error("action dim mismatch: expected " +
                std::to_string(policy.action_dim()) + ", got " +
                std::to_string(action.size()));
  }
  const GaussianDist d = gaussian_forward(policy, Matrix(obs));
  if (!policy.squash) return normal_logprob(action, d.mean.col(0), d.log_std.col(0));
  if ((action.array().abs() >= 1.0).any()) {
    throw Error("action outside open interval");
  }
  const Vector u = action.array().atanh().matrix();
  return normal_logprob(u, d.mean.col(0), d.log_std.col(0)) - tanh_log_det(u);
}

double gaussian_entropy(const GaussianPolicy& policy, const Vector& obs) {
  const GaussianDist d = gaussian_forward(policy, Matrix(obs));
  return (d.log_std.col(0).array() + 0.5 + kHalfLog2Pi).sum();
}

Vector gaussian_mean(const GaussianPolicy& policy, const Vector& obs) {
  const GaussianDist d = gaussian_forward(policy, Matrix(obs));
  Vector m = d.mean.col(0);
  if (policy.squash) m = m.array().tanh().matrix();
  return m;
}

}  // namespace airhockey::nn
