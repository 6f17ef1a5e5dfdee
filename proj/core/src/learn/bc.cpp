#include "airhockey/learn/bc.hpp"

#include <string>

#include "airhockey/error.hpp"

namespace airhockey::learn {
namespace {

void check_dims(const nn::GaussianPolicy& policy, const Matrix& obs,
                const Matrix& actions) {
  if (obs.rows() != policy.obs_dim() || actions.rows() != policy.action_dim() ||
      obs.cols() != actions.cols() || obs.cols() == 0) {
    throw Error("BC batch dim mismatch: obs " + std::to_string(obs.rows()) + "x" +
                std::to_string(obs.cols()) + ", actions " +
                std::to_string(actions.rows()) + "x" +
                std::to_string(actions.cols()) + ", policy " +
                std::to_string(policy.obs_dim()) + "->" +
                std::to_string(policy.action_dim()));
  }
}

Matrix deterministic_action(const nn::GaussianPolicy& policy,
                            const nn::GaussianDist& d) {
  return policy.squash ? Matrix(d.mean.array().tanh()) : d.mean;
}

}  // namespace

double bc_loss(const nn::GaussianPolicy& policy, const Matrix& obs,
               const Matrix& actions) {
  check_dims(policy, obs, actions);
  const nn::GaussianDist d = nn::gaussian_forward(policy, obs);
  return (deterministic_action(policy, d) - actions).squaredNorm() /
         static_cast<double>(obs.cols());
}

Vector bc_gradient(const nn::GaussianPolicy& policy, const Matrix& obs,
                   const Matrix& actions) {
  check_dims(policy, obs, actions);
  const nn::GaussianDist d = nn::gaussian_forward(policy, obs);
  const Matrix mu = deterministic_action(policy, d);
  Matrix d_mean = (2.0 / static_cast<double>(obs.cols())) * (mu - actions);
  if (policy.squash) d_mean.array() *= 1.0 - mu.array().square();
  return nn::gaussian_backward(policy, d, d_mean,
                               Matrix::Zero(d.log_std.rows(), d.log_std.cols()));
}

double bc_update(nn::GaussianPolicy& policy, nn::AdamState& opt,
                 const Matrix& obs, const Matrix& actions) {
  const double loss = bc_loss(policy, obs, actions);
  if (!std::isfinite(loss)) throw Error("BC loss is not finite");
  const Vector grad = bc_gradient(policy, obs, actions);
  Vector flat = nn::flatten(policy);
  nn::adam_step(opt, flat, grad);
  nn::unflatten(flat, policy);
  return loss;
}

}  // namespace airhockey::learn
