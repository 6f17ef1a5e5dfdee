#include "airhockey/nn/adam.hpp"

#include <cmath>

#include "airhockey/error.hpp"

namespace airhockey::nn {

AdamState make_adam(std::size_t num_params, const AdamConfig& config) {
  AdamState s;
  s.m = Vector::Zero(static_cast<Eigen::Index>(num_params));
  s.v = Vector::Zero(static_cast<Eigen::Index>(num_params));
  s.config = config;
  return s;
}

void adam_step(AdamState& state, Vector& params, const Vector& grads) {
  if (params.size() != grads.size() || state.m.size() != params.size()) {
    throw Error("adam shape mismatch: params " + std::to_string(params.size()) +
                ", grads " + std::to_string(grads.size()) + ", state " +
                std::to_string(state.m.size()));
  }
  if (!grads.allFinite()) throw Error("gradient divergence");
  const AdamConfig& c = state.config;
  ++state.step;
  state.m = c.beta1 * state.m + (1.0 - c.beta1) * grads;
  state.v = c.beta2 * state.v + (1.0 - c.beta2) * grads.cwiseProduct(grads);
  const double t = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(c.beta1, t);
  const double bc2 = 1.0 - std::pow(c.beta2, t);
  params.array() -= c.lr * (state.m.array() / bc1) /
                    ((state.v.array() / bc2).sqrt() + c.eps);
}

void adam_step(AdamState& state, MlpParams& params, const MlpParams& grads) {
  Vector flat = flatten(params);
  adam_step(state, flat, flatten(grads));
  unflatten(flat, 0, params);
}

double clip_grad_norm(Vector& grads, double max_norm) {
  const double n = grads.norm();
  if (n > max_norm && n > 0.0) grads *= max_norm / n;
  return n;
}

}  // namespace airhockey::nn
