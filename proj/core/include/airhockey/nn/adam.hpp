#pragma once

#include <cstdint>

#include "airhockey/nn/mlp.hpp"

namespace airhockey::nn {

struct AdamConfig {
  double lr = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::int64_t step = 0;
  Vector m;
  Vector v;
  AdamConfig config;
};

AdamState make_adam(std::size_t num_params, const AdamConfig& config = {});

// Bias-corrected Adam update of `params` in place. Throws "gradient
// divergence" on a non-finite gradient (params untouched).
void adam_step(AdamState& state, Vector& params, const Vector& grads);

// Convenience overload over a network's flattened parameters.
void adam_step(AdamState& state, MlpParams& params, const MlpParams& grads);

// Rescales `grads` so its L2 norm is at most max_norm; returns the original
// norm.
double clip_grad_norm(Vector& grads, double max_norm);

}  // namespace airhockey::nn
