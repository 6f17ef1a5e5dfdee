#pragma once

#include "airhockey/nn/adam.hpp"
#include "airhockey/nn/gaussian.hpp"

namespace airhockey::learn {

using nn::Matrix;
using nn::Vector;

// mean_j || mu(s_j) - a_j ||^2, where mu is the policy's deterministic action.
double bc_loss(const nn::GaussianPolicy& policy, const Matrix& obs,
               const Matrix& actions);

// Gradient of bc_loss over flatten(policy).
Vector bc_gradient(const nn::GaussianPolicy& policy, const Matrix& obs,
                   const Matrix& actions);

// One Adam step on bc_loss; returns the loss before the step.
double bc_update(nn::GaussianPolicy& policy, nn::AdamState& opt,
                 const Matrix& obs, const Matrix& actions);

}  // namespace airhockey::learn
