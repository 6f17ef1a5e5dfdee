#pragma once

#include "airhockey/nn/mlp.hpp"
#include "airhockey/rng.hpp"

namespace airhockey::nn {

inline constexpr double kLogStdMin = -5.0;
inline constexpr double kLogStdMax = 2.0;

// Diagonal Gaussian policy. With a state-independent std the network outputs
// the mean only and `log_std` holds one entry per action dimension; otherwise
// the network outputs [mean; log_std]. With `squash`, actions are tanh of the
// Gaussian sample.
struct GaussianPolicy {
  MlpParams net;
  Vector log_std;
  bool state_dependent_std = false;
  bool squash = false;

  int obs_dim() const { return net.input_dim(); }
  int action_dim() const;
  std::size_t num_params() const;
};

GaussianPolicy make_gaussian_policy(int obs_dim, const std::vector<int>& hidden,
                                    int action_dim, Rng& rng,
                                    bool state_dependent_std, bool squash,
                                    double init_log_std = 0.0,
                                    double output_gain = 0.01);

// Batched distribution parameters with what backpropagation needs.
struct GaussianDist {
  Matrix mean;      // act x batch, pre-squash
  Matrix log_std;   // act x batch, clamped
  Matrix std_mask;  // 1 where log_std was inside the clamp range, else 0
  MlpCache cache;
};

GaussianDist gaussian_forward(const GaussianPolicy& policy, const Matrix& obs);

// Gradient over flatten(policy) given dL/dmean and dL/dlog_std per sample.
Vector gaussian_backward(const GaussianPolicy& policy, const GaussianDist& dist,
                         const Matrix& d_mean, const Matrix& d_log_std);

// Network parameters followed by the state-independent log_std (if any).
Vector flatten(const GaussianPolicy& policy);
void unflatten(const Vector& flat, GaussianPolicy& policy);

struct GaussianSample {
  Vector action;      // squashed if the policy squashes
  Vector pre_squash;  // the Gaussian draw
  double logprob = 0.0;
};

// Draws one action; consumes act_dim normals from `rng`.
GaussianSample gaussian_sample(const GaussianPolicy& policy, const Vector& obs,
                               Rng& rng);
// Log density of `action`. Under squash, |a_i| >= 1 throws "action outside
// open interval".
double gaussian_logprob(const GaussianPolicy& policy, const Vector& obs,
                        const Vector& action);
// Entropy of the pre-squash Gaussian.
double gaussian_entropy(const GaussianPolicy& policy, const Vector& obs);
// Deterministic action: the mean, squashed if the policy squashes.
Vector gaussian_mean(const GaussianPolicy& policy, const Vector& obs);

// Per-sample log density of pre-squash values `x` (act x batch) under `dist`.
Eigen::RowVectorXd batch_logprob(const Matrix& x, const GaussianDist& dist);

// log N(x; mean, exp(log_std)) summed over entries of one column.
double normal_logprob(const Vector& x, const Vector& mean, const Vector& log_std);
// sum_i log(1 - tanh(u_i)^2), computed without cancellation.
double tanh_log_det(const Vector& u);

}  // namespace airhockey::nn
