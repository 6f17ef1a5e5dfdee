#pragma once

#include <vector>

namespace airhockey::learn {

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;
};

// Generalized advantage estimation over one rollout of length T.
// `values` has T + 1 entries: the last one bootstraps past the rollout end.
// A step with dones[t] = true does not bootstrap from values[t + 1].
GaeResult compute_gae(const std::vector<double>& rewards,
                      const std::vector<double>& values,
                      const std::vector<bool>& dones, double gamma, double lam);

// |tau - 1{u < 0}| * u^2
double expectile_loss(double u, double tau);

}  // namespace airhockey::learn
