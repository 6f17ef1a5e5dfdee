#include "airhockey/learn/gae.hpp"

#include <cmath>
#include <string>

#include "airhockey/error.hpp"

namespace airhockey::learn {

GaeResult compute_gae(const std::vector<double>& rewards,
                      const std::vector<double>& values,
                      const std::vector<bool>& dones, double gamma, double lam) {
  const std::size_t n = rewards.size();
  if (values.size() != n + 1 || dones.size() != n) {
    throw Error("compute_gae length mismatch: " + std::to_string(n) +
                " rewards, " + std::to_string(values.size()) + " values (need " +
                std::to_string(n + 1) + "), " + std::to_string(dones.size()) +
                " dones");
  }
  GaeResult r;
  r.advantages.assign(n, 0.0);
  r.returns.assign(n, 0.0);
  double next_adv = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    const double live = dones[i] ? 0.0 : 1.0;
    const double delta = rewards[i] + gamma * live * values[i + 1] - values[i];
    next_adv = delta + gamma * lam * live * next_adv;
    r.advantages[i] = next_adv;
    r.returns[i] = next_adv + values[i];
  }
  return r;
}

double expectile_loss(double u, double tau) {
  const double w = u < 0.0 ? 1.0 - tau : tau;
  return w * u * u;
}

}  // namespace airhockey::learn
