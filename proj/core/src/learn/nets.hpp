#pragma once

#include <vector>

#include "airhockey/nn/adam.hpp"
#include "airhockey/nn/mlp.hpp"

namespace airhockey::learn::detail {

inline std::vector<int> net_dims(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> dims = {in};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(out);
  return dims;
}

// One Adam step of a scalar network on mean squared error; returns the loss
// before the step.
inline double regress(nn::MlpParams& net, nn::AdamState& opt,
                      const nn::Matrix& input, const Eigen::RowVectorXd& target) {
  nn::MlpCache cache;
  const nn::Matrix pred = nn::mlp_forward(net, input, &cache);
  const Eigen::RowVectorXd err = pred.row(0) - target;
  const auto n = static_cast<double>(input.cols());
  const nn::Matrix up = (2.0 / n) * err;
  nn::adam_step(opt, net, nn::mlp_backward(net, cache, up).params);
  return err.squaredNorm() / n;
}

}  // namespace airhockey::learn::detail
