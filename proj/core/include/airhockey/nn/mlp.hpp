#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "airhockey/rng.hpp"

namespace airhockey::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Activation { kTanh };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& name);

// weight is (out x in); bias has `out` entries.
struct Layer {
  Matrix weight;
  Vector bias;
};

// Fully connected network: affine + activation per hidden layer, linear
// output layer.
struct MlpParams {
  std::vector<int> layer_dims;  // input, hidden..., output
  std::vector<Layer> layers;
  Activation activation = Activation::kTanh;

  int input_dim() const { return layer_dims.front(); }
  int output_dim() const { return layer_dims.back(); }
  std::size_t num_params() const;
  // Throws if shapes disagree with layer_dims or any value is non-finite.
  void validate() const;
};

// Zero-valued parameters with the given shape.
MlpParams zero_mlp(const std::vector<int>& layer_dims);

// Glorot-uniform weights and zero biases; the output layer's weights are
// additionally scaled by `output_gain`.
MlpParams init_mlp(const std::vector<int>& layer_dims, Rng& rng,
                   double output_gain = 1.0);

// Per-layer inputs kept by the forward pass for backpropagation.
struct MlpCache {
  std::vector<Matrix> inputs;  // inputs[l] feeds layer l; columns are samples
};

// Batched forward pass; columns of `input` are samples.
Matrix mlp_forward(const MlpParams& params, const Matrix& input,
                   MlpCache* cache = nullptr);
Vector mlp_forward(const MlpParams& params, const Vector& input);

struct MlpGrad {
  MlpParams params;  // gradient w.r.t. every weight and bias
  Matrix input;      // gradient w.r.t. the input batch
};

// Reverse-mode gradient of sum(upstream .* output) given a cache from
// mlp_forward on the same parameters.
MlpGrad mlp_backward(const MlpParams& params, const MlpCache& cache,
                     const Matrix& upstream);

// Forward + backward in one call.
MlpGrad mlp_grad(const MlpParams& params, const Matrix& input,
                 const Matrix& upstream);

// Parameters as one vector (layer by layer: weight row-major, then bias).
Vector flatten(const MlpParams& params);
// Inverse of flatten starting at `offset`; returns the offset after the read.
std::size_t unflatten(const Vector& flat, std::size_t offset, MlpParams& params);

// target = polyak * target + (1 - polyak) * source.
void polyak_update(MlpParams& target, const MlpParams& source, double polyak);

}  // namespace airhockey::nn
