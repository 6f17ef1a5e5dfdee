#include "airhockey/nn/mlp.hpp"

#include <cmath>

#include "airhockey/error.hpp"

namespace airhockey::nn {
namespace {

void check_dims(const std::vector<int>& dims) {
  if (dims.size() < 2) throw Error("an MLP needs at least input and output dims");
  for (int d : dims) {
    if (d < 1) throw Error("layer dims must be positive");
  }
}

}  // namespace

std::string to_string(Activation a) {
  switch (a) {
    case Activation::kTanh:
      return "tanh";
  }
  return "unknown";
}

Activation activation_from_string(const std::string& name) {
  if (name == "tanh") return Activation::kTanh;
  throw Error("unknown activation '" + name + "'");
}

std::size_t MlpParams::num_params() const {
  std::size_t n = 0;
  for (const auto& l : layers) {
    n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
  }
  return n;
}

void MlpParams::validate() const {
  check_dims(layer_dims);
  if (layers.size() + 1 != layer_dims.size()) {
    throw Error("MLP has " + std::to_string(layers.size()) + " layers for " +
                std::to_string(layer_dims.size()) + " dims");
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const Layer& layer = layers[l];
    if (layer.weight.rows() != layer_dims[l + 1] ||
        layer.weight.cols() != layer_dims[l] ||
        layer.bias.size() != layer_dims[l + 1]) {
      throw Error("layer " + std::to_string(l) + " shape disagrees with layer_dims");
    }
    if (!layer.weight.allFinite() || !layer.bias.allFinite()) {
      throw Error("layer " + std::to_string(l) + " has non-finite values");
    }
  }
}

MlpParams zero_mlp(const std::vector<int>& layer_dims) {
  check_dims(layer_dims);
  MlpParams p;
  p.layer_dims = layer_dims;
  for (std::size_t l = 0; l + 1 < layer_dims.size(); ++l) {
    p.layers.push_back({Matrix::Zero(layer_dims[l + 1], layer_dims[l]),
                        Vector::Zero(layer_dims[l + 1])});
  }
  return p;
}

MlpParams init_mlp(const std::vector<int>& layer_dims, Rng& rng,
                   double output_gain) {
  MlpParams p = zero_mlp(layer_dims);
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    Matrix& w = p.layers[l].weight;
    const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
    const double gain = l + 1 == p.layers.size() ? output_gain : 1.0;
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) {
        w(r, c) = gain * rng.uniform(-limit, limit);
      }
    }
  }
  return p;
}

Matrix mlp_forward(const MlpParams& params, const Matrix& input,
                   MlpCache* cache) {
  if (input.rows() != params.input_dim()) {
    throw Error("MLP input dim mismatch: expected " +
                std::to_string(params.input_dim()) + ", got " +
                std::to_string(input.rows()));
  }
  if (cache != nullptr) cache->inputs.clear();
  Matrix x = input;
  const std::size_t n = params.layers.size();
  for (std::size_t l = 0; l < n; ++l) {
    const Layer& layer = params.layers[l];
    Matrix z = layer.weight * x;
    z.colwise() += layer.bias;
    if (cache != nullptr) cache->inputs.push_back(std::move(x));
    if (l + 1 < n) z = z.array().tanh().matrix();
    x = std::move(z);
  }
  return x;
}

Vector mlp_forward(const MlpParams& params, const Vector& input) {
  return mlp_forward(params, Matrix(input), nullptr).col(0);
}

MlpGrad mlp_backward(const MlpParams& params, const MlpCache& cache,
                     const Matrix& upstream) {
  const std::size_t n = params.layers.size();
  if (cache.inputs.size() != n) throw Error("MLP cache does not match the network");
  if (upstream.rows() != params.output_dim() ||
      upstream.cols() != cache.inputs.front().cols()) {
    throw Error("upstream gradient shape mismatch: expected " +
                std::to_string(params.output_dim()) + "x" +
                std::to_string(cache.inputs.front().cols()) + ", got " +
                std::to_string(upstream.rows()) + "x" +
                std::to_string(upstream.cols()));
  }
  MlpGrad g;
  g.params.layer_dims = params.layer_dims;
  g.params.activation = params.activation;
  g.params.layers.resize(n);
  Matrix delta = upstream;  // dL/dz for the current layer
  for (std::size_t i = n; i-- > 0;) {
    const Matrix& x = cache.inputs[i];
    g.params.layers[i].weight.noalias() = delta * x.transpose();
    g.params.layers[i].bias = delta.rowwise().sum();
    Matrix dx = params.layers[i].weight.transpose() * delta;
    if (i > 0) {
      // x = tanh(z_prev), so dz_prev = dx * (1 - x^2).
      dx.array() *= 1.0 - x.array().square();
    }
    delta = std::move(dx);
  }
  g.input = std::move(delta);
  return g;
}

MlpGrad mlp_grad(const MlpParams& params, const Matrix& input,
                 const Matrix& upstream) {
  MlpCache cache;
  mlp_forward(params, input, &cache);
  return mlp_backward(params, cache, upstream);
}

Vector flatten(const MlpParams& params) {
  Vector flat(static_cast<Eigen::Index>(params.num_params()));
  Eigen::Index k = 0;
  for (const auto& l : params.layers) {
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c) flat[k++] = l.weight(r, c);
    }
    flat.segment(k, l.bias.size()) = l.bias;
    k += l.bias.size();
  }
  return flat;
}

std::size_t unflatten(const Vector& flat, std::size_t offset, MlpParams& params) {
  auto k = static_cast<Eigen::Index>(offset);
  if (k + static_cast<Eigen::Index>(params.num_params()) > flat.size()) {
    throw Error("flat parameter vector too short");
  }
  for (auto& l : params.layers) {
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c) l.weight(r, c) = flat[k++];
    }
    l.bias = flat.segment(k, l.bias.size());
    k += l.bias.size();
  }
  return static_cast<std::size_t>(k);
}

void polyak_update(MlpParams& target, const MlpParams& source, double polyak) {
  if (target.layer_dims != source.layer_dims) throw Error("polyak shape mismatch");
  for (std::size_t l = 0; l < target.layers.size(); ++l) {
    target.layers[l].weight = polyak * target.layers[l].weight +
                              (1.0 - polyak) * source.layers[l].weight;
    target.layers[l].bias =
        polyak * target.layers[l].bias + (1.0 - polyak) * source.layers[l].bias;
  }
}

}  // namespace airhockey::nn
