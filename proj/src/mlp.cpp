#include "rrl/mlp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rrl {

namespace {

void apply_hidden(HiddenActivation act, const Matrix& pre, Matrix& post) {
  post = pre;
  switch (act) {
    case HiddenActivation::ReLU:
      for (auto& x : post.data) x = x > 0.0 ? x : 0.0;
      break;
    case HiddenActivation::Tanh:
      for (auto& x : post.data) x = std::tanh(x);
      break;
  }
}

void apply_output(const MlpParams& p, const Matrix& pre, Matrix& post) {
  post = pre;
  if (p.output_activation == OutputActivation::ScaledTanh) {
    for (auto& x : post.data) x = p.output_bound * std::tanh(x);
  }
}

}  // namespace

void check_mlp_shapes(const MlpParams& p) {
  if (p.layer_sizes.size() < 2) throw std::invalid_argument("mlp: need at least input and output layer");
  if (p.weights.size() != p.layer_sizes.size() - 1 || p.biases.size() != p.weights.size())
    throw std::invalid_argument("mlp: layer count mismatch");
  for (std::size_t i = 0; i < p.weights.size(); ++i) {
    const auto out = static_cast<std::size_t>(p.layer_sizes[i + 1]);
    const auto in = static_cast<std::size_t>(p.layer_sizes[i]);
    if (p.weights[i].rows != out || p.weights[i].cols != in)
      throw std::invalid_argument("mlp: weight shape mismatch at layer " + std::to_string(i));
    if (p.biases[i].size() != out)
      throw std::invalid_argument("mlp: bias shape mismatch at layer " + std::to_string(i));
  }
  if (p.output_activation == OutputActivation::ScaledTanh && !(p.output_bound > 0.0))
    throw std::invalid_argument("mlp: ScaledTanh bound must be > 0");
}

MlpParams make_mlp(const std::vector<int>& layer_sizes, HiddenActivation hidden,
                   OutputActivation output, double output_bound, Rng& rng,
                   double final_layer_scale) {
  MlpParams p;
  p.layer_sizes = layer_sizes;
  p.hidden_activation = hidden;
  p.output_activation = output;
  p.output_bound = output_bound;
  for (std::size_t i = 0; i + 1 < layer_sizes.size(); ++i) {
    const std::size_t in = static_cast<std::size_t>(layer_sizes[i]);
    const std::size_t out = static_cast<std::size_t>(layer_sizes[i + 1]);
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    const double scale = (i + 2 == layer_sizes.size()) ? final_layer_scale : 1.0;
    Matrix w(out, in);
    for (auto& x : w.data) x = scale * rng.uniform(-bound, bound);
    std::vector<double> b(out);
    for (auto& x : b) x = scale * rng.uniform(-bound, bound);
    p.weights.push_back(std::move(w));
    p.biases.push_back(std::move(b));
  }
  check_mlp_shapes(p);
  return p;
}

MlpGrads make_zero_grads(const MlpParams& params) {
  MlpGrads g;
  for (std::size_t i = 0; i < params.weights.size(); ++i) {
    g.weights.emplace_back(params.weights[i].rows, params.weights[i].cols);
    g.biases.emplace_back(params.biases[i].size(), 0.0);
  }
  return g;
}

Matrix mlp_forward(const MlpParams& p, const Matrix& inputs, ForwardCache* cache) {
  if (inputs.cols != static_cast<std::size_t>(p.input_dim()))
    throw std::invalid_argument("mlp_forward: input width does not match first layer");
  if (!all_finite(inputs))
    throw std::invalid_argument("mlp_forward: non-finite input");

  if (cache) {
    cache->input = inputs;
    cache->pre.assign(p.num_layers(), Matrix());
    cache->post.assign(p.num_layers(), Matrix());
  }

  Matrix h = inputs;
  for (std::size_t l = 0; l < p.num_layers(); ++l) {
    Matrix z = matmul_abt(h, p.weights[l]);
    const auto& b = p.biases[l];
    for (std::size_t r = 0; r < z.rows; ++r) {
      double* zr = z.row_ptr(r);
      for (std::size_t c = 0; c < z.cols; ++c) zr[c] += b[c];
    }
    Matrix out;
    if (l + 1 == p.num_layers())
      apply_output(p, z, out);
    else
      apply_hidden(p.hidden_activation, z, out);
    if (cache) {
      cache->pre[l] = std::move(z);
      cache->post[l] = out;
    }
    h = std::move(out);
  }
  return h;
}

Matrix mlp_backward(const MlpParams& p, const ForwardCache& cache,
                    const Matrix& upstream, MlpGrads* param_grads) {
  const std::size_t layers = p.num_layers();
  if (cache.pre.size() != layers || cache.post.size() != layers)
    throw std::logic_error("mlp_backward: cache does not match network");
  if (upstream.rows != cache.input.rows ||
      upstream.cols != static_cast<std::size_t>(p.output_dim()))
    throw std::logic_error("mlp_backward: upstream shape mismatch");

  if (param_grads) {
    param_grads->weights.assign(layers, Matrix());
    param_grads->biases.assign(layers, std::vector<double>());
  }

  // delta = dL/dz for the current layer
  Matrix delta = upstream;
  if (p.output_activation == OutputActivation::ScaledTanh) {
    const Matrix& y = cache.post.back();
    const double b = p.output_bound;
    for (std::size_t i = 0; i < delta.data.size(); ++i) {
      const double t = y.data[i] / b;  // tanh(z)
      delta.data[i] *= b * (1.0 - t * t);
    }
  }

  for (std::size_t l = layers; l-- > 0;) {
    const Matrix& layer_in = (l == 0) ? cache.input : cache.post[l - 1];
    if (param_grads) {
      param_grads->weights[l] = matmul_atb(delta, layer_in);
      std::vector<double> bg(delta.cols, 0.0);
      for (std::size_t r = 0; r < delta.rows; ++r) {
        const double* dr = delta.row_ptr(r);
        for (std::size_t c = 0; c < delta.cols; ++c) bg[c] += dr[c];
      }
      param_grads->biases[l] = std::move(bg);
    }
    Matrix prev = matmul(delta, p.weights[l]);  // dL/d(layer input)
    if (l == 0) return prev;

    const Matrix& h = cache.post[l - 1];
    switch (p.hidden_activation) {
      case HiddenActivation::ReLU:
        for (std::size_t i = 0; i < prev.data.size(); ++i)
          if (cache.pre[l - 1].data[i] <= 0.0) prev.data[i] = 0.0;
        break;
      case HiddenActivation::Tanh:
        for (std::size_t i = 0; i < prev.data.size(); ++i)
          prev.data[i] *= 1.0 - h.data[i] * h.data[i];
        break;
    }
    delta = std::move(prev);
  }
  return Matrix();  // unreachable
}

}  // namespace rrl
