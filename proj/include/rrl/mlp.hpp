#pragma once

#include <vector>

#include "rrl/matrix.hpp"
#include "rrl/rng.hpp"

namespace rrl {

enum class HiddenActivation { ReLU, Tanh };
enum class OutputActivation { Linear, ScaledTanh };

// Fully-connected network parameters. weights[i] has shape
// layer_sizes[i+1] x layer_sizes[i]; biases[i] has length layer_sizes[i+1].
struct MlpParams {
  std::vector<int> layer_sizes;
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;
  HiddenActivation hidden_activation = HiddenActivation::Tanh;
  OutputActivation output_activation = OutputActivation::Linear;
  double output_bound = 0.0;  // ScaledTanh range, must be > 0 when used

  int input_dim() const { return layer_sizes.front(); }
  int output_dim() const { return layer_sizes.back(); }
  std::size_t num_layers() const { return weights.size(); }
};

// Per-layer activations captured by a forward pass, consumed by the
// backward pass. `post[l]` is the output of layer l; `post.back()` equals
// the forward result.
struct ForwardCache {
  Matrix input;
  std::vector<Matrix> pre;
  std::vector<Matrix> post;
};

// Gradients with the same shapes as MlpParams.
struct MlpGrads {
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;
};

// Uniform +-1/sqrt(fan_in) initialization. `final_layer_scale` shrinks the
// last layer (1e-3 for actors keeps initial outputs near zero).
MlpParams make_mlp(const std::vector<int>& layer_sizes,
                   HiddenActivation hidden, OutputActivation output,
                   double output_bound, Rng& rng,
                   double final_layer_scale = 1.0);

MlpGrads make_zero_grads(const MlpParams& params);

// Batched forward pass; inputs is batch x input_dim. Throws on shape
// mismatch or non-finite inputs. Pass a cache to enable mlp_backward.
Matrix mlp_forward(const MlpParams& params, const Matrix& inputs,
                   ForwardCache* cache = nullptr);

// Backpropagates sum(upstream ⊙ outputs): fills param_grads (if non-null)
// and returns the gradient w.r.t. the inputs.
Matrix mlp_backward(const MlpParams& params, const ForwardCache& cache,
                    const Matrix& upstream, MlpGrads* param_grads);

void check_mlp_shapes(const MlpParams& params);

}  // namespace rrl
