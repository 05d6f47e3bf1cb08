#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rrl/mlp.hpp"

namespace rrl {

// Adam moment estimates; shapes mirror the parameters they optimize.
struct AdamState {
  std::uint64_t step_count = 0;
  std::vector<Matrix> m_weights, v_weights;
  std::vector<std::vector<double>> m_biases, v_biases;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double learning_rate = 1e-3;
};

AdamState make_adam_state(const MlpParams& params, double learning_rate);

// One bias-corrected Adam descent step. Gradient ascent is a descent step
// on the negated gradient (see scale_grads).
void adam_step(MlpParams& params, const MlpGrads& grads, AdamState& state);

void scale_grads(MlpGrads& grads, double factor);
void accumulate_grads(MlpGrads& into, const MlpGrads& from, double factor = 1.0);

// target <- tau * online + (1 - tau) * target
void soft_update(MlpParams& target, const MlpParams& online, double tau);

// Central finite-difference comparison of an analytic gradient against the
// loss functional. Relative error uses max(|analytic|, |fd|, floor) as the
// denominator so near-zero gradients are compared absolutely.
struct GradCheckReport {
  double max_rel_error = 0.0;
  double max_abs_analytic = 0.0;
  double max_abs_fd = 0.0;
  std::vector<double> block_rel_error;  // one entry per weight/bias block
};

GradCheckReport gradient_check(const MlpParams& params, const MlpGrads& analytic,
                               const std::function<double(const MlpParams&)>& loss,
                               double fd_step = 1e-5, double rel_floor = 1e-6);

}  // namespace rrl
