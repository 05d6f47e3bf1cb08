#include "rrl/optim.hpp"

#include <cmath>
#include <stdexcept>

namespace rrl {

namespace {

void adam_update_span(double* p, double* m, double* v, const double* g,
                      std::size_t n, const AdamState& s, double corr1, double corr2) {
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = s.beta1 * m[i] + (1.0 - s.beta1) * g[i];
    v[i] = s.beta2 * v[i] + (1.0 - s.beta2) * g[i] * g[i];
    const double mhat = m[i] / corr1;
    const double vhat = v[i] / corr2;
    p[i] -= s.learning_rate * mhat / (std::sqrt(vhat) + s.epsilon);
  }
}

}  // namespace

AdamState make_adam_state(const MlpParams& params, double learning_rate) {
  AdamState s;
  s.learning_rate = learning_rate;
  for (std::size_t i = 0; i < params.weights.size(); ++i) {
    s.m_weights.emplace_back(params.weights[i].rows, params.weights[i].cols);
    s.v_weights.emplace_back(params.weights[i].rows, params.weights[i].cols);
    s.m_biases.emplace_back(params.biases[i].size(), 0.0);
    s.v_biases.emplace_back(params.biases[i].size(), 0.0);
  }
  return s;
}

void adam_step(MlpParams& params, const MlpGrads& grads, AdamState& state) {
  if (grads.weights.size() != params.weights.size() ||
      state.m_weights.size() != params.weights.size())
    throw std::invalid_argument("adam_step: layer count mismatch");
  state.step_count += 1;
  const double corr1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step_count));
  const double corr2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step_count));
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    if (!params.weights[l].same_shape(grads.weights[l]) ||
        params.biases[l].size() != grads.biases[l].size())
      throw std::invalid_argument("adam_step: gradient shape mismatch");
    adam_update_span(params.weights[l].data.data(), state.m_weights[l].data.data(),
                     state.v_weights[l].data.data(), grads.weights[l].data.data(),
                     params.weights[l].size(), state, corr1, corr2);
    adam_update_span(params.biases[l].data(), state.m_biases[l].data(),
                     state.v_biases[l].data(), grads.biases[l].data(),
                     params.biases[l].size(), state, corr1, corr2);
  }
}

void scale_grads(MlpGrads& grads, double factor) {
  for (auto& w : grads.weights)
    for (auto& x : w.data) x *= factor;
  for (auto& b : grads.biases)
    for (auto& x : b) x *= factor;
}

void accumulate_grads(MlpGrads& into, const MlpGrads& from, double factor) {
  if (into.weights.size() != from.weights.size())
    throw std::invalid_argument("accumulate_grads: layer count mismatch");
  for (std::size_t l = 0; l < into.weights.size(); ++l) {
    for (std::size_t i = 0; i < into.weights[l].data.size(); ++i)
      into.weights[l].data[i] += factor * from.weights[l].data[i];
    for (std::size_t i = 0; i < into.biases[l].size(); ++i)
      into.biases[l][i] += factor * from.biases[l][i];
  }
}

void soft_update(MlpParams& target, const MlpParams& online, double tau) {
  if (tau < 0.0 || tau > 1.0) throw std::invalid_argument("soft_update: tau must be in [0, 1]");
  if (target.weights.size() != online.weights.size())
    throw std::invalid_argument("soft_update: layer count mismatch");
  for (std::size_t l = 0; l < target.weights.size(); ++l) {
    if (!target.weights[l].same_shape(online.weights[l]))
      throw std::invalid_argument("soft_update: shape mismatch");
    for (std::size_t i = 0; i < target.weights[l].data.size(); ++i)
      target.weights[l].data[i] =
          tau * online.weights[l].data[i] + (1.0 - tau) * target.weights[l].data[i];
    for (std::size_t i = 0; i < target.biases[l].size(); ++i)
      target.biases[l][i] = tau * online.biases[l][i] + (1.0 - tau) * target.biases[l][i];
  }
}

namespace {

double fd_slope(MlpParams& probe, double& slot,
                const std::function<double(const MlpParams&)>& loss, double h) {
  const double saved = slot;
  slot = saved + h;
  const double up = loss(probe);
  slot = saved - h;
  const double down = loss(probe);
  slot = saved;
  return (up - down) / (2.0 * h);
}

}  // namespace

GradCheckReport gradient_check(const MlpParams& params, const MlpGrads& analytic,
                               const std::function<double(const MlpParams&)>& loss,
                               double fd_step, double rel_floor) {
  GradCheckReport report;
  MlpParams probe = params;
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    double block_max = 0.0;
    for (std::size_t i = 0; i < probe.weights[l].data.size(); ++i) {
      const double fd = fd_slope(probe, probe.weights[l].data[i], loss, fd_step);
      const double an = analytic.weights[l].data[i];
      const double rel = std::fabs(an - fd) / std::max({std::fabs(an), std::fabs(fd), rel_floor});
      block_max = std::max(block_max, rel);
      report.max_abs_analytic = std::max(report.max_abs_analytic, std::fabs(an));
      report.max_abs_fd = std::max(report.max_abs_fd, std::fabs(fd));
    }
    report.block_rel_error.push_back(block_max);
    report.max_rel_error = std::max(report.max_rel_error, block_max);

    block_max = 0.0;
    for (std::size_t i = 0; i < probe.biases[l].size(); ++i) {
      const double fd = fd_slope(probe, probe.biases[l][i], loss, fd_step);
      const double an = analytic.biases[l][i];
      const double rel = std::fabs(an - fd) / std::max({std::fabs(an), std::fabs(fd), rel_floor});
      block_max = std::max(block_max, rel);
      report.max_abs_analytic = std::max(report.max_abs_analytic, std::fabs(an));
      report.max_abs_fd = std::max(report.max_abs_fd, std::fabs(fd));
    }
    report.block_rel_error.push_back(block_max);
    report.max_rel_error = std::max(report.max_rel_error, block_max);
  }
  return report;
}

}  // namespace rrl
