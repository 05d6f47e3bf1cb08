#include "rrl/agents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rrl {

namespace {

void validate_agent_config(const AgentConfig& c) {
  if (c.state_dim < 1 || c.action_dim < 1 || c.disturbance_dim < 1)
    throw std::invalid_argument("agent: dimensions must be >= 1");
  if (!(c.action_bound > 0.0) || !(c.disturbance_bound > 0.0))
    throw std::invalid_argument("agent: bounds must be > 0");
  if (c.gamma < 0.0 || c.gamma >= 1.0)
    throw std::invalid_argument("agent: gamma must be in [0, 1)");
  if (c.tau < 0.0 || c.tau > 1.0)
    throw std::invalid_argument("agent: tau must be in [0, 1]");
  if (c.eps_norm < 0.0) throw std::invalid_argument("agent: eps_norm must be >= 0");
  if (c.batch_size < 1) throw std::invalid_argument("agent: batch_size must be >= 1");
  if (c.warm_up < 0) throw std::invalid_argument("agent: warm_up must be >= 0");
  for (int h : c.hidden_sizes)
    if (h < 1) throw std::invalid_argument("agent: hidden sizes must be >= 1");
}

std::vector<int> layer_sizes(int in, const std::vector<int>& hidden, int out) {
  std::vector<int> sizes;
  sizes.push_back(in);
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(out);
  return sizes;
}

MlpParams make_actor(const AgentConfig& c, int out_dim, double bound, Rng& rng) {
  return make_mlp(layer_sizes(c.state_dim, c.hidden_sizes, out_dim),
                  HiddenActivation::Tanh, OutputActivation::ScaledTanh, bound, rng,
                  c.actor_final_scale);
}

MlpParams make_critic(const AgentConfig& c, int in_dim, Rng& rng) {
  return make_mlp(layer_sizes(in_dim, c.hidden_sizes, 1), c.critic_hidden,
                  OutputActivation::Linear, 0.0, rng);
}

// Forward-only mean squared TD error: loss_scale * mean (y - Q)^2.
double critic_loss_value(const MlpParams& critic, const Matrix& inputs,
                         std::span<const double> targets, double loss_scale) {
  const Matrix q = mlp_forward(critic, inputs);
  double acc = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double diff = targets[i] - q(i, 0);
    acc += diff * diff;
  }
  return loss_scale * acc / static_cast<double>(targets.size());
}

// One Adam step on the squared TD error with targets held fixed.
double critic_regress(MlpParams& critic, AdamState& opt, const Matrix& inputs,
                      std::span<const double> targets, double loss_scale) {
  ForwardCache cache;
  const Matrix q = mlp_forward(critic, inputs, &cache);
  const auto batch = static_cast<double>(targets.size());
  Matrix upstream(q.rows, 1);
  double acc = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double diff = q(i, 0) - targets[i];
    acc += diff * diff;
    upstream(i, 0) = loss_scale * 2.0 * diff / batch;
  }
  const double loss = loss_scale * acc / batch;
  if (!std::isfinite(loss))
    throw std::runtime_error("critic update: non-finite loss");
  MlpGrads grads;
  mlp_backward(critic, cache, upstream, &grads);
  adam_step(critic, grads, opt);
  return loss;
}

double row_squared_norm(const Matrix& m, std::size_t row) {
  double s = 0.0;
  const double* p = m.row_ptr(row);
  for (std::size_t c = 0; c < m.cols; ++c) s += p[c] * p[c];
  return s;
}

double vector_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

Batch make_batch(const std::vector<Transition>& transitions) {
  if (transitions.empty()) throw std::invalid_argument("make_batch: empty batch");
  const std::size_t b = transitions.size();
  const auto& first = transitions.front();
  Batch batch;
  batch.state = Matrix(b, first.state.size());
  batch.action = Matrix(b, first.action.size());
  batch.disturbance = Matrix(b, first.disturbance.size());
  batch.next_state = Matrix(b, first.next_state.size());
  batch.cost.resize(b);
  batch.terminal.resize(b);
  for (std::size_t i = 0; i < b; ++i) {
    const auto& t = transitions[i];
    if (t.state.size() != batch.state.cols || t.action.size() != batch.action.cols ||
        t.disturbance.size() != batch.disturbance.cols ||
        t.next_state.size() != batch.next_state.cols)
      throw std::invalid_argument("make_batch: inconsistent transition dims");
    std::copy(t.state.begin(), t.state.end(), batch.state.row_ptr(i));
    std::copy(t.action.begin(), t.action.end(), batch.action.row_ptr(i));
    std::copy(t.disturbance.begin(), t.disturbance.end(), batch.disturbance.row_ptr(i));
    std::copy(t.next_state.begin(), t.next_state.end(), batch.next_state.row_ptr(i));
    batch.cost[i] = t.cost;
    batch.terminal[i] = t.terminal ? 1 : 0;
  }
  return batch;
}

double batch_mean(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("batch_mean: empty input");
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

// --------------------------------------------------------------------- Agent

Agent::Agent(AgentConfig cfg) : cfg_(std::move(cfg)) { validate_agent_config(cfg_); }

std::vector<double> Agent::forward_policy(const MlpParams& actor,
                                          std::span<const double> state,
                                          double bound) const {
  if (state.size() != static_cast<std::size_t>(cfg_.state_dim))
    throw std::invalid_argument("agent: state dimension mismatch");
  Matrix in(1, state.size());
  std::copy(state.begin(), state.end(), in.data.begin());
  Matrix out = mlp_forward(actor, in);
  std::vector<double> result(out.data.begin(), out.data.end());
  clamp_vector(result, bound);
  return result;
}

std::vector<double> Agent::select_action(std::span<const double> state,
                                         OuProcess& noise, Rng& rng) const {
  auto a = select_action(state);
  const auto& xi = noise.step(rng);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += xi[i];
  clamp_vector(a, cfg_.action_bound);
  return a;
}

std::vector<double> Agent::select_disturbance(std::span<const double> state,
                                              OuProcess& noise, Rng& rng) const {
  auto w = select_disturbance(state);
  const auto& xi = noise.step(rng);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] += xi[i];
  clamp_vector(w, cfg_.disturbance_bound);
  return w;
}

// -------------------------------------------------------------- MinimaxAgent

MinimaxAgent::MinimaxAgent(const AgentConfig& cfg, Rng& init_rng) : Agent(cfg) {
  user_actor = make_actor(cfg_, cfg_.action_dim, cfg_.action_bound, init_rng);
  adv_actor = make_actor(cfg_, cfg_.disturbance_dim, cfg_.disturbance_bound, init_rng);
  critic1 = make_critic(cfg_, cfg_.state_dim + cfg_.action_dim + cfg_.disturbance_dim,
                        init_rng);
  critic2 = make_critic(cfg_, cfg_.state_dim + cfg_.disturbance_dim, init_rng);
  user_actor_target = user_actor;
  adv_actor_target = adv_actor;
  critic1_target = critic1;
  critic2_target = critic2;
  opt_user = make_adam_state(user_actor, cfg_.lr_user);
  opt_adv = make_adam_state(adv_actor, cfg_.lr_adv);
  opt_critic1 = make_adam_state(critic1, cfg_.lr_critic);
  opt_critic2 = make_adam_state(critic2, cfg_.lr_critic);
}

std::vector<double> MinimaxAgent::select_action(std::span<const double> s) const {
  return forward_policy(user_actor, s, cfg_.action_bound);
}

std::vector<double> MinimaxAgent::select_disturbance(std::span<const double> s) const {
  return forward_policy(adv_actor, s, cfg_.disturbance_bound);
}

std::pair<std::vector<double>, std::vector<double>> MinimaxAgent::compute_td_targets(
    const Batch& batch) const {
  if (batch.size() == 0) throw std::invalid_argument("compute_td_targets: empty batch");
  const Matrix next_action = mlp_forward(user_actor_target, batch.next_state);
  const Matrix next_dist = mlp_forward(adv_actor_target, batch.next_state);
  const Matrix q1n = mlp_forward(critic1_target,
                                 hstack({&batch.next_state, &next_action, &next_dist}));
  const Matrix q2n = mlp_forward(critic2_target, hstack({&batch.next_state, &next_dist}));
  std::vector<double> y1(batch.size()), y2(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const double mask = batch.terminal[i] ? 0.0 : 1.0;
    y1[i] = batch.cost[i] + mask * cfg_.gamma * q1n(i, 0);
    y2[i] = row_squared_norm(batch.disturbance, i) + mask * cfg_.gamma * q2n(i, 0);
  }
  return {std::move(y1), std::move(y2)};
}

std::pair<double, double> MinimaxAgent::critic_update(const Batch& batch) {
  const auto [y1, y2] = compute_td_targets(batch);
  const Matrix x1 = hstack({&batch.state, &batch.action, &batch.disturbance});
  const Matrix x2 = hstack({&batch.state, &batch.disturbance});
  const double l1 = critic_regress(critic1, opt_critic1, x1, y1, 0.5);
  const double l2 = critic_regress(critic2, opt_critic2, x2, y2, 0.5);
  return {l1, l2};
}

double MinimaxAgent::critic1_loss(const Batch& batch) const {
  const auto targets = compute_td_targets(batch);
  return critic_loss_value(critic1, hstack({&batch.state, &batch.action, &batch.disturbance}),
                           targets.first, 0.5);
}

double MinimaxAgent::critic2_loss(const Batch& batch) const {
  const auto targets = compute_td_targets(batch);
  return critic_loss_value(critic2, hstack({&batch.state, &batch.disturbance}),
                           targets.second, 0.5);
}

MinimaxAgent::ActorGradients MinimaxAgent::compute_actor_gradients(
    const Batch& batch) const {
  const auto b = static_cast<double>(batch.size());
  const int n = cfg_.state_dim, m = cfg_.action_dim, d = cfg_.disturbance_dim;

  // batch means over the stored transitions; constants w.r.t. theta and phi
  const Matrix q1_stored =
      mlp_forward(critic1, hstack({&batch.state, &batch.action, &batch.disturbance}));
  const Matrix q2_stored =
      mlp_forward(critic2, hstack({&batch.state, &batch.disturbance}));
  const double m1 = batch_mean(first_column(q1_stored));
  const double m2 = batch_mean(first_column(q2_stored));
  if (!std::isfinite(m1) || !std::isfinite(m2))
    throw std::runtime_error("actor update: non-finite batch mean");
  const double d1 = std::max(m1, cfg_.eps_norm);
  const double d2 = std::max(m2, cfg_.eps_norm);

  ForwardCache cache_user, cache_adv;
  const Matrix pi = mlp_forward(user_actor, batch.state, &cache_user);
  const Matrix mu = mlp_forward(adv_actor, batch.state, &cache_adv);

  // user term: mean Q1(s, pi(s), mu(s)) / d1
  ForwardCache cache_q1;
  const Matrix x1 = hstack({&batch.state, &pi, &mu});
  mlp_forward(critic1, x1, &cache_q1);
  Matrix upstream1(batch.size(), 1, 1.0 / (b * d1));
  const Matrix in_grad1 = mlp_backward(critic1, cache_q1, upstream1, nullptr);
  const Matrix grad_pi = slice_cols(in_grad1, n, n + m);
  const Matrix grad_mu_q1 = slice_cols(in_grad1, n + m, n + m + d);

  // adversary term: mean Q2(s, mu(s)) / d2
  ForwardCache cache_q2;
  const Matrix x2 = hstack({&batch.state, &mu});
  mlp_forward(critic2, x2, &cache_q2);
  Matrix upstream2(batch.size(), 1, 1.0 / (b * d2));
  const Matrix in_grad2 = mlp_backward(critic2, cache_q2, upstream2, nullptr);
  const Matrix grad_mu_q2 = slice_cols(in_grad2, n, n + d);

  ActorGradients out;
  out.m1 = m1;
  out.m2 = m2;
  mlp_backward(user_actor, cache_user, grad_pi, &out.user);

  Matrix grad_mu = grad_mu_q1;
  for (std::size_t i = 0; i < grad_mu.data.size(); ++i)
    grad_mu.data[i] -= grad_mu_q2.data[i];
  mlp_backward(adv_actor, cache_adv, grad_mu, &out.adv);
  return out;
}

double MinimaxAgent::joint_actor_loss(const Batch& batch) const {
  const Matrix q1_stored =
      mlp_forward(critic1, hstack({&batch.state, &batch.action, &batch.disturbance}));
  const Matrix q2_stored =
      mlp_forward(critic2, hstack({&batch.state, &batch.disturbance}));
  const double d1 = std::max(batch_mean(first_column(q1_stored)), cfg_.eps_norm);
  const double d2 = std::max(batch_mean(first_column(q2_stored)), cfg_.eps_norm);

  const Matrix pi = mlp_forward(user_actor, batch.state);
  const Matrix mu = mlp_forward(adv_actor, batch.state);
  const Matrix x1 = hstack({&batch.state, &pi, &mu});
  const Matrix x2 = hstack({&batch.state, &mu});
  const Matrix q1 = mlp_forward(critic1, x1);
  const Matrix q2 = mlp_forward(critic2, x2);
  double acc = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i)
    acc += q1(i, 0) / d1 - q2(i, 0) / d2;
  return acc / static_cast<double>(batch.size());
}

void MinimaxAgent::actor_update(const Batch& batch) {
  ActorGradients g = compute_actor_gradients(batch);
  adam_step(user_actor, g.user, opt_user);   // descend
  scale_grads(g.adv, -1.0);                  // ascend
  adam_step(adv_actor, g.adv, opt_adv);
}

void MinimaxAgent::update_targets() {
  soft_update(user_actor_target, user_actor, cfg_.tau);
  soft_update(adv_actor_target, adv_actor, cfg_.tau);
  soft_update(critic1_target, critic1, cfg_.tau);
  soft_update(critic2_target, critic2, cfg_.tau);
}

TrainStepLog MinimaxAgent::update(const Batch& batch) {
  TrainStepLog log;
  const auto losses = critic_update(batch);
  log.critic1_loss = losses.first;
  log.critic2_loss = losses.second;
  ActorGradients g = compute_actor_gradients(batch);
  log.m1 = g.m1;
  log.m2 = g.m2;
  adam_step(user_actor, g.user, opt_user);
  scale_grads(g.adv, -1.0);
  adam_step(adv_actor, g.adv, opt_adv);
  update_targets();
  log.updated = true;
  return log;
}

std::vector<NamedNet> MinimaxAgent::networks() {
  return {{"user_actor", &user_actor, &user_actor_target, &opt_user},
          {"adv_actor", &adv_actor, &adv_actor_target, &opt_adv},
          {"critic1", &critic1, &critic1_target, &opt_critic1},
          {"critic2", &critic2, &critic2_target, &opt_critic2}};
}

// ----------------------------------------------------------------- DdpgAgent

DdpgAgent::DdpgAgent(const AgentConfig& cfg, Rng& init_rng) : Agent(cfg) {
  actor = make_actor(cfg_, cfg_.action_dim, cfg_.action_bound, init_rng);
  critic = make_critic(cfg_, cfg_.state_dim + cfg_.action_dim, init_rng);
  actor_target = actor;
  critic_target = critic;
  opt_actor = make_adam_state(actor, cfg_.lr_user);
  opt_critic = make_adam_state(critic, cfg_.lr_critic);
}

std::vector<double> DdpgAgent::select_action(std::span<const double> s) const {
  return forward_policy(actor, s, cfg_.action_bound);
}

std::vector<double> DdpgAgent::select_disturbance(std::span<const double>) const {
  return std::vector<double>(cfg_.disturbance_dim, 0.0);
}

std::vector<double> DdpgAgent::compute_td_targets(const Batch& batch) const {
  const Matrix next_action = mlp_forward(actor_target, batch.next_state);
  const Matrix qn = mlp_forward(critic_target, hstack({&batch.next_state, &next_action}));
  std::vector<double> y(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const double mask = batch.terminal[i] ? 0.0 : 1.0;
    y[i] = batch.cost[i] + mask * cfg_.gamma * qn(i, 0);
  }
  return y;
}

double DdpgAgent::critic_update(const Batch& batch) {
  const auto y = compute_td_targets(batch);
  return critic_regress(critic, opt_critic, hstack({&batch.state, &batch.action}), y, 1.0);
}

double DdpgAgent::critic_loss(const Batch& batch) const {
  const auto y = compute_td_targets(batch);
  return critic_loss_value(critic, hstack({&batch.state, &batch.action}), y, 1.0);
}

double DdpgAgent::actor_loss(const Batch& batch) const {
  const Matrix pi = mlp_forward(actor, batch.state);
  const Matrix q = mlp_forward(critic, hstack({&batch.state, &pi}));
  return batch_mean(first_column(q));
}

void DdpgAgent::actor_update(const Batch& batch) {
  const auto b = static_cast<double>(batch.size());
  ForwardCache cache_actor, cache_q;
  const Matrix pi = mlp_forward(actor, batch.state, &cache_actor);
  const Matrix x = hstack({&batch.state, &pi});
  mlp_forward(critic, x, &cache_q);
  Matrix upstream(batch.size(), 1, 1.0 / b);
  const Matrix in_grad = mlp_backward(critic, cache_q, upstream, nullptr);
  const Matrix grad_pi =
      slice_cols(in_grad, cfg_.state_dim, cfg_.state_dim + cfg_.action_dim);
  MlpGrads grads;
  mlp_backward(actor, cache_actor, grad_pi, &grads);
  adam_step(actor, grads, opt_actor);  // descend mean Q
}

void DdpgAgent::update_targets() {
  soft_update(actor_target, actor, cfg_.tau);
  soft_update(critic_target, critic, cfg_.tau);
}

TrainStepLog DdpgAgent::update(const Batch& batch) {
  TrainStepLog log;
  log.critic1_loss = critic_update(batch);
  actor_update(batch);
  update_targets();
  log.updated = true;
  return log;
}

std::vector<NamedNet> DdpgAgent::networks() {
  return {{"actor", &actor, &actor_target, &opt_actor},
          {"critic", &critic, &critic_target, &opt_critic}};
}

// ----------------------------------------------------------------- RarlAgent

RarlAgent::RarlAgent(const AgentConfig& cfg, Rng& init_rng) : Agent(cfg) {
  user_actor = make_actor(cfg_, cfg_.action_dim, cfg_.action_bound, init_rng);
  adv_actor = make_actor(cfg_, cfg_.disturbance_dim, cfg_.disturbance_bound, init_rng);
  critic1 = make_critic(cfg_, cfg_.state_dim + cfg_.action_dim, init_rng);
  critic2 = make_critic(cfg_, cfg_.state_dim + cfg_.disturbance_dim, init_rng);
  user_actor_target = user_actor;
  adv_actor_target = adv_actor;
  critic1_target = critic1;
  critic2_target = critic2;
  opt_user = make_adam_state(user_actor, cfg_.lr_user);
  opt_adv = make_adam_state(adv_actor, cfg_.lr_adv);
  opt_critic1 = make_adam_state(critic1, cfg_.lr_critic);
  opt_critic2 = make_adam_state(critic2, cfg_.lr_critic);
}

std::vector<double> RarlAgent::select_action(std::span<const double> s) const {
  return forward_policy(user_actor, s, cfg_.action_bound);
}

std::vector<double> RarlAgent::select_disturbance(std::span<const double> s) const {
  return forward_policy(adv_actor, s, cfg_.disturbance_bound);
}

std::pair<std::vector<double>, std::vector<double>> RarlAgent::compute_td_targets(
    const Batch& batch) const {
  const Matrix next_action = mlp_forward(user_actor_target, batch.next_state);
  const Matrix next_dist = mlp_forward(adv_actor_target, batch.next_state);
  const Matrix q1n =
      mlp_forward(critic1_target, hstack({&batch.next_state, &next_action}));
  const Matrix q2n = mlp_forward(critic2_target, hstack({&batch.next_state, &next_dist}));
  std::vector<double> y1(batch.size()), y2(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const double mask = batch.terminal[i] ? 0.0 : 1.0;
    y1[i] = batch.cost[i] + mask * cfg_.gamma * q1n(i, 0);
    y2[i] = batch.cost[i] + mask * cfg_.gamma * q2n(i, 0);
  }
  return {std::move(y1), std::move(y2)};
}

std::pair<double, double> RarlAgent::critic_update(const Batch& batch) {
  const auto [y1, y2] = compute_td_targets(batch);
  const double l1 = critic_regress(critic1, opt_critic1,
                                   hstack({&batch.state, &batch.action}), y1, 1.0);
  const double l2 = critic_regress(critic2, opt_critic2,
                                   hstack({&batch.state, &batch.disturbance}), y2, 1.0);
  return {l1, l2};
}

double RarlAgent::critic1_loss(const Batch& batch) const {
  const auto targets = compute_td_targets(batch);
  return critic_loss_value(critic1, hstack({&batch.state, &batch.action}),
                           targets.first, 1.0);
}

double RarlAgent::critic2_loss(const Batch& batch) const {
  const auto targets = compute_td_targets(batch);
  return critic_loss_value(critic2, hstack({&batch.state, &batch.disturbance}),
                           targets.second, 1.0);
}

double RarlAgent::user_actor_loss(const Batch& batch) const {
  const Matrix pi = mlp_forward(user_actor, batch.state);
  const Matrix q = mlp_forward(critic1, hstack({&batch.state, &pi}));
  return batch_mean(first_column(q));
}

double RarlAgent::adv_actor_loss(const Batch& batch) const {
  const Matrix mu = mlp_forward(adv_actor, batch.state);
  const Matrix q = mlp_forward(critic2, hstack({&batch.state, &mu}));
  return batch_mean(first_column(q));
}

void RarlAgent::actor_update(const Batch& batch) {
  const auto b = static_cast<double>(batch.size());
  const int n = cfg_.state_dim;

  ForwardCache cache_user, cache_q1;
  const Matrix pi = mlp_forward(user_actor, batch.state, &cache_user);
  const Matrix x1 = hstack({&batch.state, &pi});
  mlp_forward(critic1, x1, &cache_q1);
  Matrix upstream1(batch.size(), 1, 1.0 / b);
  const Matrix in_grad1 = mlp_backward(critic1, cache_q1, upstream1, nullptr);
  MlpGrads user_grads;
  mlp_backward(user_actor, cache_user,
               slice_cols(in_grad1, n, n + cfg_.action_dim), &user_grads);
  adam_step(user_actor, user_grads, opt_user);  // descend mean Q1

  ForwardCache cache_adv, cache_q2;
  const Matrix mu = mlp_forward(adv_actor, batch.state, &cache_adv);
  const Matrix x2 = hstack({&batch.state, &mu});
  mlp_forward(critic2, x2, &cache_q2);
  Matrix upstream2(batch.size(), 1, 1.0 / b);
  const Matrix in_grad2 = mlp_backward(critic2, cache_q2, upstream2, nullptr);
  MlpGrads adv_grads;
  mlp_backward(adv_actor, cache_adv,
               slice_cols(in_grad2, n, n + cfg_.disturbance_dim), &adv_grads);
  scale_grads(adv_grads, -1.0);  // ascend mean Q2
  adam_step(adv_actor, adv_grads, opt_adv);
}

void RarlAgent::update_targets() {
  soft_update(user_actor_target, user_actor, cfg_.tau);
  soft_update(adv_actor_target, adv_actor, cfg_.tau);
  soft_update(critic1_target, critic1, cfg_.tau);
  soft_update(critic2_target, critic2, cfg_.tau);
}

TrainStepLog RarlAgent::update(const Batch& batch) {
  TrainStepLog log;
  const auto losses = critic_update(batch);
  log.critic1_loss = losses.first;
  log.critic2_loss = losses.second;
  actor_update(batch);
  update_targets();
  log.updated = true;
  return log;
}

std::vector<NamedNet> RarlAgent::networks() {
  return {{"user_actor", &user_actor, &user_actor_target, &opt_user},
          {"adv_actor", &adv_actor, &adv_actor_target, &opt_adv},
          {"critic1", &critic1, &critic1_target, &opt_critic1},
          {"critic2", &critic2, &critic2_target, &opt_critic2}};
}

// ------------------------------------------------------------------ factory

std::unique_ptr<Agent> make_agent(const std::string& algorithm, const AgentConfig& cfg,
                                  Rng& init_rng) {
  if (algorithm == "mmddpg") return std::make_unique<MinimaxAgent>(cfg, init_rng);
  if (algorithm == "ddpg") return std::make_unique<DdpgAgent>(cfg, init_rng);
  if (algorithm == "rarl") return std::make_unique<RarlAgent>(cfg, init_rng);
  throw std::invalid_argument("unknown algorithm: " + algorithm);
}

// --------------------------------------------------------------- train loop

TrainStepResult train_step(Agent& agent, const Environment& env, EnvState& state,
                           ReplayBuffer& buffer, OuProcess& action_noise,
                           OuProcess& disturbance_noise, Rng& noise_rng,
                           Rng& sample_rng) {
  TrainStepResult result;
  const auto obs = env.observe(state);
  const auto a = agent.select_action(obs, action_noise, noise_rng);
  const auto w = agent.has_adversary()
                     ? agent.select_disturbance(obs, disturbance_noise, noise_rng)
                     : std::vector<double>(env.spec().disturbance_dim, 0.0);

  const StepOutcome outcome = env.step(state, a, w);
  if (outcome.fault) {
    result.fault = true;
    return result;
  }
  buffer.store({obs, a, w, outcome.cost, env.observe(outcome.next), outcome.terminal});

  const auto& cfg = agent.config();
  const std::size_t gate =
      std::max(static_cast<std::size_t>(cfg.warm_up), static_cast<std::size_t>(cfg.batch_size));
  if (buffer.size() >= gate) {
    auto sampled = buffer.sample_uniform(static_cast<std::size_t>(cfg.batch_size), sample_rng);
    if (sampled) result.log = agent.update(make_batch(*sampled));
  }
  result.log.disturbance_norm = vector_norm(w);
  result.cost = outcome.cost;
  result.terminal = outcome.terminal;
  state = outcome.next;
  return result;
}

ObjectiveEstimate estimate_objectives(const Agent& agent, const Environment& env,
                                      int episodes, double gamma, Rng& rng) {
  if (episodes < 1) throw std::invalid_argument("estimate_objectives: episodes must be >= 1");
  double j1_sum = 0.0, j2_sum = 0.0;
  for (int ep = 0; ep < episodes; ++ep) {
    EnvState state = env.reset(rng);
    double j1 = 0.0, j2 = 0.0, discount = 1.0;
    while (true) {
      const auto obs = env.observe(state);
      const auto a = agent.select_action(obs);
      const auto w = agent.has_adversary()
                         ? agent.select_disturbance(obs)
                         : std::vector<double>(env.spec().disturbance_dim, 0.0);
      const StepOutcome out = env.step(state, a, w);
      if (out.fault) break;
      double wsq = 0.0;
      for (double x : w) wsq += x * x;
      j1 += discount * out.cost;
      j2 += discount * wsq;
      discount *= gamma;
      state = out.next;
      if (out.terminal) break;
    }
    j1_sum += j1;
    j2_sum += j2;
  }
  ObjectiveEstimate est;
  est.j1 = j1_sum / episodes;
  est.j2 = j2_sum / episodes;
  est.ratio = est.j1 / std::max(est.j2, agent.config().eps_norm);
  return est;
}

}  // namespace rrl
