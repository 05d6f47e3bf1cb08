#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rrl/agents.hpp"
#include "rrl/config.hpp"

using namespace rrl;

namespace {

AgentConfig tiny_cfg(int n = 3, int m = 2, int d = 2) {
  AgentConfig c;
  c.state_dim = n;
  c.action_dim = m;
  c.disturbance_dim = d;
  c.action_bound = 1.0;
  c.disturbance_bound = 1.0;
  c.hidden_sizes = {8, 8};
  c.batch_size = 4;
  c.warm_up = 0;
  return c;
}

// single linear layer emitting a constant value regardless of input
MlpParams constant_net(int in_dim, std::vector<double> out) {
  MlpParams p;
  p.layer_sizes = {in_dim, static_cast<int>(out.size())};
  p.weights = {Matrix(out.size(), in_dim, 0.0)};
  p.biases = {std::move(out)};
  p.output_activation = OutputActivation::Linear;
  return p;
}

Batch random_batch(const AgentConfig& cfg, std::size_t size, Rng& rng,
                   bool all_terminal = false) {
  std::vector<Transition> ts;
  for (std::size_t i = 0; i < size; ++i) {
    Transition t;
    for (int k = 0; k < cfg.state_dim; ++k) t.state.push_back(rng.uniform(-1, 1));
    for (int k = 0; k < cfg.action_dim; ++k)
      t.action.push_back(rng.uniform(-cfg.action_bound, cfg.action_bound));
    for (int k = 0; k < cfg.disturbance_dim; ++k)
      t.disturbance.push_back(rng.uniform(-cfg.disturbance_bound, cfg.disturbance_bound));
    t.cost = rng.uniform(0.1, 2.0);
    for (int k = 0; k < cfg.state_dim; ++k) t.next_state.push_back(rng.uniform(-1, 1));
    t.terminal = all_terminal || rng.uniform() < 0.25;
    ts.push_back(std::move(t));
  }
  return make_batch(ts);
}

bool params_equal(const MlpParams& a, const MlpParams& b) {
  for (std::size_t l = 0; l < a.weights.size(); ++l) {
    if (a.weights[l].data != b.weights[l].data) return false;
    if (a.biases[l] != b.biases[l]) return false;
  }
  return true;
}

double max_rel_err(const MlpGrads& analytic, const MlpGrads& other) {
  double worst = 0.0;
  for (std::size_t l = 0; l < analytic.weights.size(); ++l) {
    for (std::size_t i = 0; i < analytic.weights[l].data.size(); ++i) {
      const double a = analytic.weights[l].data[i], f = other.weights[l].data[i];
      worst = std::max(worst,
                       std::fabs(a - f) / std::max({std::fabs(a), std::fabs(f), 1e-9}));
    }
    for (std::size_t i = 0; i < analytic.biases[l].size(); ++i) {
      const double a = analytic.biases[l][i], f = other.biases[l][i];
      worst = std::max(worst,
                       std::fabs(a - f) / std::max({std::fabs(a), std::fabs(f), 1e-9}));
    }
  }
  return worst;
}

}  // namespace

TEST_SUITE("agents") {

TEST_CASE("deterministic action selection repeats exactly") {
  Rng rng(1);
  MinimaxAgent agent(tiny_cfg(), rng);
  const std::vector<double> s{0.3, -0.2, 0.8};
  CHECK(agent.select_action(s) == agent.select_action(s));
  CHECK(agent.select_disturbance(s) == agent.select_disturbance(s));
}

TEST_CASE("freshly initialized actors emit near-zero outputs") {
  Rng rng(2);
  MinimaxAgent agent(tiny_cfg(), rng);
  Rng state_rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> s(3);
    for (auto& x : s) x = state_rng.uniform(-1, 1);
    const auto a = agent.select_action(s);
    double norm = 0.0;
    for (double x : a) norm += x * x;
    CHECK(std::sqrt(norm) < 0.01 * agent.config().action_bound);
  }
}

TEST_CASE("exploration noise pushing past the bound is clamped to the bound") {
  Rng rng(4);
  MinimaxAgent agent(tiny_cfg(), rng);
  OuProcess noise(2, 0.0, 0.0);
  noise.xi = {10.0, -10.0};  // frozen huge offset (theta = sigma = 0)
  Rng noise_rng(5);
  const auto a = agent.select_action(std::vector<double>{0.1, 0.2, 0.3}, noise, noise_rng);
  CHECK(a[0] == agent.config().action_bound);
  CHECK(a[1] == -agent.config().action_bound);
}

TEST_CASE("td targets: terminal transitions use cost and energy only") {
  Rng rng(6);
  MinimaxAgent agent(tiny_cfg(), rng);
  Rng batch_rng(7);
  const Batch batch = random_batch(agent.config(), 4, batch_rng, true);
  const auto [y1, y2] = agent.compute_td_targets(batch);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    CHECK(y1[i] == batch.cost[i]);
    double wsq = 0.0;
    for (std::size_t c = 0; c < batch.disturbance.cols; ++c)
      wsq += batch.disturbance(i, c) * batch.disturbance(i, c);
    CHECK(y2[i] == wsq);
  }
}

TEST_CASE("td targets: gamma = 0 reduces to cost and energy") {
  AgentConfig cfg = tiny_cfg();
  cfg.gamma = 0.0;
  Rng rng(8);
  MinimaxAgent agent(cfg, rng);
  Rng batch_rng(9);
  const Batch batch = random_batch(cfg, 6, batch_rng);
  const auto [y1, y2] = agent.compute_td_targets(batch);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    CHECK(y1[i] == batch.cost[i]);
    double wsq = 0.0;
    for (std::size_t c = 0; c < batch.disturbance.cols; ++c)
      wsq += batch.disturbance(i, c) * batch.disturbance(i, c);
    CHECK(y2[i] == wsq);
  }
}

TEST_CASE("td targets: constant critics at 2 with c = 1 give y1 = 2.98") {
  AgentConfig cfg = tiny_cfg();
  cfg.gamma = 0.99;
  Rng rng(10);
  MinimaxAgent agent(cfg, rng);
  agent.critic1_target = constant_net(3 + 2 + 2, {2.0});
  agent.critic2_target = constant_net(3 + 2, {2.0});

  std::vector<Transition> ts(1);
  ts[0].state = {0.1, 0.2, 0.3};
  ts[0].action = {0.0, 0.0};
  ts[0].disturbance = {0.0, 0.0};
  ts[0].cost = 1.0;
  ts[0].next_state = {0.4, 0.5, 0.6};
  ts[0].terminal = false;
  const auto [y1, y2] = agent.compute_td_targets(make_batch(ts));
  CHECK(y1[0] == doctest::Approx(2.98).epsilon(1e-14));
  CHECK(y2[0] == doctest::Approx(0.0 + 0.99 * 2.0).epsilon(1e-14));
}

TEST_CASE("critic at the regression fixed point keeps loss zero and params frozen") {
  AgentConfig cfg = tiny_cfg();
  cfg.gamma = 0.0;
  Rng rng(11);
  MinimaxAgent agent(cfg, rng);
  // constant cost 0.25 and ||w||^2 = 0.25; critics already emit 0.25
  agent.critic1 = constant_net(7, {0.25});
  agent.critic2 = constant_net(5, {0.25});
  agent.opt_critic1 = make_adam_state(agent.critic1, cfg.lr_critic);
  agent.opt_critic2 = make_adam_state(agent.critic2, cfg.lr_critic);

  std::vector<Transition> ts(3);
  for (auto& t : ts) {
    t.state = {0.1, -0.2, 0.3};
    t.action = {0.2, 0.1};
    t.disturbance = {0.5, 0.0};
    t.cost = 0.25;
    t.next_state = {0.0, 0.0, 0.0};
    t.terminal = false;
  }
  const MlpParams before1 = agent.critic1, before2 = agent.critic2;
  const auto [l1, l2] = agent.critic_update(make_batch(ts));
  CHECK(l1 == 0.0);
  CHECK(l2 == 0.0);
  CHECK(params_equal(agent.critic1, before1));
  CHECK(params_equal(agent.critic2, before2));
}

TEST_CASE("single-transition critic loss matches the closed form to 1e-12") {
  AgentConfig cfg = tiny_cfg();
  cfg.gamma = 0.0;
  Rng rng(12);
  MinimaxAgent agent(cfg, rng);
  agent.critic1 = constant_net(7, {0.3});
  agent.critic2 = constant_net(5, {0.3});

  std::vector<Transition> ts(1);
  ts[0].state = {0.0, 0.0, 0.0};
  ts[0].action = {0.0, 0.0};
  ts[0].disturbance = {0.6, 0.8};  // ||w||^2 = 1
  ts[0].cost = 1.7;
  ts[0].next_state = {0.0, 0.0, 0.0};
  ts[0].terminal = false;
  const Batch batch = make_batch(ts);
  CHECK(std::fabs(agent.critic1_loss(batch) - 0.5 * (1.7 - 0.3) * (1.7 - 0.3)) < 1e-12);
  CHECK(std::fabs(agent.critic2_loss(batch) - 0.5 * (1.0 - 0.3) * (1.0 - 0.3)) < 1e-12);
}

TEST_CASE("batch_mean: constants, small list, and random summation oracle") {
  CHECK(batch_mean(std::vector<double>{5, 5, 5}) == 5.0);
  CHECK(batch_mean(std::vector<double>{1, 2, 3}) == 2.0);
  Rng rng(13);
  std::vector<double> values(257);
  for (auto& v : values) v = rng.uniform(-10, 10);
  double acc = 0.0;
  for (double v : values) acc += v;
  CHECK(std::fabs(batch_mean(values) - acc / 257.0) < 1e-12);
  CHECK_THROWS_AS(batch_mean(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("critic1 blind to its action input leaves the user actor untouched") {
  Rng rng(14);
  MinimaxAgent agent(tiny_cfg(), rng);
  // zero the first-layer weight columns that read the action
  for (std::size_t r = 0; r < agent.critic1.weights[0].rows; ++r)
    for (int c = 3; c < 5; ++c) agent.critic1.weights[0](r, c) = 0.0;
  Rng batch_rng(15);
  const Batch batch = random_batch(agent.config(), 4, batch_rng);
  const MlpParams before = agent.user_actor;
  agent.actor_update(batch);
  CHECK(params_equal(agent.user_actor, before));
}

TEST_CASE("batch size 1 collapses to the single-sample normalized gradient") {
  Rng rng(16);
  MinimaxAgent agent(tiny_cfg(), rng);
  Rng batch_rng(17);
  const Batch batch = random_batch(agent.config(), 1, batch_rng);
  const auto grads = agent.compute_actor_gradients(batch);

  // independent single-sample chain: d Q1(s, pi(s), mu(s)) / d theta divided
  // by the normalization constant
  const Matrix q1 = mlp_forward(
      agent.critic1, hstack({&batch.state, &batch.action, &batch.disturbance}));
  const double denom = std::max(q1(0, 0), agent.config().eps_norm);

  ForwardCache cache_user, cache_q;
  const Matrix pi = mlp_forward(agent.user_actor, batch.state, &cache_user);
  const Matrix mu = mlp_forward(agent.adv_actor, batch.state);
  const Matrix x = hstack({&batch.state, &pi, &mu});
  mlp_forward(agent.critic1, x, &cache_q);
  Matrix upstream(1, 1, 1.0);
  const Matrix in_grad = mlp_backward(agent.critic1, cache_q, upstream, nullptr);
  MlpGrads unnormalized;
  mlp_backward(agent.user_actor, cache_user, slice_cols(in_grad, 3, 5), &unnormalized);
  scale_grads(unnormalized, 1.0 / denom);

  CHECK(max_rel_err(grads.user, unnormalized) < 1e-12);
  CHECK(grads.m1 == q1(0, 0));
}

TEST_CASE("normalized theta-gradient equals unnormalized gradient over the batch mean") {
  Rng rng(18);
  MinimaxAgent agent(tiny_cfg(), rng);
  Rng batch_rng(19);
  const Batch batch = random_batch(agent.config(), 4, batch_rng);
  const auto grads = agent.compute_actor_gradients(batch);
  const double denom = std::max(grads.m1, agent.config().eps_norm);

  // unnormalized mean-Q1 gradient via an independent chain
  const auto b = static_cast<double>(batch.size());
  ForwardCache cache_user, cache_q;
  const Matrix pi = mlp_forward(agent.user_actor, batch.state, &cache_user);
  const Matrix mu = mlp_forward(agent.adv_actor, batch.state);
  const Matrix x = hstack({&batch.state, &pi, &mu});
  mlp_forward(agent.critic1, x, &cache_q);
  Matrix upstream(batch.size(), 1, 1.0 / b);
  const Matrix in_grad = mlp_backward(agent.critic1, cache_q, upstream, nullptr);
  MlpGrads unnormalized;
  mlp_backward(agent.user_actor, cache_user, slice_cols(in_grad, 3, 5), &unnormalized);
  scale_grads(unnormalized, 1.0 / denom);

  CHECK(max_rel_err(grads.user, unnormalized) < 1e-12);
}

TEST_CASE("user gradient is exactly invariant to doubling the critic output layer") {
  AgentConfig cfg = tiny_cfg();
  cfg.eps_norm = 0.0;
  Rng rng(20);
  MinimaxAgent agent(cfg, rng);
  agent.critic1.biases.back()[0] += 5.0;  // keep the batch mean positive
  Rng batch_rng(21);
  const Batch batch = random_batch(cfg, 4, batch_rng);

  const auto base = agent.compute_actor_gradients(batch);
  REQUIRE(base.m1 > 0.0);

  MinimaxAgent scaled = agent;
  for (auto& x : scaled.critic1.weights.back().data) x *= 2.0;
  for (auto& x : scaled.critic1.biases.back()) x *= 2.0;
  const auto doubled = scaled.compute_actor_gradients(batch);

  CHECK(doubled.m1 == 2.0 * base.m1);
  for (std::size_t l = 0; l < base.user.weights.size(); ++l) {
    CHECK(doubled.user.weights[l].data == base.user.weights[l].data);
    CHECK(doubled.user.biases[l] == base.user.biases[l]);
  }
}

TEST_CASE("all-terminal targets are independent of every target network") {
  Rng rng(22);
  MinimaxAgent agent(tiny_cfg(), rng);
  Rng batch_rng(23);
  const Batch batch = random_batch(agent.config(), 5, batch_rng, true);
  const auto [y1, y2] = agent.compute_td_targets(batch);

  // violently perturb all four target networks
  for (auto* net : {&agent.user_actor_target, &agent.adv_actor_target,
                    &agent.critic1_target, &agent.critic2_target})
    for (auto& w : net->weights)
      for (auto& x : w.data) x += 17.0;
  const auto [z1, z2] = agent.compute_td_targets(batch);
  CHECK(y1 == z1);
  CHECK(y2 == z2);
}

TEST_CASE("finite differences confirm the mmddpg joint actor loss gradients") {
  // default relu critics: a slightly coarser relative floor absorbs the
  // finite-difference noise injected at activation kinks
  Rng rng(24);
  MinimaxAgent agent(tiny_cfg(), rng);
  agent.critic1.biases.back()[0] += 1.0;  // positive batch means, as in training
  agent.critic2.biases.back()[0] += 1.0;
  Rng batch_rng(25);
  const Batch batch = random_batch(agent.config(), 4, batch_rng);
  const auto grads = agent.compute_actor_gradients(batch);
  REQUIRE(grads.m1 > 0.0);
  REQUIRE(grads.m2 > 0.0);

  MinimaxAgent probe = agent;
  const auto user_report = gradient_check(
      agent.user_actor, grads.user,
      [&](const MlpParams& p) {
        probe.user_actor = p;
        return probe.joint_actor_loss(batch);
      },
      1e-6, 1e-5);
  CHECK(user_report.max_rel_error < 1e-4);

  probe = agent;
  const auto adv_report = gradient_check(
      agent.adv_actor, grads.adv,
      [&](const MlpParams& p) {
        probe.adv_actor = p;
        return probe.joint_actor_loss(batch);
      },
      1e-6, 1e-5);
  CHECK(adv_report.max_rel_error < 1e-4);
}

TEST_CASE("joint actor loss gradients are tight against FD with smooth critics") {
  AgentConfig cfg = tiny_cfg();
  cfg.critic_hidden = HiddenActivation::Tanh;
  Rng rng(124);
  MinimaxAgent agent(cfg, rng);
  agent.critic1.biases.back()[0] += 1.0;
  agent.critic2.biases.back()[0] += 1.0;
  Rng batch_rng(125);
  const Batch batch = random_batch(cfg, 4, batch_rng);
  const auto grads = agent.compute_actor_gradients(batch);
  REQUIRE(grads.m1 > 0.0);
  REQUIRE(grads.m2 > 0.0);

  MinimaxAgent probe = agent;
  const auto user_report = gradient_check(
      agent.user_actor, grads.user,
      [&](const MlpParams& p) {
        probe.user_actor = p;
        return probe.joint_actor_loss(batch);
      },
      1e-5, 1e-6);
  CHECK(user_report.max_rel_error < 1e-4);

  probe = agent;
  const auto adv_report = gradient_check(
      agent.adv_actor, grads.adv,
      [&](const MlpParams& p) {
        probe.adv_actor = p;
        return probe.joint_actor_loss(batch);
      },
      1e-5, 1e-6);
  CHECK(adv_report.max_rel_error < 1e-4);
}

TEST_CASE("finite differences confirm the mmddpg critic loss gradients") {
  Rng rng(26);
  AgentConfig cfg = tiny_cfg();
  cfg.critic_hidden = HiddenActivation::Tanh;  // smooth for tight FD bounds
  MinimaxAgent agent(cfg, rng);
  Rng batch_rng(27);
  const Batch batch = random_batch(cfg, 4, batch_rng);

  const auto targets = agent.compute_td_targets(batch);
  const Matrix x1 = hstack({&batch.state, &batch.action, &batch.disturbance});
  ForwardCache cache;
  const Matrix q = mlp_forward(agent.critic1, x1, &cache);
  Matrix upstream(batch.size(), 1);
  for (std::size_t i = 0; i < batch.size(); ++i)
    upstream(i, 0) =
        0.5 * 2.0 * (q(i, 0) - targets.first[i]) / static_cast<double>(batch.size());
  MlpGrads analytic;
  mlp_backward(agent.critic1, cache, upstream, &analytic);

  MinimaxAgent probe = agent;
  const auto report = gradient_check(
      agent.critic1, analytic,
      [&](const MlpParams& p) {
        probe.critic1 = p;
        return probe.critic1_loss(batch);
      },
      1e-5, 1e-6);
  CHECK(report.max_rel_error < 1e-5);
}

TEST_CASE("ddpg stores zero disturbances while training") {
  RunConfig rc;
  rc.algo = "ddpg";
  auto env = build_environment(rc);
  Rng init(28);
  DdpgAgent agent(build_agent_config(rc, *env), init);
  ReplayBuffer buffer(64, 4, 2, 2);
  OuProcess na(2, 0.15, 0.2), nw(2, 0.15, 0.2);
  Rng noise_rng(29), sample_rng(30), env_rng(31);
  EnvState state = env->reset(env_rng);
  for (int k = 0; k < 10; ++k) {
    const auto r = train_step(agent, *env, state, buffer, na, nw, noise_rng, sample_rng);
    if (r.terminal) state = env->reset(env_rng);
  }
  REQUIRE(buffer.size() == 10);
  for (std::size_t i = 0; i < buffer.size(); ++i)
    CHECK(buffer.at(i).disturbance == std::vector<double>{0.0, 0.0});
}

TEST_CASE("ddpg terminal target reduces to the cost") {
  Rng rng(32);
  DdpgAgent agent(tiny_cfg(), rng);
  Rng batch_rng(33);
  const Batch batch = random_batch(agent.config(), 4, batch_rng, true);
  const auto y = agent.compute_td_targets(batch);
  for (std::size_t i = 0; i < batch.size(); ++i) CHECK(y[i] == batch.cost[i]);
}

TEST_CASE("finite differences confirm the ddpg actor loss gradient") {
  Rng rng(34);
  DdpgAgent agent(tiny_cfg(), rng);
  Rng batch_rng(35);
  const Batch batch = random_batch(agent.config(), 4, batch_rng);

  // analytic gradient via the same chain actor_update uses
  const auto b = static_cast<double>(batch.size());
  ForwardCache cache_actor, cache_q;
  const Matrix pi = mlp_forward(agent.actor, batch.state, &cache_actor);
  const Matrix x = hstack({&batch.state, &pi});
  mlp_forward(agent.critic, x, &cache_q);
  Matrix upstream(batch.size(), 1, 1.0 / b);
  const Matrix in_grad = mlp_backward(agent.critic, cache_q, upstream, nullptr);
  MlpGrads analytic;
  mlp_backward(agent.actor, cache_actor, slice_cols(in_grad, 3, 5), &analytic);

  DdpgAgent probe = agent;
  const auto report = gradient_check(
      agent.actor, analytic,
      [&](const MlpParams& p) {
        probe.actor = p;
        return probe.actor_loss(batch);
      },
      1e-5, 1e-6);
  CHECK(report.max_rel_error < 1e-4);
}

TEST_CASE("rarl critics at their fixed point report zero loss") {
  AgentConfig cfg = tiny_cfg();
  cfg.gamma = 0.0;
  Rng rng(36);
  RarlAgent agent(cfg, rng);
  agent.critic1 = constant_net(5, {0.25});
  agent.critic2 = constant_net(5, {0.25});
  agent.opt_critic1 = make_adam_state(agent.critic1, cfg.lr_critic);
  agent.opt_critic2 = make_adam_state(agent.critic2, cfg.lr_critic);

  std::vector<Transition> ts(3);
  for (auto& t : ts) {
    t.state = {0.1, -0.2, 0.3};
    t.action = {0.2, 0.1};
    t.disturbance = {0.5, 0.0};
    t.cost = 0.25;  // both rarl critics regress the cost
    t.next_state = {0.0, 0.0, 0.0};
    t.terminal = false;
  }
  const auto [l1, l2] = agent.critic_update(make_batch(ts));
  CHECK(l1 == 0.0);
  CHECK(l2 == 0.0);
}

TEST_CASE("rarl terminal masking matches the mmddpg rule for the cost critic") {
  Rng rng(37);
  RarlAgent agent(tiny_cfg(), rng);
  Rng batch_rng(38);
  const Batch batch = random_batch(agent.config(), 4, batch_rng, true);
  const auto [y1, y2] = agent.compute_td_targets(batch);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    CHECK(y1[i] == batch.cost[i]);
    CHECK(y2[i] == batch.cost[i]);
  }
}

TEST_CASE("rarl adversary ascends its critic: ||mu(s)|| grows under updates") {
  Rng rng(39);
  AgentConfig cfg = tiny_cfg();
  cfg.lr_adv = 1e-2;
  RarlAgent agent(cfg, rng);
  // critic2 increasing in each disturbance input
  Matrix w(1, 5, 0.0);
  w(0, 3) = 1.0;
  w(0, 4) = 1.0;
  agent.critic2.layer_sizes = {5, 1};
  agent.critic2.weights = {w};
  agent.critic2.biases = {{0.0}};
  agent.critic2.output_activation = OutputActivation::Linear;

  Rng batch_rng(40);
  const Batch batch = random_batch(cfg, 8, batch_rng);
  auto mean_output_sum = [&]() {
    const Matrix mu = mlp_forward(agent.adv_actor, batch.state);
    double acc = 0.0;
    for (double v : mu.data) acc += v;
    return acc / static_cast<double>(mu.rows);
  };
  const double before = mean_output_sum();
  for (int k = 0; k < 200; ++k) agent.actor_update(batch);
  CHECK(mean_output_sum() > before);
}

TEST_CASE("finite differences confirm the rarl actor loss gradients") {
  Rng rng(41);
  RarlAgent agent(tiny_cfg(), rng);
  Rng batch_rng(42);
  const Batch batch = random_batch(agent.config(), 4, batch_rng);

  const auto b = static_cast<double>(batch.size());
  ForwardCache cache_user, cache_q1;
  const Matrix pi = mlp_forward(agent.user_actor, batch.state, &cache_user);
  const Matrix x1 = hstack({&batch.state, &pi});
  mlp_forward(agent.critic1, x1, &cache_q1);
  Matrix upstream(batch.size(), 1, 1.0 / b);
  const Matrix in_grad = mlp_backward(agent.critic1, cache_q1, upstream, nullptr);
  MlpGrads analytic;
  mlp_backward(agent.user_actor, cache_user, slice_cols(in_grad, 3, 5), &analytic);

  RarlAgent probe = agent;
  const auto report = gradient_check(
      agent.user_actor, analytic,
      [&](const MlpParams& p) {
        probe.user_actor = p;
        return probe.user_actor_loss(batch);
      },
      1e-5, 1e-6);
  CHECK(report.max_rel_error < 1e-4);
}

TEST_CASE("train_step keeps every parameter bit-identical before warm-up") {
  RunConfig rc;
  auto env = build_environment(rc);
  AgentConfig cfg = build_agent_config(rc, *env);
  cfg.warm_up = 50;
  cfg.batch_size = 8;
  cfg.hidden_sizes = {8, 8};
  Rng init(43);
  MinimaxAgent agent(cfg, init);
  const MlpParams u = agent.user_actor, a = agent.adv_actor, c1 = agent.critic1,
                  c2 = agent.critic2;

  ReplayBuffer buffer(256, 4, 2, 2);
  OuProcess na(2, 0.15, 0.2), nw(2, 0.15, 0.2);
  Rng noise_rng(44), sample_rng(45), env_rng(46);
  EnvState state = env->reset(env_rng);
  for (int k = 0; k < 20; ++k) {
    const auto result = train_step(agent, *env, state, buffer, na, nw, noise_rng, sample_rng);
    CHECK_FALSE(result.log.updated);
  }
  CHECK(params_equal(agent.user_actor, u));
  CHECK(params_equal(agent.adv_actor, a));
  CHECK(params_equal(agent.critic1, c1));
  CHECK(params_equal(agent.critic2, c2));
}

TEST_CASE("first post-warm-up step moves all four target networks") {
  RunConfig rc;
  auto env = build_environment(rc);
  AgentConfig cfg = build_agent_config(rc, *env);
  cfg.warm_up = 8;
  cfg.batch_size = 8;
  cfg.hidden_sizes = {8, 8};
  Rng init(47);
  MinimaxAgent agent(cfg, init);

  ReplayBuffer buffer(256, 4, 2, 2);
  OuProcess na(2, 0.15, 0.2), nw(2, 0.15, 0.2);
  Rng noise_rng(48), sample_rng(49), env_rng(50);
  EnvState state = env->reset(env_rng);
  for (int k = 0; k < 7; ++k)
    train_step(agent, *env, state, buffer, na, nw, noise_rng, sample_rng);
  const MlpParams ut = agent.user_actor_target, at = agent.adv_actor_target,
                  c1t = agent.critic1_target, c2t = agent.critic2_target;
  const auto result = train_step(agent, *env, state, buffer, na, nw, noise_rng, sample_rng);
  CHECK(result.log.updated);
  CHECK_FALSE(params_equal(agent.user_actor_target, ut));
  CHECK_FALSE(params_equal(agent.adv_actor_target, at));
  CHECK_FALSE(params_equal(agent.critic1_target, c1t));
  CHECK_FALSE(params_equal(agent.critic2_target, c2t));
}

TEST_CASE("two identically seeded training runs replay the same log sequence") {
  auto run_once = [](std::vector<double>& losses) {
    RunConfig rc;
    auto env = build_environment(rc);
    AgentConfig cfg = build_agent_config(rc, *env);
    cfg.warm_up = 16;
    cfg.batch_size = 8;
    cfg.hidden_sizes = {8, 8};
    Rng init(51);
    MinimaxAgent agent(cfg, init);
    ReplayBuffer buffer(256, 4, 2, 2);
    OuProcess na(2, 0.15, 0.2), nw(2, 0.15, 0.2);
    Rng noise_rng(52), sample_rng(53), env_rng(54);
    EnvState state = env->reset(env_rng);
    for (int k = 0; k < 60; ++k) {
      const auto r = train_step(agent, *env, state, buffer, na, nw, noise_rng, sample_rng);
      losses.push_back(r.log.critic1_loss);
      losses.push_back(r.log.m1);
      losses.push_back(r.cost);
      if (r.terminal) state = env->reset(env_rng);
    }
    return agent.user_actor.weights[0].data;
  };
  std::vector<double> log_a, log_b;
  const auto params_a = run_once(log_a);
  const auto params_b = run_once(log_b);
  CHECK(log_a == log_b);
  CHECK(params_a == params_b);
}

TEST_CASE("estimate_objectives: constant cost over a 3-step horizon gives 2.9701") {
  RunConfig rc;
  rc.env_horizon = 3;
  rc.env_init_halfwidth = 0.0;
  rc.env_cost_offset = 0.01;
  rc.env_target_radius_min = std::sqrt(0.99);
  rc.env_target_radius_max = std::sqrt(0.99);
  rc.env_damping = 0.0;
  auto env = build_environment(rc);
  AgentConfig cfg = build_agent_config(rc, *env);
  Rng init(55);
  MinimaxAgent agent(cfg, init);
  // freeze both policies at exactly zero output
  agent.user_actor = constant_net(4, {0.0, 0.0});
  agent.adv_actor = constant_net(4, {0.0, 0.0});

  // state pinned at the origin, target at distance sqrt(0.99):
  // cost = 0.99 + 0.01 = 1 every step
  Rng rng(56);
  const auto est = estimate_objectives(agent, *env, 3, 0.99, rng);
  CHECK(est.j1 == doctest::Approx(2.9701).epsilon(1e-12));
  CHECK(est.j2 == 0.0);
  CHECK(est.ratio == doctest::Approx(2.9701 / cfg.eps_norm).epsilon(1e-9));
}

TEST_CASE("estimate_objectives: constant unit disturbance matches the geometric series") {
  RunConfig rc;
  rc.env_horizon = 100;
  rc.env_disturbance_bound = 1.5;  // keep ||w|| = 1 inside the bound
  auto env = build_environment(rc);
  AgentConfig cfg = build_agent_config(rc, *env);
  Rng init(57);
  MinimaxAgent agent(cfg, init);
  agent.adv_actor = constant_net(4, {1.0, 0.0});  // ||w||^2 = 1 every step

  Rng rng(58);
  const auto est = estimate_objectives(agent, *env, 2, 0.99, rng);
  const double expected = (1.0 - std::pow(0.99, 100)) / (1.0 - 0.99);
  CHECK(est.j2 == doctest::Approx(expected).epsilon(1e-12));
}

}  // TEST_SUITE
