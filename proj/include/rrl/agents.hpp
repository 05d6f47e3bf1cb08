#pragma once

#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rrl/env.hpp"
#include "rrl/mlp.hpp"
#include "rrl/noise.hpp"
#include "rrl/optim.hpp"
#include "rrl/replay.hpp"
#include "rrl/rng.hpp"

namespace rrl {

// Mini-batch of transitions in matrix form (one row per sample).
struct Batch {
  Matrix state, action, disturbance, next_state;
  std::vector<double> cost;
  std::vector<std::uint8_t> terminal;
  std::size_t size() const { return cost.size(); }
};

Batch make_batch(const std::vector<Transition>& transitions);

double batch_mean(std::span<const double> values);

struct AgentConfig {
  int state_dim = 0;
  int action_dim = 0;
  int disturbance_dim = 0;
  double action_bound = 1.0;
  double disturbance_bound = 1.0;
  std::vector<int> hidden_sizes{64, 64};
  double lr_critic = 1e-3;
  double lr_user = 1e-4;
  double lr_adv = 1e-4;
  double gamma = 0.99;
  double tau = 0.005;
  double eps_norm = 1e-6;   // floor for the batch-mean denominators
  int batch_size = 128;
  int warm_up = 1000;       // env steps before updates start
  double actor_final_scale = 1e-3;
  HiddenActivation critic_hidden = HiddenActivation::ReLU;
};

struct TrainStepLog {
  double critic1_loss = 0.0;
  double critic2_loss = 0.0;
  double m1 = 0.0;  // batch mean of Q1 over stored (s, a, w)
  double m2 = 0.0;  // batch mean of Q2 over stored (s, w)
  double disturbance_norm = 0.0;
  bool updated = false;
};

struct ObjectiveEstimate {
  double j1 = 0.0;    // mean discounted cumulative cost
  double j2 = 0.0;    // mean discounted cumulative squared disturbance norm
  double ratio = 0.0; // j1 / max(j2, eps_norm)
};

// Handle used by checkpointing and tests to walk an agent's networks.
struct NamedNet {
  std::string name;
  MlpParams* online;
  MlpParams* target;
  AdamState* opt;
};

class Agent {
 public:
  explicit Agent(AgentConfig cfg);
  virtual ~Agent() = default;

  virtual std::string algorithm() const = 0;
  virtual bool has_adversary() const = 0;

  // Deterministic policy queries; outputs clamped to the configured bounds.
  virtual std::vector<double> select_action(std::span<const double> state) const = 0;
  virtual std::vector<double> select_disturbance(std::span<const double> state) const = 0;

  // Exploration variants: actor output plus one OU noise step, clamped.
  std::vector<double> select_action(std::span<const double> state, OuProcess& noise,
                                    Rng& rng) const;
  std::vector<double> select_disturbance(std::span<const double> state,
                                         OuProcess& noise, Rng& rng) const;

  // One critic update, one actor update, one soft target update, in order.
  virtual TrainStepLog update(const Batch& batch) = 0;

  virtual std::vector<NamedNet> networks() = 0;

  const AgentConfig& config() const { return cfg_; }

 protected:
  std::vector<double> forward_policy(const MlpParams& actor,
                                     std::span<const double> state, double bound) const;
  AgentConfig cfg_;
};

// Minimax deep deterministic policy gradient. Two actors (user pi_theta,
// adversary mu_phi) and two critics: Q1(s, a, w) estimates cost-to-go,
// Q2(s, w) estimates disturbance-energy-to-go. The joint actor loss
//   L = mean[ Q1(s, pi(s), mu(s)) / D1 - Q2(s, mu(s)) / D2 ],
//   Di = max(M(Qi), eps_norm) with M(Qi) the batch mean over stored samples,
// is descended by the user and ascended by the adversary.
class MinimaxAgent : public Agent {
 public:
  MinimaxAgent(const AgentConfig& cfg, Rng& init_rng);

  using Agent::select_action;
  using Agent::select_disturbance;
  std::string algorithm() const override { return "mmddpg"; }
  bool has_adversary() const override { return true; }
  std::vector<double> select_action(std::span<const double> state) const override;
  std::vector<double> select_disturbance(std::span<const double> state) const override;

  // y1 = c + 1(s') * gamma * Q1'(s', pi'(s'), mu'(s'))
  // y2 = ||w||^2 + 1(s') * gamma * Q2'(s', mu'(s'))   with 1(terminal) = 0
  std::pair<std::vector<double>, std::vector<double>> compute_td_targets(
      const Batch& batch) const;

  // One Adam step on each critic's squared TD error; returns both losses.
  std::pair<double, double> critic_update(const Batch& batch);

  struct ActorGradients {
    MlpGrads user;  // d L / d theta
    MlpGrads adv;   // d L / d phi
    double m1 = 0.0, m2 = 0.0;
  };
  ActorGradients compute_actor_gradients(const Batch& batch) const;
  void actor_update(const Batch& batch);

  void update_targets();
  TrainStepLog update(const Batch& batch) override;
  std::vector<NamedNet> networks() override;

  // Loss evaluators for finite-difference checks.
  double critic1_loss(const Batch& batch) const;
  double critic2_loss(const Batch& batch) const;
  double joint_actor_loss(const Batch& batch) const;

  MlpParams user_actor, adv_actor, critic1, critic2;
  MlpParams user_actor_target, adv_actor_target, critic1_target, critic2_target;
  AdamState opt_user, opt_adv, opt_critic1, opt_critic2;
};

// Single-agent DDPG baseline: one actor, one critic on (s, a); trains with
// zero disturbance and no normalization.
class DdpgAgent : public Agent {
 public:
  DdpgAgent(const AgentConfig& cfg, Rng& init_rng);

  using Agent::select_action;
  using Agent::select_disturbance;
  std::string algorithm() const override { return "ddpg"; }
  bool has_adversary() const override { return false; }
  std::vector<double> select_action(std::span<const double> state) const override;
  std::vector<double> select_disturbance(std::span<const double> state) const override;

  std::vector<double> compute_td_targets(const Batch& batch) const;
  double critic_update(const Batch& batch);
  void actor_update(const Batch& batch);
  void update_targets();
  TrainStepLog update(const Batch& batch) override;
  std::vector<NamedNet> networks() override;

  double critic_loss(const Batch& batch) const;
  double actor_loss(const Batch& batch) const;  // mean Q(s, pi(s))

  MlpParams actor, critic;
  MlpParams actor_target, critic_target;
  AdamState opt_actor, opt_critic;
};

// Robust adversarial RL baseline: strict zero-sum game. Both critics regress
// the environment cost; the user descends mean Q1(s, pi(s)), the adversary
// ascends mean Q2(s, mu(s)). No disturbance-energy term, no normalization.
class RarlAgent : public Agent {
 public:
  RarlAgent(const AgentConfig& cfg, Rng& init_rng);

  using Agent::select_action;
  using Agent::select_disturbance;
  std::string algorithm() const override { return "rarl"; }
  bool has_adversary() const override { return true; }
  std::vector<double> select_action(std::span<const double> state) const override;
  std::vector<double> select_disturbance(std::span<const double> state) const override;

  std::pair<std::vector<double>, std::vector<double>> compute_td_targets(
      const Batch& batch) const;
  std::pair<double, double> critic_update(const Batch& batch);
  void actor_update(const Batch& batch);
  void update_targets();
  TrainStepLog update(const Batch& batch) override;
  std::vector<NamedNet> networks() override;

  double critic1_loss(const Batch& batch) const;
  double critic2_loss(const Batch& batch) const;
  double user_actor_loss(const Batch& batch) const;
  double adv_actor_loss(const Batch& batch) const;

  MlpParams user_actor, adv_actor, critic1, critic2;
  MlpParams user_actor_target, adv_actor_target, critic1_target, critic2_target;
  AdamState opt_user, opt_adv, opt_critic1, opt_critic2;
};

std::unique_ptr<Agent> make_agent(const std::string& algorithm,
                                  const AgentConfig& cfg, Rng& init_rng);

struct TrainStepResult {
  TrainStepLog log;
  double cost = 0.0;
  bool terminal = false;
  bool fault = false;
};

// One environment interaction (noisy action and disturbance), buffer store,
// and — once the buffer holds max(warm_up, batch_size) transitions — one
// agent update. `state` advances in place; on terminal/fault the caller
// resets the episode.
TrainStepResult train_step(Agent& agent, const Environment& env, EnvState& state,
                           ReplayBuffer& buffer, OuProcess& action_noise,
                           OuProcess& disturbance_noise, Rng& noise_rng,
                           Rng& sample_rng);

// Monte-Carlo estimates of the discounted cost J1, disturbance energy J2 and
// their ratio under the agent's deterministic policies (no exploration).
ObjectiveEstimate estimate_objectives(const Agent& agent, const Environment& env,
                                      int episodes, double gamma, Rng& rng);

}  // namespace rrl
