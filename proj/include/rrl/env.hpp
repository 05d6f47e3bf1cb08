#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rrl/rng.hpp"

namespace rrl {

// Dimensions, bounds and horizon of a two-player environment. The user acts
// through `action` (clamped to +-action_bound), the adversary through
// `disturbance` (clamped to +-disturbance_bound).
struct EnvSpec {
  int state_dim = 0;
  int action_dim = 0;
  int disturbance_dim = 0;
  double action_bound = 1.0;
  double disturbance_bound = 1.0;
  int horizon = 100;
  double dt = 0.05;
};

struct PhysicsParams {
  double mass = 1.0;           // point mass [kg]
  double link_mass_1 = 0.1;    // two-link [kg]
  double link_mass_2 = 0.1;
  double link_length_1 = 0.1;  // [m]
  double link_length_2 = 0.1;
  double damping_coeff = 0.5;  // N*s/m (point mass) or N*m*s/rad (per joint)
  double gear_scale = 1.0;     // actuation multiplier, > 0
  double damping_scale = 1.0;  // damping multiplier, >= 0
  double cost_offset = 0.01;   // keeps every step cost strictly positive
  double action_penalty = 0.01;
  // initial-state distribution
  double init_halfwidth = 0.1;       // box around the home pose
  double target_radius_min = 0.1;    // target annulus
  double target_radius_max = 0.4;
};

struct DisturbanceSpec {
  enum class Mode { None, EpisodeConstantGaussian, Adversary };
  Mode mode = Mode::None;
  std::vector<double> mean;
  std::vector<double> std_dev;
  bool clamp_to_bound = true;
};

struct EnvState {
  std::vector<double> positions;   // m (point mass) or rad (joints)
  std::vector<double> velocities;
  std::vector<double> target;      // m
  int step_index = 0;
};

struct StepOutcome {
  EnvState next;
  double cost = 0.0;
  bool terminal = false;
  bool fault = false;  // non-finite state or singular dynamics; episode aborted
};

// Analytic environment with deterministic dynamics. Instances are immutable
// after construction; step() is a pure function of (state, action,
// disturbance), so one instance per worker is safe.
class Environment {
 public:
  virtual ~Environment() = default;
  virtual const EnvSpec& spec() const = 0;
  virtual const PhysicsParams& physics() const = 0;
  virtual std::string name() const = 0;
  virtual EnvState reset(Rng& rng) const = 0;
  virtual StepOutcome step(const EnvState& state, std::span<const double> action,
                           std::span<const double> disturbance) const = 0;
  // Maps the internal state to the observation the policies see.
  virtual std::vector<double> observe(const EnvState& state) const = 0;
  virtual std::unique_ptr<Environment> clone() const = 0;
};

// Planar point mass pushed by the user's force and the adversary's force.
//   v' = v + dt * (gear_scale * a + w - damping_scale * damping_coeff * v) / mass
//   p' = p + dt * v'
// cost = ||p' - target||^2 + action_penalty * ||a||^2 + cost_offset.
// Observation: (target - p, v).
class PointMassEnv : public Environment {
 public:
  PointMassEnv(EnvSpec spec, PhysicsParams physics);
  const EnvSpec& spec() const override { return spec_; }
  const PhysicsParams& physics() const override { return physics_; }
  std::string name() const override { return "point_mass"; }
  EnvState reset(Rng& rng) const override;
  StepOutcome step(const EnvState& state, std::span<const double> action,
                   std::span<const double> disturbance) const override;
  std::vector<double> observe(const EnvState& state) const override;
  std::unique_ptr<Environment> clone() const override;

  static EnvSpec default_spec();
  static PhysicsParams default_physics();

 private:
  EnvSpec spec_;
  PhysicsParams physics_;
};

// Gravity-free two-joint planar arm. Torques on the joints, disturbance as a
// force on the end effector mapped through the Jacobian transpose:
//   M(q) qdd + C(q, qd) qd + damping_scale * D * qd = gear_scale * a + J(q)^T w
// integrated with semi-implicit Euler. cost = ||fk(q') - target||^2 +
// action_penalty * ||a||^2 + cost_offset.
// Observation: (cos q1, sin q1, cos q2, sin q2, qd1, qd2, target - fk(q)).
class TwoLinkArmEnv : public Environment {
 public:
  TwoLinkArmEnv(EnvSpec spec, PhysicsParams physics);
  const EnvSpec& spec() const override { return spec_; }
  const PhysicsParams& physics() const override { return physics_; }
  std::string name() const override { return "two_link"; }
  EnvState reset(Rng& rng) const override;
  StepOutcome step(const EnvState& state, std::span<const double> action,
                   std::span<const double> disturbance) const override;
  std::vector<double> observe(const EnvState& state) const override;
  std::unique_ptr<Environment> clone() const override;

  // End-effector position for joint angles q.
  std::vector<double> forward_kinematics(std::span<const double> q) const;
  // Kinetic energy 0.5 * qd^T M(q) qd, used by dissipation checks.
  double kinetic_energy(const EnvState& state) const;

  static EnvSpec default_spec();
  static PhysicsParams default_physics();

 private:
  EnvSpec spec_;
  PhysicsParams physics_;
};

// Copy of `env` with the two scale fields replaced; nominal parameters are
// untouched. Throws on gear_scale <= 0 or damping_scale < 0.
std::unique_ptr<Environment> apply_param_scaling(const Environment& env,
                                                 double gear_scale,
                                                 double damping_scale);

// Draws the episode-constant disturbance w ~ N(mean, diag(std^2)), clamped
// per component to +-bound when the spec requests it. Usage error unless the
// spec is in EpisodeConstantGaussian mode.
std::vector<double> sample_episode_disturbance(const DisturbanceSpec& spec,
                                               double bound, Rng& rng);

std::unique_ptr<Environment> make_environment(const std::string& name,
                                              const EnvSpec& spec,
                                              const PhysicsParams& physics);

void clamp_vector(std::vector<double>& v, double bound);

}  // namespace rrl
