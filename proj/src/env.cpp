#include "rrl/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rrl/matrix.hpp"

namespace rrl {

namespace {

constexpr double kPi = 3.14159265358979323846;

void validate_spec(const EnvSpec& s) {
  if (s.state_dim < 1 || s.action_dim < 1 || s.disturbance_dim < 1)
    throw std::invalid_argument("env: all dimensions must be >= 1");
  if (!(s.action_bound > 0.0) || !(s.disturbance_bound > 0.0))
    throw std::invalid_argument("env: bounds must be > 0");
  if (s.horizon < 1) throw std::invalid_argument("env: horizon must be >= 1");
  if (!(s.dt > 0.0)) throw std::invalid_argument("env: dt must be > 0");
}

void validate_physics(const PhysicsParams& p) {
  if (!(p.gear_scale > 0.0)) throw std::invalid_argument("env: gear_scale must be > 0");
  if (p.damping_scale < 0.0) throw std::invalid_argument("env: damping_scale must be >= 0");
  if (!(p.cost_offset > 0.0)) throw std::invalid_argument("env: cost_offset must be > 0");
  if (p.action_penalty < 0.0) throw std::invalid_argument("env: action_penalty must be >= 0");
}

std::vector<double> clamped(std::span<const double> v, double bound) {
  std::vector<double> out(v.begin(), v.end());
  clamp_vector(out, bound);
  return out;
}

double squared_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

// Target drawn uniformly over an annulus around the origin.
std::vector<double> sample_target(const PhysicsParams& p, Rng& rng) {
  const double angle = rng.uniform(0.0, 2.0 * kPi);
  const double r2max = p.target_radius_max * p.target_radius_max;
  const double r2min = p.target_radius_min * p.target_radius_min;
  const double r = std::sqrt(r2min + (r2max - r2min) * rng.uniform());
  return {r * std::cos(angle), r * std::sin(angle)};
}

}  // namespace

void clamp_vector(std::vector<double>& v, double bound) {
  for (auto& x : v) x = std::clamp(x, -bound, bound);
}

// ---------------------------------------------------------------- PointMass

PointMassEnv::PointMassEnv(EnvSpec spec, PhysicsParams physics)
    : spec_(spec), physics_(physics) {
  validate_spec(spec_);
  validate_physics(physics_);
  if (spec_.state_dim != 4 || spec_.action_dim != 2 || spec_.disturbance_dim != 2)
    throw std::invalid_argument("point_mass: dims must be (4, 2, 2)");
  if (!(physics_.mass > 0.0)) throw std::invalid_argument("point_mass: mass must be > 0");
}

EnvSpec PointMassEnv::default_spec() {
  EnvSpec s;
  s.state_dim = 4;
  s.action_dim = 2;
  s.disturbance_dim = 2;
  s.action_bound = 1.0;
  s.disturbance_bound = 1.0;
  s.horizon = 100;
  s.dt = 0.05;
  return s;
}

PhysicsParams PointMassEnv::default_physics() {
  PhysicsParams p;
  p.mass = 1.0;
  p.damping_coeff = 0.5;
  p.cost_offset = 0.01;
  p.action_penalty = 0.01;
  p.init_halfwidth = 0.1;
  p.target_radius_min = 0.1;
  p.target_radius_max = 0.4;
  return p;
}

EnvState PointMassEnv::reset(Rng& rng) const {
  EnvState s;
  s.positions = {rng.uniform(-physics_.init_halfwidth, physics_.init_halfwidth),
                 rng.uniform(-physics_.init_halfwidth, physics_.init_halfwidth)};
  s.velocities = {0.0, 0.0};
  s.target = sample_target(physics_, rng);
  s.step_index = 0;
  return s;
}

StepOutcome PointMassEnv::step(const EnvState& state, std::span<const double> action,
                               std::span<const double> disturbance) const {
  StepOutcome out;
  if (action.size() != 2 || disturbance.size() != 2)
    throw std::invalid_argument("point_mass: action/disturbance must have dim 2");
  if (!all_finite(state.positions) || !all_finite(state.velocities)) {
    out.fault = true;
    return out;
  }
  const auto a = clamped(action, spec_.action_bound);
  const auto w = clamped(disturbance, spec_.disturbance_bound);

  const double dt = spec_.dt;
  const double visc = physics_.damping_scale * physics_.damping_coeff;
  EnvState next = state;
  for (int i = 0; i < 2; ++i) {
    const double force = physics_.gear_scale * a[i] + w[i] - visc * state.velocities[i];
    next.velocities[i] = state.velocities[i] + dt * force / physics_.mass;
    next.positions[i] = state.positions[i] + dt * next.velocities[i];
  }
  next.step_index = state.step_index + 1;

  if (!all_finite(next.positions) || !all_finite(next.velocities)) {
    out.fault = true;
    return out;
  }
  double dist2 = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double d = next.positions[i] - state.target[i];
    dist2 += d * d;
  }
  out.next = std::move(next);
  out.cost = dist2 + physics_.action_penalty * squared_norm(a) + physics_.cost_offset;
  out.terminal = out.next.step_index >= spec_.horizon;
  return out;
}

std::vector<double> PointMassEnv::observe(const EnvState& s) const {
  return {s.target[0] - s.positions[0], s.target[1] - s.positions[1],
          s.velocities[0], s.velocities[1]};
}

std::unique_ptr<Environment> PointMassEnv::clone() const {
  return std::make_unique<PointMassEnv>(*this);
}

// ---------------------------------------------------------------- TwoLinkArm

TwoLinkArmEnv::TwoLinkArmEnv(EnvSpec spec, PhysicsParams physics)
    : spec_(spec), physics_(physics) {
  validate_spec(spec_);
  validate_physics(physics_);
  if (spec_.state_dim != 8 || spec_.action_dim != 2 || spec_.disturbance_dim != 2)
    throw std::invalid_argument("two_link: dims must be (8, 2, 2)");
  if (!(physics_.link_mass_1 > 0.0) || !(physics_.link_mass_2 > 0.0) ||
      !(physics_.link_length_1 > 0.0) || !(physics_.link_length_2 > 0.0))
    throw std::invalid_argument("two_link: link masses and lengths must be > 0");
}

EnvSpec TwoLinkArmEnv::default_spec() {
  EnvSpec s;
  s.state_dim = 8;
  s.action_dim = 2;
  s.disturbance_dim = 2;
  s.action_bound = 0.05;       // N*m joint torque
  s.disturbance_bound = 0.2;   // N end-effector force
  s.horizon = 100;
  s.dt = 0.01;
  return s;
}

PhysicsParams TwoLinkArmEnv::default_physics() {
  PhysicsParams p;
  p.link_mass_1 = 0.1;
  p.link_mass_2 = 0.1;
  p.link_length_1 = 0.1;
  p.link_length_2 = 0.1;
  p.damping_coeff = 0.005;
  p.cost_offset = 0.01;
  p.action_penalty = 0.01;
  p.init_halfwidth = 0.1;       // rad around the home pose
  p.target_radius_min = 0.05;
  p.target_radius_max = 0.18;   // inside reach l1 + l2 = 0.2
  return p;
}

std::vector<double> TwoLinkArmEnv::forward_kinematics(std::span<const double> q) const {
  const double l1 = physics_.link_length_1, l2 = physics_.link_length_2;
  return {l1 * std::cos(q[0]) + l2 * std::cos(q[0] + q[1]),
          l1 * std::sin(q[0]) + l2 * std::sin(q[0] + q[1])};
}

double TwoLinkArmEnv::kinetic_energy(const EnvState& s) const {
  const double m1 = physics_.link_mass_1, m2 = physics_.link_mass_2;
  const double l1 = physics_.link_length_1, l2 = physics_.link_length_2;
  const double c2 = std::cos(s.positions[1]);
  const double m11 = (m1 + m2) * l1 * l1 + m2 * l2 * l2 + 2.0 * m2 * l1 * l2 * c2;
  const double m12 = m2 * l2 * l2 + m2 * l1 * l2 * c2;
  const double m22 = m2 * l2 * l2;
  const double v1 = s.velocities[0], v2 = s.velocities[1];
  return 0.5 * (m11 * v1 * v1 + 2.0 * m12 * v1 * v2 + m22 * v2 * v2);
}

EnvState TwoLinkArmEnv::reset(Rng& rng) const {
  EnvState s;
  s.positions = {rng.uniform(-physics_.init_halfwidth, physics_.init_halfwidth),
                 rng.uniform(-physics_.init_halfwidth, physics_.init_halfwidth)};
  s.velocities = {0.0, 0.0};
  s.target = sample_target(physics_, rng);
  s.step_index = 0;
  return s;
}

StepOutcome TwoLinkArmEnv::step(const EnvState& state, std::span<const double> action,
                                std::span<const double> disturbance) const {
  StepOutcome out;
  if (action.size() != 2 || disturbance.size() != 2)
    throw std::invalid_argument("two_link: action/disturbance must have dim 2");
  if (!all_finite(state.positions) || !all_finite(state.velocities)) {
    out.fault = true;
    return out;
  }
  const auto a = clamped(action, spec_.action_bound);
  const auto w = clamped(disturbance, spec_.disturbance_bound);

  const double m1 = physics_.link_mass_1, m2 = physics_.link_mass_2;
  const double l1 = physics_.link_length_1, l2 = physics_.link_length_2;
  const double q1 = state.positions[0], q2 = state.positions[1];
  const double v1 = state.velocities[0], v2 = state.velocities[1];
  const double c2 = std::cos(q2), s2 = std::sin(q2);

  // mass matrix (point masses at the link ends)
  const double m11 = (m1 + m2) * l1 * l1 + m2 * l2 * l2 + 2.0 * m2 * l1 * l2 * c2;
  const double m12 = m2 * l2 * l2 + m2 * l1 * l2 * c2;
  const double m22 = m2 * l2 * l2;
  const double det = m11 * m22 - m12 * m12;
  if (!(std::fabs(det) > 1e-12)) {
    out.fault = true;
    return out;
  }

  // Coriolis/centrifugal vector C(q, qd) qd
  const double h = m2 * l1 * l2 * s2;
  const double cor1 = -h * (2.0 * v1 * v2 + v2 * v2);
  const double cor2 = h * v1 * v1;

  // end-effector Jacobian transpose times disturbance force
  const double s1 = std::sin(q1), c1 = std::cos(q1);
  const double s12 = std::sin(q1 + q2), c12 = std::cos(q1 + q2);
  const double jt1 = (-l1 * s1 - l2 * s12) * w[0] + (l1 * c1 + l2 * c12) * w[1];
  const double jt2 = (-l2 * s12) * w[0] + (l2 * c12) * w[1];

  const double damp = physics_.damping_scale * physics_.damping_coeff;
  const double rhs1 = physics_.gear_scale * a[0] + jt1 - cor1 - damp * v1;
  const double rhs2 = physics_.gear_scale * a[1] + jt2 - cor2 - damp * v2;

  const double acc1 = (m22 * rhs1 - m12 * rhs2) / det;
  const double acc2 = (-m12 * rhs1 + m11 * rhs2) / det;

  EnvState next = state;
  const double dt = spec_.dt;
  next.velocities[0] = v1 + dt * acc1;
  next.velocities[1] = v2 + dt * acc2;
  next.positions[0] = q1 + dt * next.velocities[0];
  next.positions[1] = q2 + dt * next.velocities[1];
  next.step_index = state.step_index + 1;

  if (!all_finite(next.positions) || !all_finite(next.velocities)) {
    out.fault = true;
    return out;
  }
  const auto tip = forward_kinematics(next.positions);
  double dist2 = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double d = tip[i] - state.target[i];
    dist2 += d * d;
  }
  out.next = std::move(next);
  out.cost = dist2 + physics_.action_penalty * squared_norm(a) + physics_.cost_offset;
  out.terminal = out.next.step_index >= spec_.horizon;
  return out;
}

std::vector<double> TwoLinkArmEnv::observe(const EnvState& s) const {
  const auto tip = forward_kinematics(s.positions);
  return {std::cos(s.positions[0]), std::sin(s.positions[0]),
          std::cos(s.positions[1]), std::sin(s.positions[1]),
          s.velocities[0], s.velocities[1],
          s.target[0] - tip[0], s.target[1] - tip[1]};
}

std::unique_ptr<Environment> TwoLinkArmEnv::clone() const {
  return std::make_unique<TwoLinkArmEnv>(*this);
}

// ------------------------------------------------------------------ helpers

std::unique_ptr<Environment> apply_param_scaling(const Environment& env,
                                                 double gear_scale,
                                                 double damping_scale) {
  if (!(gear_scale > 0.0))
    throw std::invalid_argument("apply_param_scaling: gear_scale must be > 0");
  if (damping_scale < 0.0)
    throw std::invalid_argument("apply_param_scaling: damping_scale must be >= 0");
  PhysicsParams scaled = env.physics();
  scaled.gear_scale = gear_scale;
  scaled.damping_scale = damping_scale;
  return make_environment(env.name(), env.spec(), scaled);
}

std::vector<double> sample_episode_disturbance(const DisturbanceSpec& spec,
                                               double bound, Rng& rng) {
  if (spec.mode != DisturbanceSpec::Mode::EpisodeConstantGaussian)
    throw std::logic_error("sample_episode_disturbance: spec is not episode-constant");
  if (spec.mean.size() != spec.std_dev.size())
    throw std::invalid_argument("sample_episode_disturbance: mean/std length mismatch");
  std::vector<double> w(spec.mean.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (spec.std_dev[i] < 0.0)
      throw std::invalid_argument("sample_episode_disturbance: std must be >= 0");
    w[i] = spec.mean[i] + spec.std_dev[i] * rng.normal();
  }
  if (spec.clamp_to_bound) clamp_vector(w, bound);
  return w;
}

std::unique_ptr<Environment> make_environment(const std::string& name,
                                              const EnvSpec& spec,
                                              const PhysicsParams& physics) {
  if (name == "point_mass") return std::make_unique<PointMassEnv>(spec, physics);
  if (name == "two_link") return std::make_unique<TwoLinkArmEnv>(spec, physics);
  throw std::invalid_argument("unknown environment: " + name);
}

}  // namespace rrl
