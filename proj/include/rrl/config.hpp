#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "rrl/agents.hpp"
#include "rrl/env.hpp"

namespace rrl {

// Flat run configuration with dotted keys (agent.gamma, env.dt, ...).
// Parsed from `key = value` config files; every key can also be set from a
// command-line flag of the same name. env.* fields left at NaN / -1 resolve
// to the chosen environment's defaults.
struct RunConfig {
  std::string algo = "mmddpg";
  std::string env_name = "point_mass";
  std::uint64_t seed = 1;
  std::int64_t total_steps = 100000;
  std::int64_t checkpoint_every = 10000;
  std::string out_dir = "runs";

  std::vector<int> agent_hidden{64, 64};
  double agent_gamma = 0.99;
  double agent_tau = 0.005;
  double agent_eps_norm = 1e-6;
  std::int64_t agent_batch_size = 128;
  std::int64_t agent_warm_up = 1000;
  double agent_lr_critic = 0.001;
  double agent_lr_user = 0.0001;
  double agent_lr_adv = 0.0001;

  std::int64_t buffer_capacity = 100000;

  double noise_theta = 0.15;
  double noise_sigma = 0.2;
  double noise_mu = 0.0;
  double noise_dt = 1.0;

  // environment overrides; NaN / -1 mean "use the environment default"
  double env_dt = nan_default();
  std::int64_t env_horizon = -1;
  double env_action_bound = nan_default();
  double env_disturbance_bound = nan_default();
  double env_mass = nan_default();
  double env_damping = nan_default();
  double env_gear_scale = nan_default();
  double env_damping_scale = nan_default();
  double env_cost_offset = nan_default();
  double env_action_penalty = nan_default();
  double env_link_mass_1 = nan_default();
  double env_link_mass_2 = nan_default();
  double env_link_length_1 = nan_default();
  double env_link_length_2 = nan_default();
  double env_init_halfwidth = nan_default();
  double env_target_radius_min = nan_default();
  double env_target_radius_max = nan_default();

  std::vector<double> eval_means{0.0, 1.0, 2.0, 3.0, 5.0};
  std::vector<double> eval_stds{0.0, 0.5, 1.0, 2.0};
  std::vector<double> eval_damping_scales{0.2, 0.5, 1.0, 2.0, 5.0};
  std::vector<double> eval_gear_scales{0.5, 0.8, 1.0, 1.2, 1.5};
  std::int64_t eval_episodes_per_cell = 100;
  std::int64_t eval_grid_episodes_per_cell = 50;
  double eval_gamma = 0.99;
  bool eval_clamp_disturbance = true;

  static double nan_default();
};

// (name, kind) of every config key, in canonical serialization order.
enum class ConfigKind { Str, U64, I64, Dbl, DblList, IntList, Bool };
struct ConfigKey {
  const char* name;
  ConfigKind kind;
};
const std::vector<ConfigKey>& config_schema();

// Reads one key's current value / assigns one key from text. Throws
// std::invalid_argument naming the key on bad values or unknown keys.
std::string config_get(const RunConfig& cfg, const std::string& key);
void config_set(RunConfig& cfg, const std::string& key, const std::string& value);

// Parses a `key = value` file ('#' comments). Collects every malformed line
// and unknown key into one diagnostic before throwing.
RunConfig parse_config_file(const std::string& path, RunConfig base = {});
RunConfig parse_config_text(const std::string& text, RunConfig base = {});

// Full constraint validation; returns one named diagnostic per violation.
std::vector<std::string> validate_config(const RunConfig& cfg);

// Canonical snapshot (schema order) and FNV-1a hash over it.
std::string serialize_config(const RunConfig& cfg);
std::uint64_t config_hash(const RunConfig& cfg);

// Resolved environment and agent construction.
std::unique_ptr<Environment> build_environment(const RunConfig& cfg);
AgentConfig build_agent_config(const RunConfig& cfg, const Environment& env);

std::string format_double(double v);  // shortest %.17g round-trip text

}  // namespace rrl
