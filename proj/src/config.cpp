#include "rrl/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rrl {

namespace {

struct Binding {
  ConfigKey key;
  std::variant<std::string RunConfig::*, std::uint64_t RunConfig::*,
               std::int64_t RunConfig::*, double RunConfig::*,
               std::vector<double> RunConfig::*, std::vector<int> RunConfig::*,
               bool RunConfig::*>
      member;
};

const std::vector<Binding>& bindings() {
  static const std::vector<Binding> table = {
      {{"algo", ConfigKind::Str}, &RunConfig::algo},
      {{"env", ConfigKind::Str}, &RunConfig::env_name},
      {{"seed", ConfigKind::U64}, &RunConfig::seed},
      {{"total_steps", ConfigKind::I64}, &RunConfig::total_steps},
      {{"checkpoint_every", ConfigKind::I64}, &RunConfig::checkpoint_every},
      {{"out_dir", ConfigKind::Str}, &RunConfig::out_dir},
      {{"agent.hidden", ConfigKind::IntList}, &RunConfig::agent_hidden},
      {{"agent.gamma", ConfigKind::Dbl}, &RunConfig::agent_gamma},
      {{"agent.tau", ConfigKind::Dbl}, &RunConfig::agent_tau},
      {{"agent.eps_norm", ConfigKind::Dbl}, &RunConfig::agent_eps_norm},
      {{"agent.batch_size", ConfigKind::I64}, &RunConfig::agent_batch_size},
      {{"agent.warm_up", ConfigKind::I64}, &RunConfig::agent_warm_up},
      {{"agent.lr_critic", ConfigKind::Dbl}, &RunConfig::agent_lr_critic},
      {{"agent.lr_user", ConfigKind::Dbl}, &RunConfig::agent_lr_user},
      {{"agent.lr_adv", ConfigKind::Dbl}, &RunConfig::agent_lr_adv},
      {{"buffer.capacity", ConfigKind::I64}, &RunConfig::buffer_capacity},
      {{"noise.theta", ConfigKind::Dbl}, &RunConfig::noise_theta},
      {{"noise.sigma", ConfigKind::Dbl}, &RunConfig::noise_sigma},
      {{"noise.mu", ConfigKind::Dbl}, &RunConfig::noise_mu},
      {{"noise.dt", ConfigKind::Dbl}, &RunConfig::noise_dt},
      {{"env.dt", ConfigKind::Dbl}, &RunConfig::env_dt},
      {{"env.horizon", ConfigKind::I64}, &RunConfig::env_horizon},
      {{"env.action_bound", ConfigKind::Dbl}, &RunConfig::env_action_bound},
      {{"env.disturbance_bound", ConfigKind::Dbl}, &RunConfig::env_disturbance_bound},
      {{"env.mass", ConfigKind::Dbl}, &RunConfig::env_mass},
      {{"env.damping", ConfigKind::Dbl}, &RunConfig::env_damping},
      {{"env.gear_scale", ConfigKind::Dbl}, &RunConfig::env_gear_scale},
      {{"env.damping_scale", ConfigKind::Dbl}, &RunConfig::env_damping_scale},
      {{"env.cost_offset", ConfigKind::Dbl}, &RunConfig::env_cost_offset},
      {{"env.action_penalty", ConfigKind::Dbl}, &RunConfig::env_action_penalty},
      {{"env.link_mass_1", ConfigKind::Dbl}, &RunConfig::env_link_mass_1},
      {{"env.link_mass_2", ConfigKind::Dbl}, &RunConfig::env_link_mass_2},
      {{"env.link_length_1", ConfigKind::Dbl}, &RunConfig::env_link_length_1},
      {{"env.link_length_2", ConfigKind::Dbl}, &RunConfig::env_link_length_2},
      {{"env.init_halfwidth", ConfigKind::Dbl}, &RunConfig::env_init_halfwidth},
      {{"env.target_radius_min", ConfigKind::Dbl}, &RunConfig::env_target_radius_min},
      {{"env.target_radius_max", ConfigKind::Dbl}, &RunConfig::env_target_radius_max},
      {{"eval.means", ConfigKind::DblList}, &RunConfig::eval_means},
      {{"eval.stds", ConfigKind::DblList}, &RunConfig::eval_stds},
      {{"eval.damping_scales", ConfigKind::DblList}, &RunConfig::eval_damping_scales},
      {{"eval.gear_scales", ConfigKind::DblList}, &RunConfig::eval_gear_scales},
      {{"eval.episodes_per_cell", ConfigKind::I64}, &RunConfig::eval_episodes_per_cell},
      {{"eval.grid_episodes_per_cell", ConfigKind::I64},
       &RunConfig::eval_grid_episodes_per_cell},
      {{"eval.gamma", ConfigKind::Dbl}, &RunConfig::eval_gamma},
      {{"eval.clamp_disturbance", ConfigKind::Bool}, &RunConfig::eval_clamp_disturbance},
  };
  return table;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument(key + ": not a number: '" + v + "'");
  }
}

std::int64_t parse_i64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw std::invalid_argument(key + ": not an integer: '" + v + "'");
  }
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> parts;
  std::string item;
  std::stringstream ss(v);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += format_double(v[i]);
  }
  return out;
}

std::string join_ints(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  return out;
}

const Binding& find_binding(const std::string& key) {
  for (const auto& b : bindings())
    if (key == b.key.name) return b;
  throw std::invalid_argument("unknown config key '" + key + "'");
}

}  // namespace

double RunConfig::nan_default() { return std::numeric_limits<double>::quiet_NaN(); }

const std::vector<ConfigKey>& config_schema() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> k;
    for (const auto& b : bindings()) k.push_back(b.key);
    return k;
  }();
  return keys;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string config_get(const RunConfig& cfg, const std::string& key) {
  const Binding& b = find_binding(key);
  switch (b.key.kind) {
    case ConfigKind::Str:
      return cfg.*std::get<std::string RunConfig::*>(b.member);
    case ConfigKind::U64:
      return std::to_string(cfg.*std::get<std::uint64_t RunConfig::*>(b.member));
    case ConfigKind::I64:
      return std::to_string(cfg.*std::get<std::int64_t RunConfig::*>(b.member));
    case ConfigKind::Dbl:
      return format_double(cfg.*std::get<double RunConfig::*>(b.member));
    case ConfigKind::DblList:
      return join_doubles(cfg.*std::get<std::vector<double> RunConfig::*>(b.member));
    case ConfigKind::IntList:
      return join_ints(cfg.*std::get<std::vector<int> RunConfig::*>(b.member));
    case ConfigKind::Bool:
      return (cfg.*std::get<bool RunConfig::*>(b.member)) ? "true" : "false";
  }
  return "";
}

void config_set(RunConfig& cfg, const std::string& key, const std::string& value) {
  const Binding& b = find_binding(key);
  const std::string v = trim(value);
  switch (b.key.kind) {
    case ConfigKind::Str:
      cfg.*std::get<std::string RunConfig::*>(b.member) = v;
      break;
    case ConfigKind::U64: {
      const auto x = parse_i64(key, v);
      if (x < 0) throw std::invalid_argument(key + ": must be non-negative");
      cfg.*std::get<std::uint64_t RunConfig::*>(b.member) = static_cast<std::uint64_t>(x);
      break;
    }
    case ConfigKind::I64:
      cfg.*std::get<std::int64_t RunConfig::*>(b.member) = parse_i64(key, v);
      break;
    case ConfigKind::Dbl:
      cfg.*std::get<double RunConfig::*>(b.member) = parse_double(key, v);
      break;
    case ConfigKind::DblList: {
      std::vector<double> list;
      for (const auto& item : split_list(v)) list.push_back(parse_double(key, item));
      cfg.*std::get<std::vector<double> RunConfig::*>(b.member) = std::move(list);
      break;
    }
    case ConfigKind::IntList: {
      std::vector<int> list;
      for (const auto& item : split_list(v))
        list.push_back(static_cast<int>(parse_i64(key, item)));
      cfg.*std::get<std::vector<int> RunConfig::*>(b.member) = std::move(list);
      break;
    }
    case ConfigKind::Bool: {
      if (v == "true" || v == "1")
        cfg.*std::get<bool RunConfig::*>(b.member) = true;
      else if (v == "false" || v == "0")
        cfg.*std::get<bool RunConfig::*>(b.member) = false;
      else
        throw std::invalid_argument(key + ": expected true/false, got '" + v + "'");
      break;
    }
  }
}

RunConfig parse_config_text(const std::string& text, RunConfig base) {
  std::vector<std::string> errors;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(line_no) + ": expected key = value");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      config_set(base, key, value);
    } catch (const std::exception& e) {
      errors.push_back("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!errors.empty()) {
    std::string msg = "config errors:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw std::invalid_argument(msg);
  }
  return base;
}

RunConfig parse_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), std::move(base));
}

std::vector<std::string> validate_config(const RunConfig& c) {
  std::vector<std::string> errors;
  auto require = [&](bool ok, const std::string& msg) {
    if (!ok) errors.push_back(msg);
  };
  require(c.algo == "mmddpg" || c.algo == "ddpg" || c.algo == "rarl",
          "algo: must be one of mmddpg, ddpg, rarl");
  require(c.env_name == "point_mass" || c.env_name == "two_link",
          "env: must be one of point_mass, two_link");
  require(c.total_steps >= 0, "total_steps: must be >= 0");
  require(c.checkpoint_every >= 0, "checkpoint_every: must be >= 0");
  require(!c.agent_hidden.empty(), "agent.hidden: need at least one hidden layer");
  for (int h : c.agent_hidden) require(h >= 1, "agent.hidden: sizes must be >= 1");
  require(c.agent_gamma >= 0.0 && c.agent_gamma < 1.0, "agent.gamma: must be in [0, 1)");
  require(c.agent_tau > 0.0 && c.agent_tau <= 1.0, "agent.tau: must be in (0, 1]");
  require(c.agent_eps_norm > 0.0, "agent.eps_norm: must be > 0");
  require(c.agent_batch_size >= 1, "agent.batch_size: must be >= 1");
  require(c.agent_warm_up >= 0, "agent.warm_up: must be >= 0");
  require(c.agent_lr_critic > 0.0, "agent.lr_critic: must be > 0");
  require(c.agent_lr_user > 0.0, "agent.lr_user: must be > 0");
  require(c.agent_lr_adv > 0.0, "agent.lr_adv: must be > 0");
  require(c.buffer_capacity >= 1, "buffer.capacity: must be >= 1");
  require(c.buffer_capacity >= c.agent_batch_size,
          "buffer.capacity: must be >= agent.batch_size");
  require(c.noise_theta >= 0.0, "noise.theta: must be >= 0");
  require(c.noise_sigma >= 0.0, "noise.sigma: must be >= 0");
  require(c.noise_dt > 0.0, "noise.dt: must be > 0");

  auto check_override = [&](double v, bool positive, const std::string& name) {
    if (std::isnan(v)) return;
    if (positive)
      require(v > 0.0, name + ": must be > 0");
    else
      require(v >= 0.0, name + ": must be >= 0");
  };
  check_override(c.env_dt, true, "env.dt");
  if (c.env_horizon != -1) require(c.env_horizon >= 1, "env.horizon: must be >= 1");
  check_override(c.env_action_bound, true, "env.action_bound");
  check_override(c.env_disturbance_bound, true, "env.disturbance_bound");
  check_override(c.env_mass, true, "env.mass");
  check_override(c.env_damping, false, "env.damping");
  check_override(c.env_gear_scale, true, "env.gear_scale");
  check_override(c.env_damping_scale, false, "env.damping_scale");
  check_override(c.env_cost_offset, true, "env.cost_offset");
  check_override(c.env_action_penalty, false, "env.action_penalty");
  check_override(c.env_link_mass_1, true, "env.link_mass_1");
  check_override(c.env_link_mass_2, true, "env.link_mass_2");
  check_override(c.env_link_length_1, true, "env.link_length_1");
  check_override(c.env_link_length_2, true, "env.link_length_2");
  check_override(c.env_init_halfwidth, false, "env.init_halfwidth");
  check_override(c.env_target_radius_min, false, "env.target_radius_min");
  check_override(c.env_target_radius_max, false, "env.target_radius_max");

  require(!c.eval_means.empty(), "eval.means: must not be empty");
  require(!c.eval_stds.empty(), "eval.stds: must not be empty");
  for (double s : c.eval_stds) require(s >= 0.0, "eval.stds: entries must be >= 0");
  for (double m : c.eval_means) require(m >= 0.0, "eval.means: entries must be >= 0");
  require(!c.eval_damping_scales.empty(), "eval.damping_scales: must not be empty");
  for (double s : c.eval_damping_scales)
    require(s >= 0.0, "eval.damping_scales: entries must be >= 0");
  require(!c.eval_gear_scales.empty(), "eval.gear_scales: must not be empty");
  for (double s : c.eval_gear_scales)
    require(s > 0.0, "eval.gear_scales: entries must be > 0");
  require(c.eval_episodes_per_cell >= 1, "eval.episodes_per_cell: must be >= 1");
  require(c.eval_grid_episodes_per_cell >= 1,
          "eval.grid_episodes_per_cell: must be >= 1");
  require(c.eval_gamma >= 0.0 && c.eval_gamma < 1.0, "eval.gamma: must be in [0, 1)");
  return errors;
}

std::string serialize_config(const RunConfig& cfg) {
  std::string out;
  for (const auto& key : config_schema()) {
    out += key.name;
    out += " = ";
    out += config_get(cfg, key.name);
    out += "\n";
  }
  return out;
}

std::uint64_t config_hash(const RunConfig& cfg) {
  const std::string text = serialize_config(cfg);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::unique_ptr<Environment> build_environment(const RunConfig& cfg) {
  EnvSpec spec;
  PhysicsParams phys;
  if (cfg.env_name == "point_mass") {
    spec = PointMassEnv::default_spec();
    phys = PointMassEnv::default_physics();
  } else if (cfg.env_name == "two_link") {
    spec = TwoLinkArmEnv::default_spec();
    phys = TwoLinkArmEnv::default_physics();
  } else {
    throw std::invalid_argument("unknown environment: " + cfg.env_name);
  }
  auto apply = [](double& dst, double v) {
    if (!std::isnan(v)) dst = v;
  };
  apply(spec.dt, cfg.env_dt);
  if (cfg.env_horizon != -1) spec.horizon = static_cast<int>(cfg.env_horizon);
  apply(spec.action_bound, cfg.env_action_bound);
  apply(spec.disturbance_bound, cfg.env_disturbance_bound);
  apply(phys.mass, cfg.env_mass);
  apply(phys.damping_coeff, cfg.env_damping);
  apply(phys.gear_scale, cfg.env_gear_scale);
  apply(phys.damping_scale, cfg.env_damping_scale);
  apply(phys.cost_offset, cfg.env_cost_offset);
  apply(phys.action_penalty, cfg.env_action_penalty);
  apply(phys.link_mass_1, cfg.env_link_mass_1);
  apply(phys.link_mass_2, cfg.env_link_mass_2);
  apply(phys.link_length_1, cfg.env_link_length_1);
  apply(phys.link_length_2, cfg.env_link_length_2);
  apply(phys.init_halfwidth, cfg.env_init_halfwidth);
  apply(phys.target_radius_min, cfg.env_target_radius_min);
  apply(phys.target_radius_max, cfg.env_target_radius_max);
  return make_environment(cfg.env_name, spec, phys);
}

AgentConfig build_agent_config(const RunConfig& cfg, const Environment& env) {
  AgentConfig a;
  a.state_dim = env.spec().state_dim;
  a.action_dim = env.spec().action_dim;
  a.disturbance_dim = env.spec().disturbance_dim;
  a.action_bound = env.spec().action_bound;
  a.disturbance_bound = env.spec().disturbance_bound;
  a.hidden_sizes = cfg.agent_hidden;
  a.lr_critic = cfg.agent_lr_critic;
  a.lr_user = cfg.agent_lr_user;
  a.lr_adv = cfg.agent_lr_adv;
  a.gamma = cfg.agent_gamma;
  a.tau = cfg.agent_tau;
  a.eps_norm = cfg.agent_eps_norm;
  a.batch_size = static_cast<int>(cfg.agent_batch_size);
  a.warm_up = static_cast<int>(cfg.agent_warm_up);
  return a;
}

}  // namespace rrl
