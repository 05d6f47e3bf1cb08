#include "rrl/training.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "rrl/checkpoint.hpp"

namespace rrl {

namespace {

constexpr double kRunningEstimateRate = 0.1;  // EMA over episodes

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

}  // namespace

std::string episode_log_header() {
  return "episode,steps_done,episode_steps,discounted_cost,disturbance_energy,"
         "j1_running,j2_running,ratio_running,mean_disturbance_norm,"
         "critic1_loss,critic2_loss,m1,m2";
}

std::string format_episode_record(const EpisodeRecord& r) {
  std::string line;
  line += std::to_string(r.episode);
  line += "," + std::to_string(r.steps_done);
  line += "," + std::to_string(r.episode_steps);
  line += "," + format_double(r.discounted_cost);
  line += "," + format_double(r.disturbance_energy);
  line += "," + format_double(r.j1_running);
  line += "," + format_double(r.j2_running);
  line += "," + format_double(r.ratio_running);
  line += "," + format_double(r.mean_disturbance_norm);
  line += "," + format_double(r.critic1_loss);
  line += "," + format_double(r.critic2_loss);
  line += "," + format_double(r.m1);
  line += "," + format_double(r.m2);
  return line;
}

TrainRun run_training(const RunConfig& cfg) {
  {
    const auto errors = validate_config(cfg);
    if (!errors.empty()) {
      std::string msg = "invalid config:";
      for (const auto& e : errors) msg += "\n  " + e;
      throw std::invalid_argument(msg);
    }
  }

  const std::string start_time = timestamp_utc();
  TrainRun run;
  run.env = build_environment(cfg);
  const Environment& env = *run.env;

  // independent sub-streams so reordering one concern cannot shift another
  Rng rng_init(mix_seed(cfg.seed, 0x01));
  Rng rng_env(mix_seed(cfg.seed, 0x02));
  Rng rng_noise(mix_seed(cfg.seed, 0x03));
  Rng rng_sample(mix_seed(cfg.seed, 0x04));

  run.agent = make_agent(cfg.algo, build_agent_config(cfg, env), rng_init);
  Agent& agent = *run.agent;

  ReplayBuffer buffer(static_cast<std::size_t>(cfg.buffer_capacity),
                      env.spec().state_dim, env.spec().action_dim,
                      env.spec().disturbance_dim);
  OuProcess action_noise(env.spec().action_dim, cfg.noise_theta, cfg.noise_sigma,
                         cfg.noise_dt, std::vector<double>(env.spec().action_dim, cfg.noise_mu));
  OuProcess dist_noise(env.spec().disturbance_dim, cfg.noise_theta, cfg.noise_sigma,
                       cfg.noise_dt,
                       std::vector<double>(env.spec().disturbance_dim, cfg.noise_mu));

  TrainOutput& out = run.output;
  out.out_dir = cfg.out_dir;
  out.config_hash_value = config_hash(cfg);
  std::filesystem::create_directories(cfg.out_dir);
  out.log_path = cfg.out_dir + "/training_log.csv";
  std::ofstream log(out.log_path);
  if (!log) throw std::runtime_error("cannot open training log: " + out.log_path);
  log << episode_log_header() << '\n';

  EnvState state = env.reset(rng_env);
  action_noise.reset();
  dist_noise.reset();

  const double gamma = cfg.agent_gamma;
  int episode = 0, episode_steps = 0;
  double ep_cost = 0.0, ep_energy = 0.0, ep_discount = 1.0, ep_wnorm = 0.0;
  double ep_l1 = 0.0, ep_l2 = 0.0, ep_m1 = 0.0, ep_m2 = 0.0;
  int ep_updates = 0;
  double j1_run = 0.0, j2_run = 0.0;
  bool have_running = false;

  auto flush_episode = [&]() {
    if (episode_steps == 0) return;
    EpisodeRecord rec;
    rec.episode = episode;
    rec.steps_done = out.steps_done;
    rec.episode_steps = episode_steps;
    rec.discounted_cost = ep_cost;
    rec.disturbance_energy = ep_energy;
    if (!have_running) {
      j1_run = ep_cost;
      j2_run = ep_energy;
      have_running = true;
    } else {
      j1_run += kRunningEstimateRate * (ep_cost - j1_run);
      j2_run += kRunningEstimateRate * (ep_energy - j2_run);
    }
    rec.j1_running = j1_run;
    rec.j2_running = j2_run;
    rec.ratio_running = j1_run / std::max(j2_run, cfg.agent_eps_norm);
    rec.mean_disturbance_norm = ep_wnorm / episode_steps;
    if (ep_updates > 0) {
      rec.critic1_loss = ep_l1 / ep_updates;
      rec.critic2_loss = ep_l2 / ep_updates;
      rec.m1 = ep_m1 / ep_updates;
      rec.m2 = ep_m2 / ep_updates;
    }
    log << format_episode_record(rec) << '\n';
    out.episodes.push_back(std::move(rec));
    ++episode;
    episode_steps = 0;
    ep_cost = ep_energy = ep_wnorm = 0.0;
    ep_discount = 1.0;
    ep_l1 = ep_l2 = ep_m1 = ep_m2 = 0.0;
    ep_updates = 0;
  };

  auto maybe_checkpoint = [&]() {
    if (cfg.checkpoint_every > 0 && out.steps_done > 0 &&
        out.steps_done % cfg.checkpoint_every == 0) {
      const std::string path =
          cfg.out_dir + "/checkpoint_" + std::to_string(out.steps_done) + ".bin";
      save_checkpoint(path, agent, out.config_hash_value);
      out.checkpoints.push_back(path);
    }
  };

  while (out.steps_done < cfg.total_steps) {
    TrainStepResult result = train_step(agent, env, state, buffer, action_noise,
                                        dist_noise, rng_noise, rng_sample);
    if (result.fault) {
      ++out.fault_count;
      if (out.fault_count > 1000)
        throw std::runtime_error("training aborted: over 1000 environment faults");
      flush_episode();
      state = env.reset(rng_env);
      action_noise.reset();
      dist_noise.reset();
      continue;
    }
    ++out.steps_done;
    ++episode_steps;
    ep_cost += ep_discount * result.cost;
    ep_energy += ep_discount * result.log.disturbance_norm * result.log.disturbance_norm;
    ep_discount *= gamma;
    ep_wnorm += result.log.disturbance_norm;
    if (result.log.updated) {
      ep_l1 += result.log.critic1_loss;
      ep_l2 += result.log.critic2_loss;
      ep_m1 += result.log.m1;
      ep_m2 += result.log.m2;
      ++ep_updates;
    }
    maybe_checkpoint();
    if (result.terminal) {
      flush_episode();
      state = env.reset(rng_env);
      action_noise.reset();
      dist_noise.reset();
    }
  }
  flush_episode();
  log.close();

  out.final_checkpoint = cfg.out_dir + "/checkpoint_final.bin";
  save_checkpoint(out.final_checkpoint, agent, out.config_hash_value);
  out.checkpoints.push_back(out.final_checkpoint);

  // manifest last, written atomically
  out.manifest_path = cfg.out_dir + "/manifest.json";
  nlohmann::json manifest;
  manifest["config"] = serialize_config(cfg);
  manifest["config_hash"] = out.config_hash_value;
  manifest["algorithm"] = cfg.algo;
  manifest["env"] = cfg.env_name;
  manifest["seed"] = cfg.seed;
  manifest["steps_done"] = out.steps_done;
  manifest["episodes"] = static_cast<int>(out.episodes.size());
  manifest["fault_count"] = out.fault_count;
  manifest["training_log"] = out.log_path;
  manifest["checkpoints"] = out.checkpoints;
  manifest["started_utc"] = start_time;
  manifest["finished_utc"] = timestamp_utc();
  const std::string tmp = out.manifest_path + ".tmp";
  {
    std::ofstream mf(tmp);
    if (!mf) throw std::runtime_error("cannot write manifest: " + tmp);
    mf << manifest.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, out.manifest_path);
  return run;
}

}  // namespace rrl
