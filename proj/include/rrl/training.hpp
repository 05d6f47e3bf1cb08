#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rrl/agents.hpp"
#include "rrl/config.hpp"

namespace rrl {

// One row per finished (or final partial) episode of a training run.
struct EpisodeRecord {
  int episode = 0;
  std::int64_t steps_done = 0;       // env steps consumed so far
  int episode_steps = 0;
  double discounted_cost = 0.0;      // sum gamma^k c_{k+1} over the episode
  double disturbance_energy = 0.0;   // sum gamma^k ||w_k||^2
  double j1_running = 0.0;           // EMA of episode discounted cost
  double j2_running = 0.0;           // EMA of episode disturbance energy
  double ratio_running = 0.0;
  double mean_disturbance_norm = 0.0;
  double critic1_loss = 0.0;         // means over the episode's update steps
  double critic2_loss = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
};

struct TrainOutput {
  std::string out_dir;
  std::string manifest_path;
  std::string log_path;
  std::string final_checkpoint;
  std::vector<std::string> checkpoints;
  std::vector<EpisodeRecord> episodes;
  std::int64_t steps_done = 0;
  int fault_count = 0;
  std::uint64_t config_hash_value = 0;
};

// Full seeded training run: episodes until total_steps env steps, periodic
// checkpoints, per-episode CSV log, manifest written at the end. The agent
// is returned so callers can evaluate it without reloading.
struct TrainRun {
  TrainOutput output;
  std::unique_ptr<Agent> agent;
  std::unique_ptr<Environment> env;
};

TrainRun run_training(const RunConfig& cfg);

std::string episode_log_header();
std::string format_episode_record(const EpisodeRecord& r);

}  // namespace rrl
