#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rrl/agents.hpp"
#include "rrl/env.hpp"

namespace rrl {

// Disturbance-sweep protocol: for every (mean magnitude, std) cell, each
// evaluation episode draws a fresh episode-constant Gaussian disturbance
// whose mean is the magnitude times a uniformly random unit direction.
struct SweepConfig {
  std::vector<double> mean_magnitudes{0.0, 1.0, 2.0, 3.0, 5.0};
  std::vector<double> std_devs{0.0, 0.5, 1.0, 2.0};
  int episodes_per_cell = 100;
  double gamma = 0.99;
  std::vector<std::uint64_t> seeds{1};
  bool clamp_disturbance = true;
};

// Parameter-uncertainty protocol: undisturbed rollouts on a grid of
// (damping_scale, gear_scale) variants of the environment.
struct GridConfig {
  std::vector<double> damping_scales{0.2, 0.5, 1.0, 2.0, 5.0};
  std::vector<double> gear_scales{0.5, 0.8, 1.0, 1.2, 1.5};
  int episodes_per_cell = 50;
  double gamma = 0.99;
  std::vector<std::uint64_t> seeds{1};
};

struct ReportCell {
  double param1 = 0.0;  // disturbance mean magnitude, or damping scale
  double param2 = 0.0;  // disturbance std, or gear scale
  std::int64_t seed = 0;  // -1 for pooled cells
  double mean_cost = 0.0;
  double std_cost = 0.0;  // population std over episodes (or over seed means)
  int episodes = 0;
  int invalid = 0;  // faulted episodes, excluded from the stats
  std::vector<double> raw_costs;  // in-memory only, not serialized
};

struct RobustnessReport {
  std::string algorithm;
  std::string env_name;
  std::string condition_kind;  // "sweep" or "grid"
  std::uint64_t checkpoint_hash = 0;
  std::string config_snapshot;
  bool clamped = true;
  int seed_count = 1;
  std::vector<ReportCell> cells;
};

// Discounted cost of one evaluation episode under the frozen user policy;
// `episode_disturbance` (if any) is applied at every step. nullopt on fault.
std::optional<double> rollout_discounted_cost(
    const Agent& agent, const Environment& env,
    const std::optional<std::vector<double>>& episode_disturbance, double gamma,
    Rng& rng);

RobustnessReport disturbance_sweep(const Agent& agent, const Environment& env,
                                   const SweepConfig& config);

RobustnessReport parameter_grid_sweep(const Agent& agent, const Environment& env,
                                      const GridConfig& config);

// Pools reports with identical condition grids: per-cell mean of seed means
// plus the across-seed std of those means (cells carry seed = -1).
RobustnessReport aggregate_across_seeds(const std::vector<RobustnessReport>& reports);

enum class ReportFormat { Csv, Json };
void export_report(const RobustnessReport& report, ReportFormat format,
                   const std::string& path);
RobustnessReport load_report_csv(const std::string& path);

// Cross-algorithm comparison: one row per condition, one mean column per
// report plus cost ratios against the first report. Reports with per-seed
// records are pooled first.
std::string compare_reports(const std::vector<RobustnessReport>& reports);

}  // namespace rrl
