// Command-line entry point: seeded training runs, robustness evaluation
// sweeps and cross-algorithm report comparison.
//
//   rrl train   --config run.cfg --seed 7 --algo mmddpg --env point_mass --out runs/a
//   rrl eval    --checkpoint runs/a/checkpoint_final.bin --eval-kind sweep --out reports
//   rrl compare --report a.csv --report b.csv --out comparison.csv
//
// Every config key (agent.gamma, env.dt, ...) is also accepted as a flag of
// the same name and overrides the config file.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rrl/checkpoint.hpp"
#include "rrl/config.hpp"
#include "rrl/evaluation.hpp"
#include "rrl/training.hpp"

namespace {

struct KeyOverrides {
  std::map<std::string, std::string> values;
};

// registers --<key> for every config key so flags mirror the file format;
// algo/env/seed already exist as dedicated flags on every subcommand
void add_config_flags(CLI::App* cmd, KeyOverrides& overrides) {
  for (const auto& key : rrl::config_schema()) {
    const std::string keyname = key.name;
    if (keyname == "algo" || keyname == "env" || keyname == "seed") continue;
    const std::string name = std::string("--") + key.name;
    cmd->add_option_function<std::string>(
        name,
        [&overrides, key](const std::string& v) { overrides.values[key.name] = v; },
        "config key " + std::string(key.name));
  }
}

rrl::RunConfig assemble_config(const std::string& config_path,
                               const KeyOverrides& overrides) {
  rrl::RunConfig cfg;
  if (!config_path.empty()) cfg = rrl::parse_config_file(config_path);
  for (const auto& [key, value] : overrides.values) rrl::config_set(cfg, key, value);
  const auto errors = rrl::validate_config(cfg);
  if (!errors.empty()) {
    std::string msg = "invalid config:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw std::invalid_argument(msg);
  }
  return cfg;
}

int cmd_train(const std::string& config_path, const KeyOverrides& overrides) {
  const rrl::RunConfig cfg = assemble_config(config_path, overrides);
  const rrl::TrainRun run = rrl::run_training(cfg);
  std::cout << "trained " << cfg.algo << " on " << cfg.env_name << " for "
            << run.output.steps_done << " steps (" << run.output.episodes.size()
            << " episodes, " << run.output.fault_count << " faults)\n"
            << "manifest: " << run.output.manifest_path << "\n"
            << "log:      " << run.output.log_path << "\n"
            << "checkpoint: " << run.output.final_checkpoint << "\n";
  return 0;
}

int cmd_eval(const std::string& config_path, const KeyOverrides& overrides,
             const std::string& checkpoint_path, const std::string& eval_kind) {
  const rrl::RunConfig cfg = assemble_config(config_path, overrides);
  if (eval_kind != "sweep" && eval_kind != "grid")
    throw std::invalid_argument("--eval-kind must be sweep or grid");

  auto env = rrl::build_environment(cfg);
  rrl::Rng init_rng(rrl::mix_seed(cfg.seed, 0x01));
  auto agent = rrl::make_agent(cfg.algo, rrl::build_agent_config(cfg, *env), init_rng);
  const std::uint64_t stored_hash = rrl::load_checkpoint(checkpoint_path, *agent);

  rrl::RobustnessReport report;
  if (eval_kind == "sweep") {
    rrl::SweepConfig sc;
    sc.mean_magnitudes = cfg.eval_means;
    sc.std_devs = cfg.eval_stds;
    sc.episodes_per_cell = static_cast<int>(cfg.eval_episodes_per_cell);
    sc.gamma = cfg.eval_gamma;
    sc.seeds = {cfg.seed};
    sc.clamp_disturbance = cfg.eval_clamp_disturbance;
    report = rrl::disturbance_sweep(*agent, *env, sc);
  } else {
    rrl::GridConfig gc;
    gc.damping_scales = cfg.eval_damping_scales;
    gc.gear_scales = cfg.eval_gear_scales;
    gc.episodes_per_cell = static_cast<int>(cfg.eval_grid_episodes_per_cell);
    gc.gamma = cfg.eval_gamma;
    gc.seeds = {cfg.seed};
    report = rrl::parameter_grid_sweep(*agent, *env, gc);
  }
  report.checkpoint_hash = stored_hash;
  report.config_snapshot = rrl::serialize_config(cfg);

  std::filesystem::create_directories(cfg.out_dir);
  const std::string base = cfg.out_dir + "/" + cfg.algo + "_" + cfg.env_name + "_" +
                           eval_kind + "_" + std::to_string(cfg.seed);
  rrl::export_report(report, rrl::ReportFormat::Csv, base + ".csv");
  rrl::export_report(report, rrl::ReportFormat::Json, base + ".json");
  std::cout << "evaluated " << report.cells.size() << " cells\n"
            << "report: " << base << ".csv\n"
            << "report: " << base << ".json\n";
  return 0;
}

int cmd_compare(const std::vector<std::string>& report_paths, const std::string& out) {
  if (report_paths.size() < 2)
    throw std::invalid_argument("compare: need at least two --report files");
  std::vector<rrl::RobustnessReport> reports;
  for (const auto& p : report_paths) reports.push_back(rrl::load_report_csv(p));
  const std::string table = rrl::compare_reports(reports);
  if (out.empty()) {
    std::cout << table;
  } else {
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot open " + out);
    f << table;
    std::cout << "comparison: " << out << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust RL: minimax deterministic actor-critic training and "
               "robustness evaluation"};
  app.require_subcommand(1);

  std::string config_path, checkpoint_path, eval_kind = "sweep", compare_out;
  std::vector<std::string> report_paths;
  KeyOverrides train_overrides, eval_overrides;

  CLI::App* train = app.add_subcommand("train", "run a seeded training run");
  train->add_option("--config", config_path, "config file (key = value lines)");
  train->add_option("--seed", [&](const CLI::results_t& r) {
    train_overrides.values["seed"] = r[0];
    return true;
  }, "random seed");
  train->add_option("--algo", [&](const CLI::results_t& r) {
    train_overrides.values["algo"] = r[0];
    return true;
  }, "mmddpg | ddpg | rarl");
  train->add_option("--env", [&](const CLI::results_t& r) {
    train_overrides.values["env"] = r[0];
    return true;
  }, "point_mass | two_link");
  train->add_option("--out", [&](const CLI::results_t& r) {
    train_overrides.values["out_dir"] = r[0];
    return true;
  }, "output directory");
  train->add_option("--steps", [&](const CLI::results_t& r) {
    train_overrides.values["total_steps"] = r[0];
    return true;
  }, "total environment steps");
  add_config_flags(train, train_overrides);

  CLI::App* eval = app.add_subcommand("eval", "evaluate a checkpoint");
  eval->add_option("--config", config_path, "config file (key = value lines)");
  eval->add_option("--checkpoint", checkpoint_path, "checkpoint file")->required();
  eval->add_option("--eval-kind", eval_kind, "sweep | grid");
  eval->add_option("--seed", [&](const CLI::results_t& r) {
    eval_overrides.values["seed"] = r[0];
    return true;
  }, "random seed");
  eval->add_option("--algo", [&](const CLI::results_t& r) {
    eval_overrides.values["algo"] = r[0];
    return true;
  }, "mmddpg | ddpg | rarl");
  eval->add_option("--env", [&](const CLI::results_t& r) {
    eval_overrides.values["env"] = r[0];
    return true;
  }, "point_mass | two_link");
  eval->add_option("--out", [&](const CLI::results_t& r) {
    eval_overrides.values["out_dir"] = r[0];
    return true;
  }, "output directory");
  add_config_flags(eval, eval_overrides);

  CLI::App* compare = app.add_subcommand("compare", "merge robustness reports");
  compare->add_option("--report", report_paths, "report CSV (repeatable)")->required();
  compare->add_option("--out", compare_out, "output CSV path (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) return cmd_train(config_path, train_overrides);
    if (eval->parsed()) return cmd_eval(config_path, eval_overrides, checkpoint_path, eval_kind);
    if (compare->parsed()) return cmd_compare(report_paths, compare_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
