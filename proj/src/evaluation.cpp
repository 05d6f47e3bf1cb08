#include "rrl/evaluation.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "rrl/config.hpp"

namespace {

// per-cell seeds hash the condition values, so evaluation order and list
// permutations cannot change any cell's result
std::uint64_t double_bits(double v) {
  std::uint64_t bits;
  static_assert(sizeof(bits) == sizeof(v));
  std::memcpy(&bits, &v, sizeof(bits));
  return bits;
}

}  // namespace

namespace rrl {

namespace {

struct Stats {
  double mean = 0.0;
  double std_dev = 0.0;
};

Stats population_stats(const std::vector<double>& values) {
  Stats s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) {
    const double d = v - s.mean;
    var += d * d;
  }
  s.std_dev = std::sqrt(var / static_cast<double>(values.size()));
  return s;
}

ReportCell make_cell(double p1, double p2, std::int64_t seed,
                     std::vector<double> costs, int invalid) {
  ReportCell cell;
  cell.param1 = p1;
  cell.param2 = p2;
  cell.seed = seed;
  cell.episodes = static_cast<int>(costs.size());
  cell.invalid = invalid;
  const Stats s = population_stats(costs);
  cell.mean_cost = s.mean;
  cell.std_cost = s.std_dev;
  cell.raw_costs = std::move(costs);
  return cell;
}

std::string csv_escape(const std::string& s) { return s; }  // fields carry no commas

}  // namespace

std::optional<double> rollout_discounted_cost(
    const Agent& agent, const Environment& env,
    const std::optional<std::vector<double>>& episode_disturbance, double gamma,
    Rng& rng) {
  const std::vector<double> zero(env.spec().disturbance_dim, 0.0);
  const std::vector<double>& w = episode_disturbance ? *episode_disturbance : zero;
  EnvState state = env.reset(rng);
  double total = 0.0, discount = 1.0;
  while (true) {
    const auto obs = env.observe(state);
    const auto action = agent.select_action(obs);
    const StepOutcome out = env.step(state, action, w);
    if (out.fault) return std::nullopt;
    total += discount * out.cost;
    discount *= gamma;
    state = out.next;
    if (out.terminal) break;
  }
  return total;
}

RobustnessReport disturbance_sweep(const Agent& agent, const Environment& env,
                                   const SweepConfig& config) {
  if (config.episodes_per_cell < 1)
    throw std::invalid_argument("sweep: episodes_per_cell must be >= 1");
  if (config.mean_magnitudes.empty() || config.std_devs.empty())
    throw std::invalid_argument("sweep: empty condition lists");

  RobustnessReport report;
  report.algorithm = agent.algorithm();
  report.env_name = env.name();
  report.condition_kind = "sweep";
  report.clamped = config.clamp_disturbance;
  report.seed_count = static_cast<int>(config.seeds.size());

  const int d = env.spec().disturbance_dim;
  const double bound = env.spec().disturbance_bound;
  for (const std::uint64_t seed : config.seeds) {
    for (std::size_t i = 0; i < config.mean_magnitudes.size(); ++i) {
      for (std::size_t j = 0; j < config.std_devs.size(); ++j) {
        const double magnitude = config.mean_magnitudes[i];
        const double std_dev = config.std_devs[j];
        Rng rng(mix_seed(mix_seed(mix_seed(seed, 0x5eedu), double_bits(magnitude)),
                         double_bits(std_dev)));
        std::vector<double> costs;
        int invalid = 0;
        for (int ep = 0; ep < config.episodes_per_cell; ++ep) {
          DisturbanceSpec spec;
          spec.mode = DisturbanceSpec::Mode::EpisodeConstantGaussian;
          spec.mean = rng.unit_vector(d);
          for (auto& x : spec.mean) x *= magnitude;
          spec.std_dev.assign(d, std_dev);
          spec.clamp_to_bound = config.clamp_disturbance;
          const auto w = sample_episode_disturbance(spec, bound, rng);
          const auto cost = rollout_discounted_cost(agent, env, w, config.gamma, rng);
          if (cost)
            costs.push_back(*cost);
          else
            ++invalid;
        }
        report.cells.push_back(make_cell(magnitude, std_dev,
                                         static_cast<std::int64_t>(seed),
                                         std::move(costs), invalid));
      }
    }
  }
  return report;
}

RobustnessReport parameter_grid_sweep(const Agent& agent, const Environment& env,
                                      const GridConfig& config) {
  if (config.episodes_per_cell < 1)
    throw std::invalid_argument("grid: episodes_per_cell must be >= 1");
  if (config.damping_scales.empty() || config.gear_scales.empty())
    throw std::invalid_argument("grid: empty scale lists");

  RobustnessReport report;
  report.algorithm = agent.algorithm();
  report.env_name = env.name();
  report.condition_kind = "grid";
  report.seed_count = static_cast<int>(config.seeds.size());

  for (const std::uint64_t seed : config.seeds) {
    for (std::size_t i = 0; i < config.damping_scales.size(); ++i) {
      for (std::size_t j = 0; j < config.gear_scales.size(); ++j) {
        const double damping = config.damping_scales[i];
        const double gear = config.gear_scales[j];
        Rng rng(mix_seed(mix_seed(mix_seed(seed, 0x6e1du), double_bits(damping)),
                         double_bits(gear)));
        const auto scaled = apply_param_scaling(env, gear, damping);
        std::vector<double> costs;
        int invalid = 0;
        for (int ep = 0; ep < config.episodes_per_cell; ++ep) {
          const auto cost =
              rollout_discounted_cost(agent, *scaled, std::nullopt, config.gamma, rng);
          if (cost)
            costs.push_back(*cost);
          else
            ++invalid;
        }
        report.cells.push_back(make_cell(damping, gear, static_cast<std::int64_t>(seed),
                                         std::move(costs), invalid));
      }
    }
  }
  return report;
}

RobustnessReport aggregate_across_seeds(const std::vector<RobustnessReport>& reports) {
  if (reports.empty()) throw std::invalid_argument("aggregate: no reports");
  const auto& first = reports.front();
  for (const auto& r : reports) {
    if (r.condition_kind != first.condition_kind || r.env_name != first.env_name ||
        r.algorithm != first.algorithm || r.cells.size() != first.cells.size())
      throw std::invalid_argument("aggregate: reports do not share a grid");
    for (std::size_t i = 0; i < r.cells.size(); ++i)
      if (r.cells[i].param1 != first.cells[i].param1 ||
          r.cells[i].param2 != first.cells[i].param2)
        throw std::invalid_argument("aggregate: condition mismatch at cell " +
                                    std::to_string(i));
  }

  RobustnessReport pooled;
  pooled.algorithm = first.algorithm;
  pooled.env_name = first.env_name;
  pooled.condition_kind = first.condition_kind;
  pooled.checkpoint_hash = first.checkpoint_hash;
  pooled.config_snapshot = first.config_snapshot;
  pooled.clamped = first.clamped;
  pooled.seed_count = 0;
  for (const auto& r : reports) pooled.seed_count += r.seed_count;

  for (std::size_t i = 0; i < first.cells.size(); ++i) {
    std::vector<double> seed_means;
    std::vector<double> raw;
    int episodes = 0, invalid = 0;
    for (const auto& r : reports) {
      seed_means.push_back(r.cells[i].mean_cost);
      episodes += r.cells[i].episodes;
      invalid += r.cells[i].invalid;
      raw.insert(raw.end(), r.cells[i].raw_costs.begin(), r.cells[i].raw_costs.end());
    }
    const Stats s = population_stats(seed_means);
    ReportCell cell;
    cell.param1 = first.cells[i].param1;
    cell.param2 = first.cells[i].param2;
    cell.seed = -1;
    cell.mean_cost = s.mean;
    cell.std_cost = s.std_dev;
    cell.episodes = episodes;
    cell.invalid = invalid;
    cell.raw_costs = std::move(raw);
    pooled.cells.push_back(std::move(cell));
  }
  return pooled;
}

void export_report(const RobustnessReport& report, ReportFormat format,
                   const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_report: cannot open " + path);
  if (format == ReportFormat::Csv) {
    out << "algorithm,env,condition_kind,param1,param2,seed,mean_cost,std_cost,episodes\n";
    for (const auto& c : report.cells) {
      out << csv_escape(report.algorithm) << ',' << csv_escape(report.env_name) << ','
          << csv_escape(report.condition_kind) << ',' << format_double(c.param1) << ','
          << format_double(c.param2) << ',' << c.seed << ','
          << format_double(c.mean_cost) << ',' << format_double(c.std_cost) << ','
          << c.episodes << '\n';
    }
  } else {
    nlohmann::json j;
    j["metadata"] = {{"algorithm", report.algorithm},
                     {"env", report.env_name},
                     {"condition_kind", report.condition_kind},
                     {"checkpoint_hash", report.checkpoint_hash},
                     {"clamped", report.clamped},
                     {"seed_count", report.seed_count},
                     {"config", report.config_snapshot}};
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : report.cells) {
      cells.push_back({{"param1", c.param1},
                       {"param2", c.param2},
                       {"seed", c.seed},
                       {"mean_cost", c.mean_cost},
                       {"std_cost", c.std_cost},
                       {"episodes", c.episodes},
                       {"invalid", c.invalid}});
    }
    j["cells"] = std::move(cells);
    out << j.dump(2) << '\n';
  }
  if (!out) throw std::runtime_error("export_report: write failed: " + path);
}

RobustnessReport load_report_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_report_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("load_report_csv: empty file " + path);
  const std::string expected =
      "algorithm,env,condition_kind,param1,param2,seed,mean_cost,std_cost,episodes";
  if (line != expected)
    throw std::runtime_error("load_report_csv: unexpected header in " + path);

  RobustnessReport report;
  bool first_row = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 9)
      throw std::runtime_error("load_report_csv: malformed row in " + path);
    if (first_row) {
      report.algorithm = fields[0];
      report.env_name = fields[1];
      report.condition_kind = fields[2];
      first_row = false;
    }
    ReportCell cell;
    cell.param1 = std::stod(fields[3]);
    cell.param2 = std::stod(fields[4]);
    cell.seed = std::stoll(fields[5]);
    cell.mean_cost = std::stod(fields[6]);
    cell.std_cost = std::stod(fields[7]);
    cell.episodes = std::stoi(fields[8]);
    report.cells.push_back(std::move(cell));
  }
  return report;
}

std::string compare_reports(const std::vector<RobustnessReport>& reports) {
  if (reports.empty()) throw std::invalid_argument("compare: no reports");

  // pool per-seed records within each report so every report has one row
  // per condition
  std::vector<RobustnessReport> pooled;
  for (const auto& r : reports) {
    std::vector<std::pair<double, double>> conditions;
    for (const auto& c : r.cells) {
      const std::pair<double, double> key{c.param1, c.param2};
      bool found = false;
      for (const auto& k : conditions) found = found || k == key;
      if (!found) conditions.push_back(key);
    }
    RobustnessReport p;
    p.algorithm = r.algorithm;
    p.env_name = r.env_name;
    p.condition_kind = r.condition_kind;
    for (const auto& [p1, p2] : conditions) {
      std::vector<double> means;
      int episodes = 0;
      for (const auto& c : r.cells)
        if (c.param1 == p1 && c.param2 == p2) {
          means.push_back(c.mean_cost);
          episodes += c.episodes;
        }
      ReportCell cell;
      cell.param1 = p1;
      cell.param2 = p2;
      cell.seed = -1;
      cell.mean_cost = population_stats(means).mean;
      cell.episodes = episodes;
      p.cells.push_back(cell);
    }
    pooled.push_back(std::move(p));
  }

  const auto& base = pooled.front();
  for (const auto& p : pooled) {
    if (p.cells.size() != base.cells.size() ||
        p.condition_kind != base.condition_kind)
      throw std::invalid_argument("compare: reports do not share a condition grid");
    for (std::size_t i = 0; i < p.cells.size(); ++i)
      if (p.cells[i].param1 != base.cells[i].param1 ||
          p.cells[i].param2 != base.cells[i].param2)
        throw std::invalid_argument("compare: condition mismatch");
  }

  std::string out = "condition_kind,param1,param2";
  for (const auto& p : pooled) out += "," + p.algorithm + "_mean";
  for (std::size_t k = 1; k < pooled.size(); ++k)
    out += "," + pooled[k].algorithm + "_over_" + base.algorithm;
  out += "\n";
  for (std::size_t i = 0; i < base.cells.size(); ++i) {
    out += base.condition_kind + "," + format_double(base.cells[i].param1) + "," +
           format_double(base.cells[i].param2);
    for (const auto& p : pooled) out += "," + format_double(p.cells[i].mean_cost);
    for (std::size_t k = 1; k < pooled.size(); ++k)
      out += "," + format_double(pooled[k].cells[i].mean_cost / base.cells[i].mean_cost);
    out += "\n";
  }
  return out;
}

}  // namespace rrl
