#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sass/engine.hpp"
#include "sass/scenario.hpp"

namespace sass {

class InvalidTemplate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameters from which concrete scenarios are sampled. Positions, centers and
// batteries are drawn per seed; everything else is copied through.
struct ScenarioTemplate {
  double world_size = 60.0;
  int robot_count = 20;
  std::vector<int> required{7, 7, 6};
  std::vector<int> arrivals;  // per task; empty means all at tick 0
  int duration = 10;
  int timeout = 1000;
  double battery_mean = 90.0;
  double battery_sd = 10.0;
  double robot_spacing = 2.0;   // minimum distance between sampled robots
  double task_margin = 2.0;     // clearance around formation circles
  PriorityLaw law;
  CommRange comm_range;
  EnergyModel energy;
  double step_length = 1.0;
  double safety_radius = 0.5;
  double formation_radius = 5.0;
  int max_ticks = 10000;
  CataWeights cata;
  bool conflict_negotiation = true;
  double low_battery_threshold = kLowBatteryThreshold;
  std::vector<RobotSpec> fixed_robots;  // when set, positions and batteries are used as given
  std::string scale;
  std::string style;
};

Scenario generate(const ScenarioTemplate& tmpl, std::uint64_t seed);

// "R20+T4": 20 robots, 4 tasks sharing the robots evenly (remainder to the
// first tasks).
void apply_scale(ScenarioTemplate& tmpl, const std::string& scale);
// "static", or arrival groups such as "1+1+1" or "2+1" spaced arrival_gap
// ticks apart. A "-nc" suffix disables conflict negotiation.
void apply_style(ScenarioTemplate& tmpl, const std::string& style, int arrival_gap);

struct Variation {
  LawKind law = LawKind::TPlusLowE;
  std::string scale;
  std::string style;
};

struct SweepSpec {
  ScenarioTemplate base;
  std::vector<LawKind> laws;
  std::vector<std::string> scales;
  std::vector<std::string> styles;
  int trials = 10;
  std::uint64_t base_seed = 1;
  int arrival_gap = 200;
  unsigned threads = 0;  // 0: hardware concurrency
};

std::vector<Variation> variations(const SweepSpec& spec);
ScenarioTemplate resolve(const SweepSpec& spec, const Variation& v);

struct MetricsRow {
  std::string law;
  std::string scale;
  std::string style;
  int trial = 0;
  std::uint64_t seed = 0;
  int conflict_frequency = 0;
  double energy_moving = 0.0;
  double energy_idle = 0.0;
  double energy_comm = 0.0;
  double energy_comm_negotiation = 0.0;
  double total_distance = 0.0;
  double residual_max = 0.0;
  double residual_min = 0.0;
  double residual_mean = 0.0;
  int ticks = 0;
  int tasks_completed = 0;
  int tasks_timed_out = 0;
  std::string error;
};

MetricsRow make_row(const Variation& v, int trial, std::uint64_t seed, const RunMetrics& m);

// One row per (variation, trial), ordered by variation then trial no matter
// how many worker threads run.
std::vector<MetricsRow> run_sweep(const SweepSpec& spec);

const std::vector<std::string>& csv_columns();
std::string csv_line(const MetricsRow& row);
void write_csv(std::ostream& out, const std::vector<MetricsRow>& rows);
std::vector<MetricsRow> read_csv(std::istream& in);

struct Stat {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation, 0 for a single value
};

Stat describe(const std::vector<double>& values);

struct Aggregate {
  std::string law;
  std::string scale;
  std::string style;
  int n = 0;
  int errors = 0;
  std::map<std::string, Stat> stats;
};

// Groups error-free rows by (law, scale, style) in order of first appearance.
std::vector<Aggregate> summarize(const std::vector<MetricsRow>& rows);

// Writes summary.csv plus conflicts.dat, energy.dat, distance.dat,
// per_task_comm.dat and residual.dat into dir.
void write_summary(const std::filesystem::path& dir, const std::vector<Aggregate>& aggregates);

// Built-in sweeps: static20, priority, scale, dynamic.
SweepSpec builtin_suite(const std::string& name);
std::vector<std::string> builtin_suite_names();

}  // namespace sass
