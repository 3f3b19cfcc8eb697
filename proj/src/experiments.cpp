#include "sass/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <regex>
#include <sstream>
#include <thread>

namespace sass {

namespace {

constexpr int kPlacementAttempts = 20000;

const std::vector<std::string>& stat_names() {
  static const std::vector<std::string> names{
      "conflict_frequency", "energy_moving",  "energy_idle",   "energy_comm",
      "energy_comm_negotiation", "total_distance", "per_task_comm", "residual_max",
      "residual_min",       "residual_mean",  "ticks",         "tasks_completed",
      "tasks_timed_out"};
  return names;
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string quote_field(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

double per_task_comm(const MetricsRow& r) {
  const int resolved = r.tasks_completed + r.tasks_timed_out;
  return resolved > 0 ? r.energy_comm / resolved : 0.0;
}

double stat_value(const MetricsRow& r, const std::string& name) {
  if (name == "conflict_frequency") return r.conflict_frequency;
  if (name == "energy_moving") return r.energy_moving;
  if (name == "energy_idle") return r.energy_idle;
  if (name == "energy_comm") return r.energy_comm;
  if (name == "energy_comm_negotiation") return r.energy_comm_negotiation;
  if (name == "total_distance") return r.total_distance;
  if (name == "per_task_comm") return per_task_comm(r);
  if (name == "residual_max") return r.residual_max;
  if (name == "residual_min") return r.residual_min;
  if (name == "residual_mean") return r.residual_mean;
  if (name == "ticks") return r.ticks;
  if (name == "tasks_completed") return r.tasks_completed;
  if (name == "tasks_timed_out") return r.tasks_timed_out;
  throw std::invalid_argument("unknown statistic " + name);
}

std::vector<LawKind> all_laws() {
  return {LawKind::HighE, LawKind::LowE, LawKind::TPlusHighE, LawKind::TPlusLowE, LawKind::CataU};
}

}  // namespace

Scenario generate(const ScenarioTemplate& t, std::uint64_t seed) {
  if (!(t.world_size > 0.0)) throw InvalidTemplate("world_size must be positive");
  if (t.fixed_robots.empty() && t.robot_count < 1) throw InvalidTemplate("robot_count must be >= 1");
  if (!t.arrivals.empty() && t.arrivals.size() != t.required.size()) {
    throw InvalidTemplate("arrivals must list one tick per task");
  }
  if (!(t.battery_sd >= 0.0)) throw InvalidTemplate("battery_sd must be non-negative");
  if (t.task_margin < 0.0 || t.robot_spacing < 0.0) throw InvalidTemplate("spacings must be non-negative");

  std::mt19937_64 rng(seed);
  Scenario s;
  s.world_size = t.world_size;
  s.law = t.law;
  s.comm_range = t.comm_range;
  s.energy = t.energy;
  s.step_length = t.step_length;
  s.safety_radius = t.safety_radius;
  s.formation_radius = t.formation_radius;
  s.seed = seed;
  s.max_ticks = t.max_ticks;
  s.cata = t.cata;
  s.conflict_negotiation = t.conflict_negotiation;
  s.low_battery_threshold = t.low_battery_threshold;
  s.scale = t.scale;
  s.style = t.style;

  const double lo = t.formation_radius + t.task_margin;
  const double hi = t.world_size - lo;
  if (!t.required.empty() && hi < lo) throw InvalidTemplate("world too small for the formation radius");
  std::uniform_real_distribution<double> center_coord(lo, hi);
  for (std::size_t i = 0; i < t.required.size(); ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < kPlacementAttempts && !placed; ++attempt) {
      const Position c{center_coord(rng), center_coord(rng)};
      placed = std::all_of(s.tasks.begin(), s.tasks.end(), [&](const Task& other) {
        return euclidean(c, other.center) >= 2.0 * lo;
      });
      if (placed) {
        Task task;
        task.id = static_cast<TaskId>(i);
        task.center = c;
        task.required = t.required[i];
        task.duration = t.duration;
        task.timeout = t.timeout;
        task.arrival_tick = t.arrivals.empty() ? 0 : t.arrivals[i];
        s.tasks.push_back(task);
      }
    }
    if (!placed) throw InvalidTemplate("could not place task " + std::to_string(i));
  }

  if (!t.fixed_robots.empty()) {
    s.robots = t.fixed_robots;
  } else {
    const double spacing = std::max(t.robot_spacing, 2.0 * t.safety_radius);
    std::uniform_real_distribution<double> coord(0.0, t.world_size);
    for (int i = 0; i < t.robot_count; ++i) {
      bool placed = false;
      for (int attempt = 0; attempt < kPlacementAttempts && !placed; ++attempt) {
        const Position p{coord(rng), coord(rng)};
        const bool clear_of_robots = std::all_of(s.robots.begin(), s.robots.end(), [&](const RobotSpec& r) {
          return euclidean(p, r.position) >= spacing;
        });
        const bool clear_of_tasks = std::all_of(s.tasks.begin(), s.tasks.end(), [&](const Task& task) {
          return euclidean(p, task.center) >= lo;
        });
        placed = clear_of_robots && clear_of_tasks;
        if (placed) s.robots.push_back(RobotSpec{i, p, 100.0});
      }
      if (!placed) throw InvalidTemplate("could not place robot " + std::to_string(i));
    }
    std::normal_distribution<double> battery(t.battery_mean, t.battery_sd > 0.0 ? t.battery_sd : 1.0);
    for (auto& r : s.robots) {
      const double b = t.battery_sd > 0.0 ? battery(rng) : t.battery_mean;
      r.battery = std::clamp(b, 50.0, 100.0);
    }
  }

  try {
    validate(s);
  } catch (const InvalidScenario& e) {
    throw InvalidTemplate(e.what());
  }
  return s;
}

void apply_scale(ScenarioTemplate& t, const std::string& scale) {
  static const std::regex pattern(R"(R(\d+)\+T(\d+))");
  std::smatch m;
  if (!std::regex_match(scale, m, pattern)) throw InvalidTemplate("bad scale '" + scale + "'");
  const int robots = std::stoi(m[1]);
  const int tasks = std::stoi(m[2]);
  if (tasks < 1 || robots < tasks) throw InvalidTemplate("scale '" + scale + "' needs robots >= tasks >= 1");
  t.robot_count = robots;
  t.fixed_robots.clear();
  t.required.assign(static_cast<std::size_t>(tasks), robots / tasks);
  for (int i = 0; i < robots % tasks; ++i) ++t.required[static_cast<std::size_t>(i)];
  t.arrivals.clear();
  t.scale = scale;
}

void apply_style(ScenarioTemplate& t, const std::string& style, int arrival_gap) {
  std::string base = style;
  const std::string nc = "-nc";
  t.conflict_negotiation = true;
  if (base.size() > nc.size() && base.compare(base.size() - nc.size(), nc.size(), nc) == 0) {
    base.erase(base.size() - nc.size());
    t.conflict_negotiation = false;
  }
  t.style = style;
  if (base == "static") {
    t.arrivals.clear();
    return;
  }
  std::vector<int> groups;
  std::istringstream is(base);
  std::string part;
  while (std::getline(is, part, '+')) {
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos) {
      throw InvalidTemplate("bad style '" + style + "'");
    }
    groups.push_back(std::stoi(part));
  }
  int total = 0;
  for (int g : groups) total += g;
  if (groups.empty() || total != static_cast<int>(t.required.size())) {
    throw InvalidTemplate("style '" + style + "' does not cover " + std::to_string(t.required.size()) + " tasks");
  }
  t.arrivals.clear();
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (int k = 0; k < groups[g]; ++k) t.arrivals.push_back(static_cast<int>(g) * arrival_gap);
  }
}

std::vector<Variation> variations(const SweepSpec& spec) {
  std::vector<Variation> out;
  const std::vector<std::string> scales = spec.scales.empty() ? std::vector<std::string>{""} : spec.scales;
  const std::vector<std::string> styles = spec.styles.empty() ? std::vector<std::string>{""} : spec.styles;
  const std::vector<LawKind> laws = spec.laws.empty() ? std::vector<LawKind>{spec.base.law.kind} : spec.laws;
  for (LawKind law : laws) {
    for (const auto& scale : scales) {
      for (const auto& style : styles) out.push_back(Variation{law, scale, style});
    }
  }
  return out;
}

ScenarioTemplate resolve(const SweepSpec& spec, const Variation& v) {
  ScenarioTemplate t = spec.base;
  t.law.kind = v.law;
  if (!v.scale.empty()) apply_scale(t, v.scale);
  if (!v.style.empty()) apply_style(t, v.style, spec.arrival_gap);
  return t;
}

MetricsRow make_row(const Variation& v, int trial, std::uint64_t seed, const RunMetrics& m) {
  MetricsRow row;
  row.law = std::string(law_name(v.law));
  row.scale = v.scale;
  row.style = v.style;
  row.trial = trial;
  row.seed = seed;
  row.conflict_frequency = m.conflict_frequency;
  row.energy_moving = m.energy_moving;
  row.energy_idle = m.energy_idle;
  row.energy_comm = m.energy_comm;
  row.energy_comm_negotiation = m.energy_comm_negotiation;
  row.total_distance = m.total_distance;
  row.residual_max = m.residual_max;
  row.residual_min = m.residual_min;
  row.residual_mean = m.residual_mean;
  row.ticks = m.ticks_elapsed;
  row.tasks_completed = m.tasks_completed;
  row.tasks_timed_out = m.tasks_timed_out;
  return row;
}

std::vector<MetricsRow> run_sweep(const SweepSpec& spec) {
  if (spec.trials < 1) throw InvalidTemplate("trials must be >= 1");
  const auto vars = variations(spec);
  const std::size_t jobs = vars.size() * static_cast<std::size_t>(spec.trials);
  std::vector<MetricsRow> rows(jobs);

  auto work = [&](std::size_t job) {
    const auto& v = vars[job / static_cast<std::size_t>(spec.trials)];
    const int trial = static_cast<int>(job % static_cast<std::size_t>(spec.trials));
    const std::uint64_t seed = spec.base_seed + static_cast<std::uint64_t>(trial);
    try {
      const Scenario s = generate(resolve(spec, v), seed);
      rows[job] = make_row(v, trial, seed, run(s).metrics);
    } catch (const std::exception& e) {
      MetricsRow row;
      row.law = std::string(law_name(v.law));
      row.scale = v.scale;
      row.style = v.style;
      row.trial = trial;
      row.seed = seed;
      row.error = e.what();
      rows[job] = row;
    }
  };

  unsigned threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, jobs));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < threads; ++i) {
    pool.emplace_back([&] {
      for (std::size_t job = next++; job < jobs; job = next++) work(job);
    });
  }
  for (auto& th : pool) th.join();
  return rows;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{
      "law",          "scale",        "style",         "trial",          "seed",
      "conflict_frequency", "energy_moving", "energy_idle", "energy_comm", "energy_comm_negotiation",
      "total_distance", "residual_max", "residual_min", "residual_mean", "ticks",
      "tasks_completed", "tasks_timed_out", "error"};
  return cols;
}

std::string csv_line(const MetricsRow& r) {
  std::ostringstream os;
  os << quote_field(r.law) << ',' << quote_field(r.scale) << ',' << quote_field(r.style) << ',' << r.trial
     << ',' << r.seed << ',' << r.conflict_frequency << ',' << fixed6(r.energy_moving) << ','
     << fixed6(r.energy_idle) << ',' << fixed6(r.energy_comm) << ',' << fixed6(r.energy_comm_negotiation)
     << ',' << fixed6(r.total_distance) << ',' << fixed6(r.residual_max) << ',' << fixed6(r.residual_min)
     << ',' << fixed6(r.residual_mean) << ',' << r.ticks << ',' << r.tasks_completed << ','
     << r.tasks_timed_out << ',' << quote_field(r.error);
  return os.str();
}

void write_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& r : rows) out << csv_line(r) << '\n';
}

std::vector<MetricsRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("metrics CSV is empty");
  if (split_csv(line) != csv_columns()) throw std::runtime_error("metrics CSV header does not match");
  std::vector<MetricsRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != csv_columns().size()) {
      throw std::runtime_error("metrics CSV line " + std::to_string(lineno) + ": wrong field count");
    }
    try {
      MetricsRow r;
      r.law = f[0];
      r.scale = f[1];
      r.style = f[2];
      r.trial = std::stoi(f[3]);
      r.seed = std::stoull(f[4]);
      r.conflict_frequency = std::stoi(f[5]);
      r.energy_moving = std::stod(f[6]);
      r.energy_idle = std::stod(f[7]);
      r.energy_comm = std::stod(f[8]);
      r.energy_comm_negotiation = std::stod(f[9]);
      r.total_distance = std::stod(f[10]);
      r.residual_max = std::stod(f[11]);
      r.residual_min = std::stod(f[12]);
      r.residual_mean = std::stod(f[13]);
      r.ticks = std::stoi(f[14]);
      r.tasks_completed = std::stoi(f[15]);
      r.tasks_timed_out = std::stoi(f[16]);
      r.error = f[17];
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw std::runtime_error("metrics CSV line " + std::to_string(lineno) + ": malformed number");
    }
  }
  return rows;
}

Stat describe(const std::vector<double>& values) {
  Stat s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

std::vector<Aggregate> summarize(const std::vector<MetricsRow>& rows) {
  std::vector<Aggregate> out;
  std::vector<std::vector<const MetricsRow*>> members;
  for (const auto& r : rows) {
    auto it = std::find_if(out.begin(), out.end(), [&](const Aggregate& a) {
      return a.law == r.law && a.scale == r.scale && a.style == r.style;
    });
    std::size_t idx;
    if (it == out.end()) {
      Aggregate a;
      a.law = r.law;
      a.scale = r.scale;
      a.style = r.style;
      out.push_back(a);
      members.emplace_back();
      idx = out.size() - 1;
    } else {
      idx = static_cast<std::size_t>(it - out.begin());
    }
    if (r.error.empty()) {
      members[idx].push_back(&r);
    } else {
      ++out[idx].errors;
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].n = static_cast<int>(members[i].size());
    for (const auto& name : stat_names()) {
      std::vector<double> values;
      for (const MetricsRow* r : members[i]) values.push_back(stat_value(*r, name));
      out[i].stats[name] = describe(values);
    }
  }
  return out;
}

void write_summary(const std::filesystem::path& dir, const std::vector<Aggregate>& aggregates) {
  std::filesystem::create_directories(dir);
  auto open = [&](const std::string& name) {
    std::ofstream f(dir / name);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    return f;
  };
  auto key = [](const Aggregate& a) { return a.law + ',' + a.scale + ',' + a.style; };
  auto ms = [](const Aggregate& a, const std::string& name) {
    const Stat& s = a.stats.at(name);
    return fixed6(s.mean) + ',' + fixed6(s.sd);
  };

  {
    auto f = open("summary.csv");
    f << "law,scale,style,n,errors";
    for (const auto& name : stat_names()) f << ',' << name << "_mean," << name << "_sd";
    f << '\n';
    for (const auto& a : aggregates) {
      f << key(a) << ',' << a.n << ',' << a.errors;
      for (const auto& name : stat_names()) f << ',' << ms(a, name);
      f << '\n';
    }
  }

  auto single = [&](const std::string& file, const std::string& stat) {
    auto f = open(file);
    f << "law,scale,style,mean,sd\n";
    for (const auto& a : aggregates) f << key(a) << ',' << ms(a, stat) << '\n';
  };
  single("conflicts.dat", "conflict_frequency");
  single("distance.dat", "total_distance");
  single("per_task_comm.dat", "per_task_comm");

  {
    auto f = open("energy.dat");
    f << "law,scale,style,moving_mean,moving_sd,idle_mean,idle_sd,comm_mean,comm_sd,"
         "negotiation_mean,negotiation_sd\n";
    for (const auto& a : aggregates) {
      f << key(a) << ',' << ms(a, "energy_moving") << ',' << ms(a, "energy_idle") << ','
        << ms(a, "energy_comm") << ',' << ms(a, "energy_comm_negotiation") << '\n';
    }
  }
  {
    auto f = open("residual.dat");
    f << "law,scale,style,max_mean,max_sd,min_mean,min_sd,mean_mean,mean_sd\n";
    for (const auto& a : aggregates) {
      f << key(a) << ',' << ms(a, "residual_max") << ',' << ms(a, "residual_min") << ','
        << ms(a, "residual_mean") << '\n';
    }
  }
}

SweepSpec builtin_suite(const std::string& name) {
  SweepSpec spec;
  spec.laws = all_laws();
  spec.trials = 10;
  if (name == "static20") {
    spec.scales = {"R20+T3"};
    spec.styles = {"static"};
    spec.base_seed = 1;
  } else if (name == "priority") {
    spec.base.battery_sd = 30.0;
    spec.scales = {"R20+T3"};
    spec.styles = {"static"};
    spec.base_seed = 101;
  } else if (name == "scale") {
    spec.scales = {"R5+T1", "R10+T2", "R15+T3", "R20+T4"};
    spec.styles = {"static"};
    spec.base_seed = 201;
  } else if (name == "dynamic") {
    spec.scales = {"R20+T3"};
    spec.styles = {"1+1+1", "2+1", "1+2", "1+1+1-nc", "2+1-nc", "1+2-nc"};
    spec.base_seed = 301;
  } else {
    throw InvalidTemplate("unknown suite '" + name + "'");
  }
  return spec;
}

std::vector<std::string> builtin_suite_names() {
  return {"static20", "priority", "scale", "dynamic"};
}

}  // namespace sass
