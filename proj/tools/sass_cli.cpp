#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "sass/engine.hpp"
#include "sass/experiments.hpp"
#include "sass/scenario.hpp"

namespace fs = std::filesystem;
using namespace sass;

namespace {

constexpr int kOk = 0;
constexpr int kRowError = 1;
constexpr int kInvalidInput = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

LawKind law_or_throw(const std::string& name) {
  auto k = parse_law(name);
  if (!k) throw InputError("unknown law '" + name + "' (expected high_e, low_e, t_high_e, t_low_e or cata_u)");
  return *k;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) throw InputError("cannot write " + path.string());
  return f;
}

void write_trace(const fs::path& path, const std::vector<TraceEvent>& trace) {
  auto f = open_out(path);
  for (const auto& e : trace) f << e.to_json_line() << '\n';
}

void print_event(const TraceEvent& e) {
  std::string subjects;
  for (std::size_t i = 0; i < e.subjects.size(); ++i) subjects += (i ? "," : "") + std::to_string(e.subjects[i]);
  std::printf("%6d  %-16s [%s] %s\n", e.tick, std::string(event_kind_name(e.kind)).c_str(), subjects.c_str(),
              e.detail.empty() ? "" : e.detail.dump().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Needs-driven multi-robot task allocation simulator"};
  app.require_subcommand(1);

  std::string scenario_path, out, law, in_path, trace_path, scale = "R20+T3", style = "static", suite;
  std::uint64_t seed = 1;
  int trials = 0;
  unsigned threads = 0;
  bool trace = false;
  double battery_sd = 10.0;

  auto* gen = app.add_subcommand("generate", "sample a scenario from the built-in template");
  gen->add_option("--seed", seed, "sampling seed");
  gen->add_option("--law", law, "priority law");
  gen->add_option("--scale", scale, "team scale such as R20+T3");
  gen->add_option("--style", style, "static, or arrival groups such as 1+1+1 (suffix -nc disables conflict negotiation)");
  gen->add_option("--battery-sd", battery_sd, "battery standard deviation");
  gen->add_option("--out", out, "output directory (writes scenario.json); stdout if omitted");

  auto* runc = app.add_subcommand("run", "run one scenario");
  runc->add_option("--scenario", scenario_path, "scenario JSON")->required();
  runc->add_option("--law", law, "override the scenario's law");
  runc->add_option("--seed", seed, "override the recorded seed");
  runc->add_option("--out", out, "output directory for metrics.csv and trace.jsonl");
  runc->add_flag("--trace", trace, "write the event trace");

  auto* sweep = app.add_subcommand("sweep", "run a built-in sweep");
  sweep->add_option("--suite", suite, "static20, priority, scale or dynamic")->required();
  sweep->add_option("--trials", trials, "trials per variation");
  sweep->add_option("--seed", seed, "base seed; trial i uses seed + i");
  sweep->add_option("--law", law, "restrict to one law");
  sweep->add_option("--threads", threads, "worker threads (0: all cores)");
  sweep->add_option("--out", out, "output directory for metrics.csv; stdout if omitted");

  auto* summ = app.add_subcommand("summarize", "aggregate a metrics CSV");
  summ->add_option("--in", in_path, "metrics CSV")->required();
  summ->add_option("--out", out, "output directory for summary.csv and plot data")->required();

  auto* replay = app.add_subcommand("replay", "pretty-print a trace");
  replay->add_option("--trace", trace_path, "trace JSON-lines file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalidInput;
  }

  try {
    if (*gen) {
      SweepSpec spec;
      spec.base.battery_sd = battery_sd;
      Variation v{law.empty() ? spec.base.law.kind : law_or_throw(law), scale, style};
      const Scenario s = generate(resolve(spec, v), seed);
      if (out.empty()) {
        std::cout << to_json(s).dump(2) << '\n';
      } else {
        fs::create_directories(out);
        save_scenario(s, fs::path(out) / "scenario.json");
      }
      return kOk;
    }

    if (*runc) {
      Scenario s = load_scenario(scenario_path);
      if (!law.empty()) s.law.kind = law_or_throw(law);
      if (runc->count("--seed")) s.seed = seed;
      const Variation v{s.law.kind, s.scale, s.style};
      MetricsRow row;
      int code = kOk;
      RunResult result;
      try {
        result = run(s);
        row = make_row(v, 0, s.seed, result.metrics);
      } catch (const std::exception& e) {
        row = make_row(v, 0, s.seed, RunMetrics{});
        row.error = e.what();
        code = kRowError;
      }
      if (out.empty()) {
        write_csv(std::cout, {row});
        if (trace) {
          for (const auto& e : result.trace) std::cout << e.to_json_line() << '\n';
        }
      } else {
        auto f = open_out(fs::path(out) / "metrics.csv");
        write_csv(f, {row});
        if (trace) write_trace(fs::path(out) / "trace.jsonl", result.trace);
      }
      if (code != kOk) std::cerr << "run failed: " << row.error << '\n';
      return code;
    }

    if (*sweep) {
      SweepSpec spec = builtin_suite(suite);
      if (trials > 0) spec.trials = trials;
      if (sweep->count("--seed")) spec.base_seed = seed;
      if (!law.empty()) spec.laws = {law_or_throw(law)};
      spec.threads = threads;
      const auto rows = run_sweep(spec);
      if (out.empty()) {
        write_csv(std::cout, rows);
      } else {
        auto f = open_out(fs::path(out) / "metrics.csv");
        write_csv(f, rows);
      }
      int errors = 0;
      for (const auto& r : rows) {
        if (!r.error.empty()) {
          ++errors;
          std::cerr << r.law << ' ' << r.scale << ' ' << r.style << " trial " << r.trial << ": " << r.error << '\n';
        }
      }
      return errors ? kRowError : kOk;
    }

    if (*summ) {
      std::ifstream f(in_path);
      if (!f) throw InputError("cannot open " + in_path);
      std::vector<MetricsRow> rows;
      try {
        rows = read_csv(f);
      } catch (const std::runtime_error& e) {
        throw InputError(e.what());
      }
      if (rows.empty()) throw InputError("metrics CSV has no rows");
      write_summary(out, summarize(rows));
      return kOk;
    }

    if (*replay) {
      std::ifstream f(trace_path);
      if (!f) throw InputError("cannot open " + trace_path);
      std::string line;
      int lineno = 0;
      while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
          print_event(TraceEvent::from_json_line(line));
        } catch (const std::exception& e) {
          throw InputError("trace line " + std::to_string(lineno) + ": " + e.what());
        }
      }
      return kOk;
    }
  } catch (const InvalidScenario& e) {
    std::cerr << e.what() << '\n';
    return kInvalidInput;
  } catch (const InvalidTemplate& e) {
    std::cerr << "invalid template: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const InputError& e) {
    std::cerr << e.what() << '\n';
    return kInvalidInput;
  }
  return kOk;
}
