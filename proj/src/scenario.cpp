#include "sass/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace sass {

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::ostringstream os;
  os << "invalid scenario:";
  for (const auto& p : parts) os << "\n  " << p;
  return os.str();
}

bool finite(const Position& p) {
  return std::isfinite(p.x) && std::isfinite(p.y);
}

}  // namespace

InvalidScenario::InvalidScenario(std::vector<std::string> diagnostics)
    : std::runtime_error(join(diagnostics)), diagnostics_(std::move(diagnostics)) {}

void validate(const Scenario& s) {
  std::vector<std::string> errs;
  auto fail = [&](std::string field, std::string what) { errs.push_back(field + ": " + what); };

  if (!(s.world_size > 0.0)) fail("world_size", "must be positive");
  if (s.robots.empty()) fail("robots", "at least one robot is required");
  if (!(s.step_length > 0.0)) fail("step_length", "must be positive");
  if (!(s.safety_radius >= 0.0)) fail("safety_radius", "must be non-negative");
  if (!(s.formation_radius > 0.0)) fail("formation_radius", "must be positive");
  if (s.max_ticks < 1) fail("max_ticks", "must be at least 1");
  if (s.comm_range && !(*s.comm_range > 0.0)) fail("comm_range", "must be positive or \"complete\"");
  if (s.energy.move_cost < 0 || s.energy.comm_cost < 0 || s.energy.idle_cost < 0) {
    fail("energy", "costs must be non-negative");
  }

  std::set<RobotId> robot_ids;
  for (std::size_t i = 0; i < s.robots.size(); ++i) {
    const auto& r = s.robots[i];
    const std::string where = "robots[" + std::to_string(i) + "]";
    if (r.id < 0) fail(where + ".id", "must be >= 0");
    if (!robot_ids.insert(r.id).second) fail(where + ".id", "duplicate id " + std::to_string(r.id));
    if (!finite(r.position) || r.position.x < 0 || r.position.y < 0 || r.position.x > s.world_size ||
        r.position.y > s.world_size) {
      fail(where + ".position", "outside the world");
    }
    if (!(r.battery >= 0.0 && r.battery <= 100.0)) fail(where + ".battery", "must be in [0, 100]");
    for (std::size_t j = 0; j < i; ++j) {
      if (euclidean(r.position, s.robots[j].position) < 2.0 * s.safety_radius) {
        fail(where + ".position", "closer than 2*safety_radius to robot " +
                                      std::to_string(s.robots[j].id));
      }
    }
  }

  std::set<TaskId> task_ids;
  int last_arrival = 0;
  for (std::size_t i = 0; i < s.tasks.size(); ++i) {
    const auto& t = s.tasks[i];
    const std::string where = "tasks[" + std::to_string(i) + "]";
    if (!task_ids.insert(t.id).second) fail(where + ".id", "duplicate id " + std::to_string(t.id));
    if (t.required < 1) fail(where + ".required", "must be >= 1");
    if (t.required > static_cast<int>(s.robots.size())) fail(where + ".required", "exceeds robot count");
    if (t.duration < 0) fail(where + ".duration", "must be >= 0");
    if (t.duration > t.timeout) fail(where + ".duration", "exceeds timeout");
    if (t.arrival_tick < 0) fail(where + ".arrival_tick", "must be >= 0");
    if (t.arrival_tick < last_arrival) fail(where + ".arrival_tick", "arrivals must be non-decreasing");
    last_arrival = std::max(last_arrival, t.arrival_tick);
    const double r = s.formation_radius;
    if (!finite(t.center) || t.center.x < r || t.center.y < r || t.center.x > s.world_size - r ||
        t.center.y > s.world_size - r) {
      fail(where + ".center", "formation polygon leaves the world");
    }
    if (t.required >= 2 &&
        2.0 * r * std::sin(std::numbers::pi / t.required) < 2.0 * s.safety_radius) {
      fail(where + ".required", "polygon vertices closer than 2*safety_radius");
    }
  }

  if (!s.law.task_priority_order.empty()) {
    std::set<TaskId> order(s.law.task_priority_order.begin(), s.law.task_priority_order.end());
    if (order != task_ids || order.size() != s.law.task_priority_order.size()) {
      fail("task_priority_order", "must be a permutation of the task ids");
    }
  }

  if (!errs.empty()) throw InvalidScenario(std::move(errs));
}

nlohmann::json to_json(const Scenario& s) {
  using nlohmann::json;
  json doc;
  doc["world_size"] = s.world_size;
  doc["robots"] = json::array();
  for (const auto& r : s.robots) {
    doc["robots"].push_back(
        {{"id", r.id}, {"position", {{"x", r.position.x}, {"y", r.position.y}}}, {"battery", r.battery}});
  }
  doc["tasks"] = json::array();
  for (const auto& t : s.tasks) {
    doc["tasks"].push_back({{"id", t.id},
                            {"center", {{"x", t.center.x}, {"y", t.center.y}}},
                            {"required", t.required},
                            {"duration", t.duration},
                            {"timeout", t.timeout},
                            {"arrival_tick", t.arrival_tick}});
  }
  doc["law"] = std::string(law_name(s.law.kind));
  if (!s.law.task_priority_order.empty()) doc["task_priority_order"] = s.law.task_priority_order;
  if (s.comm_range) {
    doc["comm_range"] = *s.comm_range;
  } else {
    doc["comm_range"] = "complete";
  }
  doc["energy"] = {{"move_cost", s.energy.move_cost},
                   {"comm_cost", s.energy.comm_cost},
                   {"idle_cost", s.energy.idle_cost}};
  doc["step_length"] = s.step_length;
  doc["safety_radius"] = s.safety_radius;
  doc["formation_radius"] = s.formation_radius;
  doc["seed"] = s.seed;
  doc["max_ticks"] = s.max_ticks;
  doc["cata"] = {{"base", s.cata.base}, {"w_d", s.cata.w_d}, {"w_c", s.cata.w_c}};
  doc["conflict_negotiation"] = s.conflict_negotiation;
  doc["low_battery_threshold"] = s.low_battery_threshold;
  if (!s.scale.empty()) doc["scale"] = s.scale;
  if (!s.style.empty()) doc["style"] = s.style;
  return doc;
}

Scenario scenario_from_json(const nlohmann::json& doc) {
  Scenario s;
  std::vector<std::string> errs;
  auto guard = [&](const std::string& field, auto&& fn) {
    try {
      fn();
    } catch (const nlohmann::json::exception& e) {
      errs.push_back(field + ": " + e.what());
    }
  };

  if (!doc.is_object()) throw InvalidScenario({"document: expected a JSON object"});

  guard("world_size", [&] { s.world_size = doc.value("world_size", s.world_size); });
  guard("robots", [&] {
    for (const auto& r : doc.at("robots")) {
      RobotSpec spec;
      spec.id = r.at("id").get<int>();
      spec.position = {r.at("position").at("x").get<double>(), r.at("position").at("y").get<double>()};
      spec.battery = r.value("battery", 100.0);
      s.robots.push_back(spec);
    }
  });
  guard("tasks", [&] {
    if (!doc.contains("tasks")) return;
    for (const auto& t : doc.at("tasks")) {
      Task task;
      task.id = t.at("id").get<int>();
      task.center = {t.at("center").at("x").get<double>(), t.at("center").at("y").get<double>()};
      task.required = t.value("required", 1);
      task.duration = t.value("duration", 1);
      task.timeout = t.value("timeout", 1000);
      task.arrival_tick = t.value("arrival_tick", 0);
      s.tasks.push_back(task);
    }
  });
  guard("law", [&] {
    const auto name = doc.value("law", std::string(law_name(s.law.kind)));
    if (auto k = parse_law(name)) {
      s.law.kind = *k;
    } else {
      errs.push_back("law: unknown law '" + name + "'");
    }
  });
  guard("task_priority_order", [&] {
    if (doc.contains("task_priority_order")) {
      s.law.task_priority_order = doc.at("task_priority_order").get<std::vector<TaskId>>();
    }
  });
  guard("comm_range", [&] {
    if (!doc.contains("comm_range")) return;
    const auto& cr = doc.at("comm_range");
    if (cr.is_string()) {
      if (cr.get<std::string>() != "complete") errs.push_back("comm_range: expected a number or \"complete\"");
    } else {
      s.comm_range = cr.get<double>();
    }
  });
  guard("energy", [&] {
    if (!doc.contains("energy")) return;
    const auto& e = doc.at("energy");
    s.energy.move_cost = e.value("move_cost", s.energy.move_cost);
    s.energy.comm_cost = e.value("comm_cost", s.energy.comm_cost);
    s.energy.idle_cost = e.value("idle_cost", s.energy.idle_cost);
  });
  guard("step_length", [&] { s.step_length = doc.value("step_length", s.step_length); });
  guard("safety_radius", [&] { s.safety_radius = doc.value("safety_radius", s.safety_radius); });
  guard("formation_radius", [&] { s.formation_radius = doc.value("formation_radius", s.formation_radius); });
  guard("seed", [&] { s.seed = doc.value("seed", s.seed); });
  guard("max_ticks", [&] { s.max_ticks = doc.value("max_ticks", s.max_ticks); });
  guard("cata", [&] {
    if (!doc.contains("cata")) return;
    const auto& c = doc.at("cata");
    s.cata.base = c.value("base", s.cata.base);
    s.cata.w_d = c.value("w_d", s.cata.w_d);
    s.cata.w_c = c.value("w_c", s.cata.w_c);
  });
  guard("conflict_negotiation",
        [&] { s.conflict_negotiation = doc.value("conflict_negotiation", s.conflict_negotiation); });
  guard("low_battery_threshold",
        [&] { s.low_battery_threshold = doc.value("low_battery_threshold", s.low_battery_threshold); });
  guard("scale", [&] { s.scale = doc.value("scale", std::string()); });
  guard("style", [&] { s.style = doc.value("style", std::string()); });

  if (!errs.empty()) throw InvalidScenario(std::move(errs));
  validate(s);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidScenario({"file: cannot open " + path.string()});
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidScenario({"file: " + std::string(e.what())});
  }
  return scenario_from_json(doc);
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_json(scenario).dump(2) << '\n';
}

}  // namespace sass
