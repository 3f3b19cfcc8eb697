#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sass/cata.hpp"
#include "sass/comms.hpp"
#include "sass/needs.hpp"
#include "sass/world.hpp"

namespace sass {

struct RobotSpec {
  RobotId id = 0;
  Position position;
  double battery = 100.0;
};

struct Scenario {
  double world_size = 100.0;
  std::vector<RobotSpec> robots;
  std::vector<Task> tasks;
  PriorityLaw law;  // law kind plus optional task_priority_order
  CommRange comm_range;  // nullopt: complete graph
  EnergyModel energy;
  double step_length = 1.0;
  double safety_radius = 0.5;
  double formation_radius = 5.0;
  std::uint64_t seed = 0;
  int max_ticks = 10000;
  CataWeights cata;
  // When false, routing conflicts are still resolved for safety but robots do
  // not gossip or negotiate over them.
  bool conflict_negotiation = true;
  double low_battery_threshold = kLowBatteryThreshold;
  // Free-form labels carried into metrics rows.
  std::string scale;
  std::string style;
};

class InvalidScenario : public std::runtime_error {
 public:
  explicit InvalidScenario(std::vector<std::string> diagnostics);
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

// Throws InvalidScenario listing every offending field.
void validate(const Scenario& scenario);

nlohmann::json to_json(const Scenario& scenario);
Scenario scenario_from_json(const nlohmann::json& doc);

Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

}  // namespace sass
