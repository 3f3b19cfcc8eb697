#include <filesystem>

#include "doctest.h"
#include "sass/scenario.hpp"
#include "support.hpp"

using namespace sass;

namespace {

Scenario small() {
  auto s = support::base_scenario();
  s.law = {LawKind::TPlusLowE, {1, 0}};
  s.comm_range = 15.0;
  s.seed = 42;
  support::add_robot(s, 0, 5, 5, 88.5);
  support::add_robot(s, 1, 9, 5, 70);
  support::add_task(s, 0, 20, 20, 1);
  support::add_task(s, 1, 30, 20, 1, 10);
  return s;
}

}  // namespace

TEST_CASE("scenario JSON round trip") {
  const auto s = small();
  CHECK_NOTHROW(validate(s));
  const auto j = to_json(s);
  CHECK(j.at("law") == "t_low_e");
  CHECK(to_json(scenario_from_json(j)).dump() == j.dump());

  const auto path = std::filesystem::temp_directory_path() / "sass_scenario_test.json";
  save_scenario(s, path);
  CHECK(to_json(load_scenario(path)).dump() == j.dump());
  std::filesystem::remove(path);
}

TEST_CASE("validation lists every offending field") {
  auto s = small();
  s.robots[1].id = 0;
  s.tasks[1].arrival_tick = -1;
  s.robots[0].battery = 120;
  try {
    validate(s);
    FAIL("expected InvalidScenario");
  } catch (const InvalidScenario& e) {
    CHECK(e.diagnostics().size() >= 3);
  }

  s = small();
  s.tasks[0].arrival_tick = 20;  // arrivals must not decrease in file order
  CHECK_THROWS_AS(validate(s), InvalidScenario);

  s = small();
  s.law.task_priority_order = {0, 0};
  CHECK_THROWS_AS(validate(s), InvalidScenario);

  CHECK_THROWS_AS(scenario_from_json(nlohmann::json{{"world_size", "big"}}), InvalidScenario);
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), InvalidScenario);
}
