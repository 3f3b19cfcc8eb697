#include <set>

#include "doctest.h"
#include "sass/selection.hpp"
#include "support.hpp"

using namespace sass;

namespace {

const SelectionParams kParams{};

void check_feasible(const SelectionPlan& plan, const std::vector<RobotState>& robots,
                    const std::vector<Task>& tasks) {
  CHECK(plan.assignment.size() == robots.size());
  for (const auto& t : tasks) CHECK(plan.members_of(t.id).size() == static_cast<std::size_t>(t.required));
  std::set<RobotId> seen;
  for (const auto& [id, t] : plan.assignment) CHECK(seen.insert(id).second);
}

}  // namespace

TEST_CASE("estimate_cost counts whole steps") {
  const Task t = support::task(0, 0, 0);
  CHECK(estimate_cost(support::robot(0, 10, 0), t, kParams) == doctest::Approx(1.0));
  CHECK(estimate_cost(support::robot(0, 0, 0), t, kParams) == doctest::Approx(0.0));
  // ceil(2.5) = 3 steps of 0.1
  CHECK(estimate_cost(support::robot(0, 2.5, 0), t, kParams) == doctest::Approx(0.3));
}

TEST_CASE("four robots on a line split into near groups") {
  std::vector<RobotState> robots{support::robot(1, 0, 0), support::robot(2, 1, 0), support::robot(3, 8, 0),
                                 support::robot(4, 9, 0)};
  std::vector<Task> tasks{support::task(1, 0, 0, 2), support::task(2, 9, 0, 2)};
  const auto plan = select(robots, tasks, {LawKind::LowE, {}}, kParams);
  CHECK(plan.members_of(1) == std::vector<RobotId>{1, 2});
  CHECK(plan.members_of(2) == std::vector<RobotId>{3, 4});
  CHECK(plan_cost(plan, robots, tasks, kParams) == doctest::Approx(0.2));

  const auto oracle = selection_oracle(robots, tasks, kParams);
  CHECK(oracle.cost == doctest::Approx(0.2));
  CHECK(oracle.plan.members_of(1) == std::vector<RobotId>{1, 2});
}

TEST_CASE("single robot and surplus robots") {
  std::vector<Task> one{support::task(0, 5, 5)};
  auto plan = select({support::robot(0, 0, 0)}, one, {LawKind::LowE, {}}, kParams);
  CHECK(plan.assignment.at(0) == 0);

  plan = select({support::robot(0, 0, 0, 80), support::robot(1, 1, 0, 60)}, one, {LawKind::LowE, {}}, kParams);
  CHECK(plan.assignment.at(1) == 0);
  CHECK_FALSE(plan.assignment.at(0).has_value());
  CHECK(plan.canonical() == "sel;0:U;1:0");
  CHECK(SelectionPlan::parse(plan.canonical()).canonical() == plan.canonical());
}

TEST_CASE("too few robots") {
  CHECK_THROWS_AS(select({support::robot(0, 0, 0)}, {support::task(0, 1, 1, 2)}, {LawKind::LowE, {}}, kParams),
                  InsufficientRobots);
}

TEST_CASE("task rank order decides which block each task gets") {
  std::vector<RobotState> robots{support::robot(0, 0, 0, 10), support::robot(1, 0, 0, 20)};
  std::vector<Task> tasks{support::task(0, 5, 5), support::task(1, 9, 9)};
  auto plan = select(robots, tasks, {LawKind::LowE, {1, 0}}, kParams);
  CHECK(plan.assignment.at(0) == 1);
  CHECK(plan.assignment.at(1) == 0);
}

TEST_CASE("oracle picks the uncrossed matching") {
  std::vector<RobotState> robots{support::robot(0, 0, 0), support::robot(1, 10, 0)};
  std::vector<Task> tasks{support::task(0, 10, 0), support::task(1, 0, 0)};
  const auto oracle = selection_oracle(robots, tasks, kParams);
  CHECK(oracle.plan.assignment.at(0) == 1);
  CHECK(oracle.plan.assignment.at(1) == 0);
  CHECK(oracle.cost == doctest::Approx(0.0));
  CHECK_THROWS(selection_oracle(std::vector<RobotState>(11, support::robot(0, 0, 0)), tasks, kParams));
}

TEST_CASE("select meets the oracle when the law order is already cost sorted") {
  std::vector<RobotState> robots{support::robot(0, 1, 0, 10), support::robot(1, 0, 1, 20),
                                 support::robot(2, 20, 1, 30), support::robot(3, 21, 0, 40)};
  std::vector<Task> tasks{support::task(0, 0, 0, 2), support::task(1, 20, 0, 2)};
  const auto plan = select(robots, tasks, {LawKind::LowE, {}}, kParams);
  CHECK(plan_cost(plan, robots, tasks, kParams) ==
        doctest::Approx(selection_oracle(robots, tasks, kParams).cost));
}

TEST_CASE("select never beats the exhaustive oracle") {
  support::Gen g(99);
  const LawKind laws[] = {LawKind::HighE, LawKind::LowE, LawKind::TPlusHighE, LawKind::TPlusLowE};
  for (int trial = 0; trial < 200; ++trial) {
    const int nt = g.integer(1, 3);
    std::vector<Task> tasks;
    int need = 0;
    for (int t = 0; t < nt; ++t) {
      tasks.push_back(support::task(t, g.real(0, 50), g.real(0, 50), g.integer(1, 2)));
      need += tasks.back().required;
    }
    const int nr = g.integer(need, 8);
    std::vector<RobotState> robots;
    for (int i = 0; i < nr; ++i) robots.push_back(support::robot(i, g.real(0, 50), g.real(0, 50), g.real(50, 100)));

    const auto plan = select(robots, tasks, {laws[trial % 4], {}}, kParams);
    const auto oracle = selection_oracle(robots, tasks, kParams);
    check_feasible(plan, robots, tasks);
    check_feasible(oracle.plan, robots, tasks);
    CHECK(plan_cost(plan, robots, tasks, kParams) >= oracle.cost - 1e-9);
    CHECK(plan_cost(oracle.plan, robots, tasks, kParams) == doctest::Approx(oracle.cost));
  }
}

TEST_CASE("select is deterministic") {
  support::Gen g(3);
  std::vector<RobotState> robots;
  for (int i = 0; i < 8; ++i) robots.push_back(support::robot(i, g.real(0, 30), g.real(0, 30), g.real(50, 100)));
  std::vector<Task> tasks{support::task(0, 5, 5, 3), support::task(1, 25, 25, 3)};
  CHECK(select(robots, tasks, {LawKind::TPlusLowE, {}}, kParams).canonical() ==
        select(robots, tasks, {LawKind::TPlusLowE, {}}, kParams).canonical());
}
