#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sass/needs.hpp"
#include "sass/world.hpp"

namespace sass {

class InsufficientRobots : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Robot -> task. nullopt marks a surplus robot left Unassigned.
struct SelectionPlan {
  std::map<RobotId, std::optional<TaskId>> assignment;
  RobotId proposer = 0;

  std::vector<RobotId> members_of(TaskId task) const;
  // Sorted-key text form; proposer is not part of it.
  std::string canonical() const;
  static SelectionPlan parse(const std::string& text);
};

struct SelectionParams {
  EnergyModel energy;
  double step_length = 1.0;
};

// Estimated moving energy for robot to reach the task center.
double estimate_cost(const RobotState& robot, const Task& task, const SelectionParams& params);

double plan_cost(const SelectionPlan& plan, const std::vector<RobotState>& robots,
                 const std::vector<Task>& tasks, const SelectionParams& params);

// Sort keys used to order robots for selection: battery, the rank of the
// robot's nearest task, and a proximity utility.
std::map<RobotId, NeedKeys> selection_keys(const std::vector<RobotState>& robots,
                                           const std::vector<Task>& tasks, const PriorityLaw& law);

// Linear partition: robots ordered by the law, tasks by priority rank, the robot
// sequence cut into consecutive blocks of each task's required size. The
// remaining suffix is Unassigned. depth < 0 uses the law's full needs depth.
SelectionPlan select(const std::vector<RobotState>& robots, const std::vector<Task>& tasks,
                     const PriorityLaw& law, const SelectionParams& params, int depth = -1);

struct OracleSelection {
  SelectionPlan plan;
  double cost = 0.0;
};

// Exhaustive minimum-cost assignment over every valid grouping. Desk scale only:
// at most 10 robots and 3 tasks.
OracleSelection selection_oracle(const std::vector<RobotState>& robots,
                                 const std::vector<Task>& tasks, const SelectionParams& params);

}  // namespace sass
