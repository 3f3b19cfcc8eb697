#pragma once

#include <map>
#include <vector>

#include "sass/selection.hpp"
#include "sass/world.hpp"

namespace sass {

// Collision-aware utility surrogate used by the CATA_U baseline:
//   base - w_d * distance - w_c * (number of peers whose straight route passes
//   within 2 * safety_radius of this robot's route).
struct CataWeights {
  double base = 100.0;
  double w_d = 1.0;
  double w_c = 10.0;
};

// 1 when the segments from_i->goal_i and from_j->goal_j come closer than
// 2 * safety_radius, else 0.
int collision_penalty(const Position& from_i, const Position& goal_i, const Position& from_j,
                      const Position& goal_j, double safety_radius);

struct PeerRoute {
  RobotId id = 0;
  Position from;
  Position goal;
};

double utility(const RobotState& robot, const Task& task, const std::vector<PeerRoute>& others,
               const CataWeights& weights, double safety_radius);

struct UtilityMatrix {
  std::vector<RobotId> rows;
  std::vector<TaskId> cols;
  std::vector<std::vector<double>> entries;

  double at(RobotId robot, TaskId task) const;
};

// Every alive robot's utility for every task. Peers are assumed to head for
// their nearest task center when counting route conflicts.
UtilityMatrix utility_matrix(const std::vector<RobotState>& robots, const std::vector<Task>& tasks,
                             const CataWeights& weights, double safety_radius);

// Robots in Low_E order each claim the highest-utility task that still has an
// open slot (lower task id on ties); once every slot is filled the rest are
// Unassigned.
SelectionPlan cata_select(const std::vector<RobotState>& robots, const std::vector<Task>& tasks,
                          const CataWeights& weights, double safety_radius);

}  // namespace sass
