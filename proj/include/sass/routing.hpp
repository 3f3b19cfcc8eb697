#pragma once

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "sass/world.hpp"

namespace sass {

enum class MotionAction { MoveStep, Stop };

// Robots tied together by pairwise conflicts during one tick.
struct ConflictQueue {
  std::vector<RobotId> members;  // sorted
  int tick = 0;
};

// Advance at most step_length along the straight line to goal.
Position next_step(const Position& pos, const Position& goal, double step_length);

struct StepProposal {
  Position from;
  Position to;
};

using ConflictPair = std::pair<RobotId, RobotId>;  // first < second

// A pair conflicts when the proposed positions are closer than
// 2 * safety_radius, or when the swept segments pass that close.
std::set<ConflictPair> detect_conflicts(const std::map<RobotId, StepProposal>& proposed,
                                        double safety_radius);

class UnionFind {
 public:
  RobotId find(RobotId x);
  void unite(RobotId a, RobotId b);

 private:
  std::map<RobotId, RobotId> parent_;
  std::map<RobotId, int> rank_;
};

// Connected components of the conflict relation, ordered by smallest member.
std::vector<ConflictQueue> cluster_conflicts(const std::set<ConflictPair>& pairs, int tick = 0);

// The first robot in order moves this tick; the rest of the cluster stops.
std::map<RobotId, MotionAction> resolve_cluster(const ConflictQueue& cluster,
                                                const std::vector<RobotId>& order);

struct RoutePlan {
  bool moving = false;
  Position to;                  // position after this tick
  std::vector<Position> path;   // remaining waypoints, ending at the goal
};

// One-tick local planner. Takes the straight step toward goal when its swept
// segment keeps clearance from every obstacle; otherwise tries headings rotated
// in 15 degree increments, clockwise first, and routes through that detour
// point. Stops when no heading is clear, when another robot occupies the goal,
// or when the robot is already at goal.
RoutePlan plan_step(const Position& pos, const Position& goal, double step_length,
                    const std::vector<Position>& obstacles, double clearance, double world_size);

}  // namespace sass
