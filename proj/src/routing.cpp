#include "sass/routing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sass {

Position next_step(const Position& pos, const Position& goal, double step_length) {
  const double d = euclidean(pos, goal);
  if (d <= step_length) return goal;
  const double f = step_length / d;
  return Position{pos.x + (goal.x - pos.x) * f, pos.y + (goal.y - pos.y) * f};
}

std::set<ConflictPair> detect_conflicts(const std::map<RobotId, StepProposal>& proposed,
                                        double safety_radius) {
  const double limit = 2.0 * safety_radius;
  std::set<ConflictPair> pairs;
  for (auto i = proposed.begin(); i != proposed.end(); ++i) {
    for (auto j = std::next(i); j != proposed.end(); ++j) {
      const auto& a = i->second;
      const auto& b = j->second;
      if (euclidean(a.to, b.to) < limit || segment_distance(a.from, a.to, b.from, b.to) < limit) {
        pairs.emplace(i->first, j->first);
      }
    }
  }
  return pairs;
}

RobotId UnionFind::find(RobotId x) {
  auto it = parent_.find(x);
  if (it == parent_.end()) {
    parent_[x] = x;
    rank_[x] = 0;
    return x;
  }
  if (it->second == x) return x;
  const RobotId root = find(it->second);
  parent_[x] = root;
  return root;
}

void UnionFind::unite(RobotId a, RobotId b) {
  RobotId ra = find(a);
  RobotId rb = find(b);
  if (ra == rb) return;
  if (rank_[ra] < rank_[rb]) std::swap(ra, rb);
  parent_[rb] = ra;
  if (rank_[ra] == rank_[rb]) ++rank_[ra];
}

std::vector<ConflictQueue> cluster_conflicts(const std::set<ConflictPair>& pairs, int tick) {
  UnionFind uf;
  std::set<RobotId> seen;
  for (const auto& [a, b] : pairs) {
    uf.unite(a, b);
    seen.insert(a);
    seen.insert(b);
  }
  std::map<RobotId, std::vector<RobotId>> by_root;
  for (RobotId id : seen) by_root[uf.find(id)].push_back(id);

  std::vector<ConflictQueue> out;
  for (auto& [root, members] : by_root) out.push_back(ConflictQueue{std::move(members), tick});
  std::sort(out.begin(), out.end(),
            [](const ConflictQueue& a, const ConflictQueue& b) { return a.members[0] < b.members[0]; });
  return out;
}

std::map<RobotId, MotionAction> resolve_cluster(const ConflictQueue& cluster,
                                                const std::vector<RobotId>& order) {
  if (cluster.members.size() < 2) {
    throw std::invalid_argument("resolve_cluster: a cluster needs at least two robots");
  }
  std::vector<RobotId> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != cluster.members) {
    throw std::invalid_argument("resolve_cluster: order is not a permutation of the cluster");
  }
  std::map<RobotId, MotionAction> actions;
  for (RobotId id : cluster.members) actions[id] = MotionAction::Stop;
  actions[order.front()] = MotionAction::MoveStep;
  return actions;
}

namespace {

bool clear(const Position& from, const Position& to, const std::vector<Position>& obstacles,
           double clearance) {
  return std::all_of(obstacles.begin(), obstacles.end(), [&](const Position& o) {
    return point_segment_distance(o, from, to) >= clearance;
  });
}

bool in_bounds(const Position& p, double world_size) {
  return p.x >= 0.0 && p.y >= 0.0 && p.x <= world_size && p.y <= world_size;
}

}  // namespace

RoutePlan plan_step(const Position& pos, const Position& goal, double step_length,
                    const std::vector<Position>& obstacles, double clearance, double world_size) {
  RoutePlan plan;
  plan.to = pos;
  if (pos == goal) return plan;

  const Position direct = next_step(pos, goal, step_length);
  if (clear(pos, direct, obstacles, clearance)) {
    plan.moving = true;
    plan.to = direct;
    plan.path = {goal};
    return plan;
  }

  // Someone is standing on the goal: wait for them to leave instead of
  // circling it.
  const bool goal_taken = std::any_of(obstacles.begin(), obstacles.end(),
                                      [&](const Position& o) { return euclidean(o, goal) < clearance; });
  if (goal_taken) return plan;

  const double heading = std::atan2(goal.y - pos.y, goal.x - pos.x);
  constexpr double kIncrement = 15.0 * std::numbers::pi / 180.0;
  for (int k = 1; k <= 12; ++k) {
    for (int sign : {-1, 1}) {
      if (k == 12 && sign == 1) continue;  // 180 degrees already tried
      const double h = heading + sign * k * kIncrement;
      const Position detour{pos.x + step_length * std::cos(h), pos.y + step_length * std::sin(h)};
      if (in_bounds(detour, world_size) && clear(pos, detour, obstacles, clearance)) {
        plan.moving = true;
        plan.to = detour;
        plan.path = {detour, goal};
        return plan;
      }
    }
  }
  return plan;
}

}  // namespace sass
