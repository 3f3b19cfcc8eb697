#include "sass/cata.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "sass/needs.hpp"

namespace sass {

int collision_penalty(const Position& from_i, const Position& goal_i, const Position& from_j,
                      const Position& goal_j, double safety_radius) {
  return segment_distance(from_i, goal_i, from_j, goal_j) < 2.0 * safety_radius ? 1 : 0;
}

double utility(const RobotState& robot, const Task& task, const std::vector<PeerRoute>& others,
               const CataWeights& weights, double safety_radius) {
  int conflicts = 0;
  for (const auto& peer : others) {
    if (peer.id == robot.id) continue;
    conflicts += collision_penalty(robot.pos, task.center, peer.from, peer.goal, safety_radius);
  }
  return weights.base - weights.w_d * euclidean(robot.pos, task.center) - weights.w_c * conflicts;
}

double UtilityMatrix::at(RobotId robot, TaskId task) const {
  const auto r = std::find(rows.begin(), rows.end(), robot);
  const auto c = std::find(cols.begin(), cols.end(), task);
  if (r == rows.end() || c == cols.end()) throw std::out_of_range("utility matrix lookup");
  return entries[static_cast<std::size_t>(r - rows.begin())][static_cast<std::size_t>(c - cols.begin())];
}

UtilityMatrix utility_matrix(const std::vector<RobotState>& robots, const std::vector<Task>& tasks,
                             const CataWeights& weights, double safety_radius) {
  std::vector<PeerRoute> provisional;
  for (const auto& r : robots) {
    if (!r.alive || tasks.empty()) continue;
    const auto nearest = std::min_element(tasks.begin(), tasks.end(), [&](const Task& a, const Task& b) {
      const double da = euclidean(r.pos, a.center);
      const double db = euclidean(r.pos, b.center);
      return da < db || (da == db && a.id < b.id);
    });
    provisional.push_back(PeerRoute{r.id, r.pos, nearest->center});
  }

  UtilityMatrix m;
  for (const auto& t : tasks) m.cols.push_back(t.id);
  for (const auto& r : robots) {
    if (!r.alive) continue;
    m.rows.push_back(r.id);
    std::vector<double> row;
    for (const auto& t : tasks) row.push_back(utility(r, t, provisional, weights, safety_radius));
    m.entries.push_back(std::move(row));
  }
  return m;
}

SelectionPlan cata_select(const std::vector<RobotState>& robots, const std::vector<Task>& tasks,
                          const CataWeights& weights, double safety_radius) {
  if (tasks.empty()) throw std::invalid_argument("cata_select: no tasks");
  long need = 0;
  for (const auto& t : tasks) need += t.required;
  std::vector<RobotId> ids;
  std::map<RobotId, NeedKeys> keys;
  for (const auto& r : robots) {
    if (!r.alive) continue;
    ids.push_back(r.id);
    keys[r.id] = NeedKeys{r.battery, 0, 0.0};
  }
  if (need > static_cast<long>(ids.size())) {
    throw InsufficientRobots("tasks need " + std::to_string(need) + " robots, " +
                             std::to_string(ids.size()) + " alive");
  }

  const auto matrix = utility_matrix(robots, tasks, weights, safety_radius);
  const auto order = sort_queue(ids, keys, compile_law({LawKind::LowE, {}}), 0);

  std::map<TaskId, int> open;
  for (const auto& t : tasks) open[t.id] = t.required;

  SelectionPlan plan;
  for (RobotId id : order) {
    std::optional<TaskId> pick;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& [task, slots] : open) {  // ascending id, so ties keep the lower id
      if (slots == 0) continue;
      const double u = matrix.at(id, task);
      if (u > best) {
        best = u;
        pick = task;
      }
    }
    if (pick) --open[*pick];
    plan.assignment[id] = pick;
  }
  return plan;
}

}  // namespace sass
