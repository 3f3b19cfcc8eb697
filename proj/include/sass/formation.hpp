#pragma once

#include <map>
#include <string>
#include <vector>

#include "sass/world.hpp"

namespace sass {

// Rows are robots in queue order, columns are polygon vertex indices.
struct DistanceMatrix {
  std::vector<RobotId> rows;
  std::vector<std::vector<double>> entries;

  std::size_t size() const { return rows.size(); }
  double at(std::size_t row, std::size_t col) const { return entries[row][col]; }
};

DistanceMatrix build_distance_matrix(const std::vector<RobotId>& queue,
                                     const std::map<RobotId, Position>& positions,
                                     const std::vector<Position>& vertices);

struct FormationPlan {
  std::map<RobotId, int> slot_of;
  TaskId task = 0;
  RobotId proposer = 0;

  std::string canonical() const;
  static FormationPlan parse(const std::string& text);
};

// Walks the queue in order; each robot claims its nearest unclaimed vertex,
// lower vertex index on ties.
FormationPlan formation_assign(const std::vector<RobotId>& queue, const DistanceMatrix& matrix);

double assignment_total(const DistanceMatrix& matrix, const std::map<RobotId, int>& slot_of);

struct OptimalAssignment {
  std::vector<int> col_of_row;
  double total = 0.0;
};

// Minimum-sum assignment (Hungarian method, O(n^3)).
OptimalAssignment hungarian_oracle(const DistanceMatrix& matrix);

}  // namespace sass
