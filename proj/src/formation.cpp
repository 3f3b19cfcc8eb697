#include "sass/formation.hpp"

#include <limits>
#include <sstream>
#include <stdexcept>

namespace sass {

DistanceMatrix build_distance_matrix(const std::vector<RobotId>& queue,
                                     const std::map<RobotId, Position>& positions,
                                     const std::vector<Position>& vertices) {
  DistanceMatrix m;
  m.rows = queue;
  for (RobotId id : queue) {
    std::vector<double> row;
    row.reserve(vertices.size());
    for (const auto& v : vertices) row.push_back(euclidean(positions.at(id), v));
    m.entries.push_back(std::move(row));
  }
  return m;
}

std::string FormationPlan::canonical() const {
  std::ostringstream os;
  os << "form;" << task;
  for (const auto& [robot, slot] : slot_of) os << ';' << robot << ':' << slot;
  return os.str();
}

FormationPlan FormationPlan::parse(const std::string& text) {
  FormationPlan plan;
  std::istringstream is(text);
  std::string field;
  std::getline(is, field, ';');
  if (field != "form") throw std::invalid_argument("not a formation plan: " + text);
  std::getline(is, field, ';');
  plan.task = std::stoi(field);
  while (std::getline(is, field, ';')) {
    const auto colon = field.find(':');
    plan.slot_of[std::stoi(field.substr(0, colon))] = std::stoi(field.substr(colon + 1));
  }
  return plan;
}

FormationPlan formation_assign(const std::vector<RobotId>& queue, const DistanceMatrix& matrix) {
  if (queue.size() != matrix.size()) {
    throw std::invalid_argument("formation_assign: queue does not cover the matrix rows");
  }
  std::map<RobotId, std::size_t> row_of;
  for (std::size_t r = 0; r < matrix.rows.size(); ++r) row_of[matrix.rows[r]] = r;

  FormationPlan plan;
  std::vector<bool> taken(matrix.size(), false);
  for (RobotId id : queue) {
    const auto& row = matrix.entries.at(row_of.at(id));
    int best = -1;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (taken[c]) continue;
      if (best < 0 || row[c] < row[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
    }
    taken[static_cast<std::size_t>(best)] = true;
    plan.slot_of[id] = best;
  }
  return plan;
}

double assignment_total(const DistanceMatrix& matrix, const std::map<RobotId, int>& slot_of) {
  double total = 0.0;
  for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
    total += matrix.at(r, static_cast<std::size_t>(slot_of.at(matrix.rows[r])));
  }
  return total;
}

OptimalAssignment hungarian_oracle(const DistanceMatrix& matrix) {
  const std::size_t n = matrix.size();
  const double inf = std::numeric_limits<double>::infinity();
  // Potentials-based formulation with 1-based sentinel column 0.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = match[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = matrix.at(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  OptimalAssignment out;
  out.col_of_row.assign(n, -1);
  for (std::size_t j = 1; j <= n; ++j) {
    if (match[j] != 0) out.col_of_row[match[j] - 1] = static_cast<int>(j - 1);
  }
  for (std::size_t r = 0; r < n; ++r) {
    out.total += matrix.at(r, static_cast<std::size_t>(out.col_of_row[r]));
  }
  return out;
}

}  // namespace sass
