#include "sass/world.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sass {

double euclidean(const Position& a, const Position& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

double point_segment_distance(const Position& p, const Position& a, const Position& b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  if (len2 == 0.0) {
    return euclidean(p, a);
  }
  double t = ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return euclidean(p, Position{a.x + t * dx, a.y + t * dy});
}

namespace {

double cross(const Position& o, const Position& a, const Position& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool segments_intersect(const Position& a0, const Position& a1, const Position& b0,
                        const Position& b1) {
  const double d1 = cross(b0, b1, a0);
  const double d2 = cross(b0, b1, a1);
  const double d3 = cross(a0, a1, b0);
  const double d4 = cross(a0, a1, b1);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

}  // namespace

double segment_distance(const Position& a0, const Position& a1, const Position& b0,
                        const Position& b1) {
  if (segments_intersect(a0, a1, b0, b1)) {
    return 0.0;
  }
  // Collinear overlaps and touching endpoints fall out of the endpoint checks.
  return std::min({point_segment_distance(a0, b0, b1), point_segment_distance(a1, b0, b1),
                   point_segment_distance(b0, a0, a1), point_segment_distance(b1, a0, a1)});
}

std::vector<Position> polygon_vertices(const Position& center, int n, double radius) {
  std::vector<Position> out;
  out.reserve(static_cast<std::size_t>(std::max(n, 0)));
  for (int k = 0; k < n; ++k) {
    const double deg = 90.0 - 360.0 * k / n;
    const double rad = deg * std::numbers::pi / 180.0;
    out.push_back(Position{center.x + radius * std::cos(rad), center.y + radius * std::sin(rad)});
  }
  return out;
}

void EnergyLedger::register_robot(RobotId id, double initial_battery) {
  RobotLedger entry;
  entry.initial_battery = initial_battery;
  robots_[id] = entry;
}

void EnergyLedger::record(RobotId id, ChargeKind kind, double amount, CommTag tag,
                          std::optional<TaskId> task) {
  auto it = robots_.find(id);
  if (it == robots_.end()) {
    throw std::out_of_range("ledger: unknown robot " + std::to_string(id));
  }
  auto& r = it->second;
  switch (kind) {
    case ChargeKind::Move:
      r.moving += amount;
      break;
    case ChargeKind::Idle:
      r.idle += amount;
      break;
    case ChargeKind::CommRound:
      r.comm += amount;
      if (tag == CommTag::Negotiation) {
        r.comm_negotiation += amount;
      }
      if (task) {
        per_task_comm_[*task] += amount;
      }
      break;
  }
}

void EnergyLedger::record_dropped(RobotId id) {
  auto it = robots_.find(id);
  if (it == robots_.end()) {
    throw std::out_of_range("ledger: unknown robot " + std::to_string(id));
  }
  ++it->second.dropped_actions;
}

const RobotLedger& EnergyLedger::robot(RobotId id) const {
  return robots_.at(id);
}

double EnergyLedger::total_moving() const {
  double s = 0.0;
  for (const auto& [id, r] : robots_) s += r.moving;
  return s;
}

double EnergyLedger::total_idle() const {
  double s = 0.0;
  for (const auto& [id, r] : robots_) s += r.idle;
  return s;
}

double EnergyLedger::total_comm() const {
  double s = 0.0;
  for (const auto& [id, r] : robots_) s += r.comm;
  return s;
}

double EnergyLedger::total_comm_negotiation() const {
  double s = 0.0;
  for (const auto& [id, r] : robots_) s += r.comm_negotiation;
  return s;
}

double charge(RobotState& robot, ChargeKind kind, const EnergyModel& model, EnergyLedger& ledger,
              CommTag tag, double rounds) {
  if (!robot.alive) {
    ledger.record_dropped(robot.id);
    return 0.0;
  }
  double cost = 0.0;
  switch (kind) {
    case ChargeKind::Move:
      cost = model.move_cost;
      break;
    case ChargeKind::Idle:
      cost = model.idle_cost;
      break;
    case ChargeKind::CommRound:
      cost = model.comm_cost * rounds;
      break;
  }
  const double drained = std::min(cost, robot.battery);
  robot.battery -= drained;
  ledger.record(robot.id, kind, drained, tag, robot.group);
  if (robot.battery <= 0.0) {
    robot.battery = 0.0;
    robot.alive = false;
  }
  return drained;
}

}  // namespace sass
