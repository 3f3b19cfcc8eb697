#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace sass {

using RobotId = int;
using TaskId = int;

struct Position {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
};

double euclidean(const Position& a, const Position& b);

// Shortest distance from point p to the segment [a, b].
double point_segment_distance(const Position& p, const Position& a, const Position& b);

// Shortest distance between segments [a0, a1] and [b0, b1]; zero when they cross.
double segment_distance(const Position& a0, const Position& a1, const Position& b0,
                        const Position& b1);

// Vertices of a regular n-gon around center. Vertex 0 sits due North and the
// rest follow clockwise, vertex k at angle (90 - k * 360 / n) degrees.
std::vector<Position> polygon_vertices(const Position& center, int n, double radius);

struct RobotState {
  RobotId id = 0;
  Position pos;
  double battery = 100.0;
  std::optional<TaskId> group;
  std::optional<int> formation_slot;
  std::vector<Position> path;
  bool alive = true;
};

struct Task {
  TaskId id = 0;
  Position center;
  int required = 1;
  int duration = 1;
  int timeout = 1000;
  int arrival_tick = 0;
};

struct EnergyModel {
  double move_cost = 0.1;   // percent per moving tick
  double comm_cost = 0.01;  // percent per communication round
  double idle_cost = 0.04;  // percent per stationary tick
};

enum class ChargeKind { Move, Idle, CommRound };

// Communication is split so negotiation traffic can be reported on its own.
enum class CommTag { Gossip, Negotiation };

struct RobotLedger {
  double initial_battery = 0.0;
  double moving = 0.0;
  double idle = 0.0;
  double comm = 0.0;
  double comm_negotiation = 0.0;
  int dropped_actions = 0;

  double total() const { return moving + idle + comm; }
};

class EnergyLedger {
 public:
  void register_robot(RobotId id, double initial_battery);

  // Records an amount actually drained from the battery.
  void record(RobotId id, ChargeKind kind, double amount, CommTag tag = CommTag::Gossip,
              std::optional<TaskId> task = std::nullopt);
  void record_dropped(RobotId id);

  const RobotLedger& robot(RobotId id) const;
  const std::map<RobotId, RobotLedger>& robots() const { return robots_; }
  const std::map<TaskId, double>& per_task_comm() const { return per_task_comm_; }

  double total_moving() const;
  double total_idle() const;
  double total_comm() const;
  double total_comm_negotiation() const;

 private:
  std::map<RobotId, RobotLedger> robots_;
  std::map<TaskId, double> per_task_comm_;
};

// Drains one action's worth of energy from robot. Battery clamps at zero, at
// which point the robot is no longer alive. A dead robot is left untouched and
// the action is counted as dropped. Returns the amount drained.
double charge(RobotState& robot, ChargeKind kind, const EnergyModel& model, EnergyLedger& ledger,
              CommTag tag = CommTag::Gossip, double rounds = 1.0);

}  // namespace sass
