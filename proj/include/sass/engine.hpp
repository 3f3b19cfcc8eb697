#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "sass/comms.hpp"
#include "sass/needs.hpp"
#include "sass/negotiation.hpp"
#include "sass/scenario.hpp"
#include "sass/world.hpp"

namespace sass {

// Idle -> Selecting -> Forming -> Routing -> AtSlot is the normal walk through
// one task. The accept state is task completion, which returns robots to Idle.
enum class RobotPhase { Idle, Selecting, Forming, Routing, AtSlot, Dead };

std::string_view robot_phase_name(RobotPhase phase);
std::optional<RobotPhase> parse_robot_phase(std::string_view name);
bool legal_transition(RobotPhase from, RobotPhase to);

enum class EventKind {
  Move,
  Stop,
  Gossip,
  Negotiate,
  Agree,
  ConflictDetected,
  TaskArrived,
  TaskCompleted,
  TaskTimedOut,
  RobotDead,
  PhaseChange,
};

std::string_view event_kind_name(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view name);

struct TraceEvent {
  int tick = 0;
  EventKind kind = EventKind::Move;
  std::vector<int> subjects;
  nlohmann::json detail = nlohmann::json::object();

  std::string to_json_line() const;
  static TraceEvent from_json_line(const std::string& line);
};

struct RunMetrics {
  int conflict_frequency = 0;
  double energy_moving = 0.0;
  double energy_idle = 0.0;
  double energy_comm = 0.0;
  double energy_comm_negotiation = 0.0;
  double total_distance = 0.0;
  std::map<TaskId, double> per_task_comm;
  double residual_max = 0.0;
  double residual_min = 0.0;
  double residual_mean = 0.0;
  int ticks_elapsed = 0;
  int tasks_completed = 0;
  int tasks_timed_out = 0;
  int negotiations = 0;
  int max_negotiation_iterations = 0;

  double energy_total() const { return energy_moving + energy_idle + energy_comm; }
};

enum class TaskStatus { Scheduled, Active, Completed, TimedOut };

struct RunResult {
  RunMetrics metrics;
  std::vector<TraceEvent> trace;
  std::vector<RobotState> robots;
  EnergyLedger ledger;
};

class Simulation {
 public:
  explicit Simulation(Scenario scenario);

  // Advances one tick: task arrivals, gossip, preemption, selection, formation,
  // routing, energy charging, then completion and timeout checks.
  void tick();
  bool finished() const;
  RunResult result() const;

  int current_tick() const { return tick_; }
  const Scenario& scenario() const { return scenario_; }
  const std::vector<RobotState>& robots() const { return robots_; }
  const RobotState& robot(RobotId id) const;
  RobotPhase phase_of(RobotId id) const { return phase_.at(id); }
  TaskStatus task_status(TaskId id) const;
  std::vector<RobotId> task_group(TaskId id) const;
  bool knows_task(RobotId robot, TaskId task) const;
  const std::vector<TraceEvent>& trace() const { return trace_; }
  const EnergyLedger& ledger() const { return ledger_; }
  const RunMetrics& metrics() const { return metrics_; }

 private:
  struct TaskState {
    Task task;
    TaskStatus status = TaskStatus::Scheduled;
    std::vector<RobotId> group;
    std::map<RobotId, int> slot_of;
    std::vector<Position> vertices;
    int hold = 0;
    bool locked = false;
  };

  RobotState& mut_robot(RobotId id);
  std::set<RobotId> alive_ids() const;
  void emit(EventKind kind, std::vector<int> subjects, nlohmann::json detail = nlohmann::json::object());
  void set_phase(RobotId id, RobotPhase to);
  void charge_comm(const std::set<RobotId>& participants, int rounds, CommTag tag);
  void reap_dead();
  void release_group(TaskState& task, RobotPhase to);

  void deliver_arrivals(std::set<RobotId>& learned);
  void gossip(std::set<RobotId>& learned);
  void preempt(const std::set<RobotId>& learned);
  void run_selection();
  void run_formation();
  void run_routing();
  void check_tasks();

  std::set<RobotId> relays_for(const std::set<RobotId>& group) const;
  NegotiationOptions negotiation_options(const std::set<RobotId>& group) const;
  void record_negotiation(const NegotiationRecord& rec);
  std::map<TaskId, int> current_ranks() const;
  double utility_key(const RobotState& r) const;

  Scenario scenario_;
  NeedsOrderQueue order_;
  std::vector<RobotState> robots_;
  std::map<RobotId, std::size_t> index_;
  std::map<RobotId, RobotPhase> phase_;
  std::map<TaskId, TaskState> tasks_;
  std::vector<TaskId> task_order_;  // file order
  std::map<RobotId, std::set<TaskId>> known_tasks_;
  std::map<RobotId, KnowledgeSet> knowledge_;
  CommGraph graph_;
  EnergyLedger ledger_;
  RunMetrics metrics_;
  std::vector<TraceEvent> trace_;
  std::set<RobotId> moved_this_tick_;
  int tick_ = 0;
};

// Runs the scenario until every task is resolved, every robot is dead, or
// max_ticks is reached. A scenario without tasks runs to max_ticks.
RunResult run(const Scenario& scenario);

}  // namespace sass
