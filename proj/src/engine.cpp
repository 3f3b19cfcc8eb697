#include "sass/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "sass/cata.hpp"
#include "sass/formation.hpp"
#include "sass/routing.hpp"
#include "sass/selection.hpp"

namespace sass {

using nlohmann::json;

std::string_view robot_phase_name(RobotPhase phase) {
  switch (phase) {
    case RobotPhase::Idle:
      return "Idle";
    case RobotPhase::Selecting:
      return "Selecting";
    case RobotPhase::Forming:
      return "Forming";
    case RobotPhase::Routing:
      return "Routing";
    case RobotPhase::AtSlot:
      return "AtSlot";
    case RobotPhase::Dead:
      return "Dead";
  }
  return "Unknown";
}

std::optional<RobotPhase> parse_robot_phase(std::string_view name) {
  for (auto p : {RobotPhase::Idle, RobotPhase::Selecting, RobotPhase::Forming, RobotPhase::Routing,
                 RobotPhase::AtSlot, RobotPhase::Dead}) {
    if (robot_phase_name(p) == name) return p;
  }
  return std::nullopt;
}

bool legal_transition(RobotPhase from, RobotPhase to) {
  using P = RobotPhase;
  if (from == P::Dead) return false;
  if (to == P::Dead || to == P::Selecting) return true;  // death and preemption
  switch (from) {
    case P::Idle:
      return false;
    case P::Selecting:
      return to == P::Forming || to == P::Idle;
    case P::Forming:
      return to == P::Routing || to == P::AtSlot || to == P::Idle;
    case P::Routing:
      return to == P::AtSlot || to == P::Idle;
    case P::AtSlot:
      return to == P::Idle;
    case P::Dead:
      break;
  }
  return false;
}

std::string_view event_kind_name(EventKind kind) {
  switch (kind) {
    case EventKind::Move:
      return "Move";
    case EventKind::Stop:
      return "Stop";
    case EventKind::Gossip:
      return "Gossip";
    case EventKind::Negotiate:
      return "Negotiate";
    case EventKind::Agree:
      return "Agree";
    case EventKind::ConflictDetected:
      return "ConflictDetected";
    case EventKind::TaskArrived:
      return "TaskArrived";
    case EventKind::TaskCompleted:
      return "TaskCompleted";
    case EventKind::TaskTimedOut:
      return "TaskTimedOut";
    case EventKind::RobotDead:
      return "RobotDead";
    case EventKind::PhaseChange:
      return "PhaseChange";
  }
  return "Unknown";
}

std::optional<EventKind> parse_event_kind(std::string_view name) {
  for (int k = 0; k <= static_cast<int>(EventKind::PhaseChange); ++k) {
    const auto kind = static_cast<EventKind>(k);
    if (event_kind_name(kind) == name) return kind;
  }
  return std::nullopt;
}

std::string TraceEvent::to_json_line() const {
  json j;
  j["tick"] = tick;
  j["kind"] = std::string(event_kind_name(kind));
  j["subjects"] = subjects;
  j["detail"] = detail;
  return j.dump();
}

TraceEvent TraceEvent::from_json_line(const std::string& line) {
  const auto j = json::parse(line);
  TraceEvent e;
  e.tick = j.at("tick").get<int>();
  const auto kind = parse_event_kind(j.at("kind").get<std::string>());
  if (!kind) throw std::invalid_argument("unknown event kind in trace line");
  e.kind = *kind;
  e.subjects = j.at("subjects").get<std::vector<int>>();
  e.detail = j.value("detail", json::object());
  return e;
}

namespace {

constexpr int kNoTaskRank = std::numeric_limits<int>::max();
constexpr double kArrivalTolerance = 0.1;
constexpr int kMakeWayHeadings = 16;

json pos_json(const Position& p) {
  return json::array({p.x, p.y});
}

struct StatusView {
  Position pos;
  double battery = 0.0;
  std::optional<TaskId> group;
};

// What one robot believes about the world, read back from its knowledge set.
struct View {
  std::map<RobotId, StatusView> robots;
  std::map<TaskId, Task> tasks;
};

Datagram status_datagram(const RobotState& r) {
  json j;
  j["id"] = r.id;
  j["x"] = r.pos.x;
  j["y"] = r.pos.y;
  j["b"] = r.battery;
  j["g"] = r.group ? json(*r.group) : json(nullptr);
  return Datagram{r.id, "status", j.dump()};
}

// Task datagrams carry the task id as their origin so every copy of one task
// collapses to a single entry in a knowledge set.
Datagram task_datagram(const Task& t) {
  json j;
  j["id"] = t.id;
  j["x"] = t.center.x;
  j["y"] = t.center.y;
  j["required"] = t.required;
  j["duration"] = t.duration;
  j["timeout"] = t.timeout;
  j["arrival"] = t.arrival_tick;
  return Datagram{t.id, "task", j.dump()};
}

View view_of(const KnowledgeSet& ks) {
  View v;
  for (const auto& d : ks.items) {
    if (d.kind == "status") {
      const auto j = json::parse(d.payload);
      StatusView s;
      s.pos = {j.at("x").get<double>(), j.at("y").get<double>()};
      s.battery = j.at("b").get<double>();
      if (!j.at("g").is_null()) s.group = j.at("g").get<int>();
      v.robots[j.at("id").get<int>()] = s;
    } else if (d.kind == "task") {
      const auto j = json::parse(d.payload);
      Task t;
      t.id = j.at("id").get<int>();
      t.center = {j.at("x").get<double>(), j.at("y").get<double>()};
      t.required = j.at("required").get<int>();
      t.duration = j.at("duration").get<int>();
      t.timeout = j.at("timeout").get<int>();
      t.arrival_tick = j.at("arrival").get<int>();
      v.tasks[t.id] = t;
    }
  }
  return v;
}

// Pending tasks a group of `budget` free robots can staff, taken first-fit in
// priority order.
std::vector<Task> fitting_tasks(const View& v, const PriorityLaw& law, std::size_t budget,
                                const std::set<TaskId>& staffed) {
  std::vector<TaskId> ids;
  for (const auto& [id, t] : v.tasks) ids.push_back(id);
  const auto ranks = task_ranks(law, ids);
  std::set<TaskId> claimed = staffed;
  for (const auto& [id, s] : v.robots) {
    if (s.group) claimed.insert(*s.group);
  }
  std::vector<const Task*> pending;
  for (const auto& [id, t] : v.tasks) {
    if (!claimed.contains(id)) pending.push_back(&t);
  }
  std::sort(pending.begin(), pending.end(),
            [&](const Task* a, const Task* b) { return ranks.at(a->id) < ranks.at(b->id); });
  std::vector<Task> fits;
  for (const Task* t : pending) {
    if (static_cast<std::size_t>(t->required) <= budget) {
      fits.push_back(*t);
      budget -= static_cast<std::size_t>(t->required);
    }
  }
  return fits;
}

}  // namespace

Simulation::Simulation(Scenario scenario) : scenario_(std::move(scenario)) {
  validate(scenario_);
  order_ = compile_law(scenario_.law);
  for (const auto& spec : scenario_.robots) {
    RobotState r;
    r.id = spec.id;
    r.pos = spec.position;
    r.battery = spec.battery;
    r.alive = spec.battery > 0.0;
    index_[r.id] = robots_.size();
    robots_.push_back(r);
    phase_[r.id] = r.alive ? RobotPhase::Idle : RobotPhase::Dead;
    ledger_.register_robot(r.id, r.battery);
    known_tasks_[r.id];
  }
  for (const auto& t : scenario_.tasks) {
    TaskState ts;
    ts.task = t;
    tasks_[t.id] = ts;
    task_order_.push_back(t.id);
  }
}

const RobotState& Simulation::robot(RobotId id) const {
  return robots_.at(index_.at(id));
}

RobotState& Simulation::mut_robot(RobotId id) {
  return robots_.at(index_.at(id));
}

TaskStatus Simulation::task_status(TaskId id) const {
  return tasks_.at(id).status;
}

std::vector<RobotId> Simulation::task_group(TaskId id) const {
  return tasks_.at(id).group;
}

bool Simulation::knows_task(RobotId robot, TaskId task) const {
  return known_tasks_.at(robot).contains(task);
}

std::set<RobotId> Simulation::alive_ids() const {
  std::set<RobotId> out;
  for (const auto& r : robots_) {
    if (r.alive) out.insert(r.id);
  }
  return out;
}

void Simulation::emit(EventKind kind, std::vector<int> subjects, json detail) {
  trace_.push_back(TraceEvent{tick_, kind, std::move(subjects), std::move(detail)});
}

void Simulation::set_phase(RobotId id, RobotPhase to) {
  const RobotPhase from = phase_.at(id);
  if (from == to) return;
  if (!legal_transition(from, to)) {
    throw std::logic_error("illegal phase transition for robot " + std::to_string(id) + ": " +
                           std::string(robot_phase_name(from)) + " -> " +
                           std::string(robot_phase_name(to)));
  }
  phase_[id] = to;
  emit(EventKind::PhaseChange, {id},
       {{"from", std::string(robot_phase_name(from))}, {"to", std::string(robot_phase_name(to))}});
}

void Simulation::charge_comm(const std::set<RobotId>& participants, int rounds, CommTag tag) {
  if (rounds <= 0) return;
  for (RobotId id : participants) {
    charge(mut_robot(id), ChargeKind::CommRound, scenario_.energy, ledger_, tag, rounds);
  }
}

void Simulation::release_group(TaskState& task, RobotPhase to) {
  for (RobotId id : task.group) {
    auto& r = mut_robot(id);
    r.group.reset();
    r.formation_slot.reset();
    r.path.clear();
    if (r.alive) set_phase(id, to);
  }
  task.group.clear();
  task.slot_of.clear();
  task.vertices.clear();
  task.hold = 0;
  task.locked = false;
}

void Simulation::reap_dead() {
  for (auto& r : robots_) {
    if (r.alive || phase_.at(r.id) == RobotPhase::Dead) continue;
    if (r.group) {
      auto& t = tasks_.at(*r.group);
      std::erase(t.group, r.id);
      t.slot_of.erase(r.id);
    }
    r.group.reset();
    r.formation_slot.reset();
    r.path.clear();
    set_phase(r.id, RobotPhase::Dead);
    emit(EventKind::RobotDead, {r.id}, {{"at", pos_json(r.pos)}});
  }
}

std::map<TaskId, int> Simulation::current_ranks() const {
  std::vector<TaskId> active;
  for (const auto& [id, t] : tasks_) {
    if (t.status == TaskStatus::Active) active.push_back(id);
  }
  return task_ranks(scenario_.law, active);
}

// Proximity utility toward the robot's own task, used as the CATA_U ordering key
// once tasks are assigned.
double Simulation::utility_key(const RobotState& r) const {
  if (!r.group) return -std::numeric_limits<double>::infinity();
  return scenario_.cata.base - scenario_.cata.w_d * euclidean(r.pos, tasks_.at(*r.group).task.center);
}

std::set<RobotId> Simulation::relays_for(const std::set<RobotId>& group) const {
  if (graph_.connected(group)) return {};
  for (const auto& comp : graph_.components(alive_ids())) {
    if (std::binary_search(comp.begin(), comp.end(), *group.begin())) {
      std::set<RobotId> relays(comp.begin(), comp.end());
      for (RobotId g : group) {
        if (!relays.contains(g)) throw DisconnectedGraph("group spans disconnected components");
        relays.erase(g);
      }
      return relays;
    }
  }
  throw DisconnectedGraph("group member missing from the communication graph");
}

NegotiationOptions Simulation::negotiation_options(const std::set<RobotId>& group) const {
  NegotiationOptions opts;
  opts.start_depth = order_.needs_depth();
  opts.depth_limit = static_cast<int>(order_.size());
  opts.relays = relays_for(group);
  return opts;
}

void Simulation::record_negotiation(const NegotiationRecord& rec) {
  ++metrics_.negotiations;
  metrics_.max_negotiation_iterations = std::max(metrics_.max_negotiation_iterations, rec.iterations);
  std::vector<int> subjects(rec.participants.begin(), rec.participants.end());
  emit(EventKind::Negotiate, subjects,
       {{"phase", std::string(phase_name(rec.phase))},
        {"iterations", rec.iterations},
        {"rounds", rec.total_rounds()},
        {"depth", rec.final_depth}});
  emit(EventKind::Agree, subjects, {{"phase", std::string(phase_name(rec.phase))}, {"plan", rec.payload}});
}

void Simulation::deliver_arrivals(std::set<RobotId>& learned) {
  for (TaskId id : task_order_) {
    auto& t = tasks_.at(id);
    if (t.status != TaskStatus::Scheduled || t.task.arrival_tick != tick_) continue;
    t.status = TaskStatus::Active;
    const RobotState* nearest = nullptr;
    for (const auto& r : robots_) {
      if (!r.alive) continue;
      if (!nearest || euclidean(r.pos, t.task.center) < euclidean(nearest->pos, t.task.center)) {
        nearest = &r;
      }
    }
    if (!nearest) continue;
    known_tasks_[nearest->id].insert(id);
    learned.insert(nearest->id);
    emit(EventKind::TaskArrived, {id, nearest->id}, {{"task", id}, {"receiver", nearest->id}});
  }
}

void Simulation::gossip(std::set<RobotId>& learned) {
  knowledge_.clear();
  const auto alive = alive_ids();
  for (RobotId id : alive) {
    KnowledgeSet ks;
    ks.owner = id;
    ks.items.insert(status_datagram(robot(id)));
    for (TaskId t : known_tasks_.at(id)) {
      ks.items.insert(task_datagram(tasks_.at(t).task));
    }
    knowledge_[id] = std::move(ks);
  }

  for (const auto& comp : graph_.components(alive)) {
    const std::set<RobotId> members(comp.begin(), comp.end());
    auto spread = dcm(knowledge_, graph_, members);
    for (RobotId id : members) {
      knowledge_[id] = std::move(spread.equilibrium.at(id));
      for (const auto& d : knowledge_[id].items) {
        if (d.kind == "task" && known_tasks_[id].insert(d.origin).second) learned.insert(id);
      }
    }
    charge_comm(members, spread.rounds, CommTag::Gossip);
    if (spread.rounds > 0) emit(EventKind::Gossip, comp, {{"rounds", spread.rounds}, {"purpose", "knowledge"}});
  }
  reap_dead();
}

void Simulation::preempt(const std::set<RobotId>& learned) {
  if (learned.empty()) return;
  for (TaskId id : task_order_) {
    auto& t = tasks_.at(id);
    if (t.status != TaskStatus::Active || t.group.empty() || t.locked) continue;
    const bool affected = std::any_of(t.group.begin(), t.group.end(),
                                      [&](RobotId r) { return learned.contains(r); });
    if (affected) release_group(t, RobotPhase::Selecting);
  }
}

void Simulation::run_selection() {
  std::set<RobotId> free;
  for (const auto& r : robots_) {
    if (r.alive && !r.group && r.battery >= scenario_.low_battery_threshold) free.insert(r.id);
  }
  if (free.empty()) return;

  std::set<TaskId> staffed_now;
  for (const auto& comp : graph_.components(free)) {
    const std::set<RobotId> group(comp.begin(), comp.end());
    const View lead = view_of(knowledge_.at(comp.front()));
    if (fitting_tasks(lead, scenario_.law, group.size(), staffed_now).empty()) continue;

    for (RobotId id : group) set_phase(id, RobotPhase::Selecting);

    const SelectionParams params{scenario_.energy, scenario_.step_length};
    Planner planner = [&](RobotId, const KnowledgeSet& ks, int depth) {
      const View v = view_of(ks);
      std::vector<RobotState> candidates;
      for (RobotId id : group) {
        auto it = v.robots.find(id);
        if (it == v.robots.end()) continue;
        RobotState r;
        r.id = id;
        r.pos = it->second.pos;
        r.battery = it->second.battery;
        candidates.push_back(r);
      }
      const auto fits = fitting_tasks(v, scenario_.law, candidates.size(), staffed_now);
      if (fits.empty()) return SelectionPlan{}.canonical();
      if (scenario_.law.kind == LawKind::CataU) {
        return cata_select(candidates, fits, scenario_.cata, scenario_.safety_radius).canonical();
      }
      return select(candidates, fits, scenario_.law, params, depth).canonical();
    };

    const auto rec = negotiate(Phase::Selection, group, graph_, knowledge_, planner,
                               negotiation_options(group));
    const auto plan = SelectionPlan::parse(rec.payload);
    for (const auto& [rid, task] : plan.assignment) {
      if (task) {
        auto& r = mut_robot(rid);
        r.group = *task;
        tasks_.at(*task).group.push_back(rid);
        staffed_now.insert(*task);
        set_phase(rid, RobotPhase::Forming);
      } else {
        set_phase(rid, RobotPhase::Idle);
      }
    }
    for (RobotId id : group) {
      if (!plan.assignment.contains(id)) set_phase(id, RobotPhase::Idle);
    }
    record_negotiation(rec);
    charge_comm(rec.participants, rec.total_rounds(), CommTag::Negotiation);
  }
  reap_dead();
}

void Simulation::run_formation() {
  const auto ranks = current_ranks();
  for (TaskId id : task_order_) {
    auto& t = tasks_.at(id);
    if (t.status != TaskStatus::Active || t.group.empty() || !t.slot_of.empty()) continue;
    std::sort(t.group.begin(), t.group.end());
    const std::set<RobotId> group(t.group.begin(), t.group.end());
    const int rank = ranks.at(id);

    Planner planner = [&](RobotId, const KnowledgeSet& ks, int depth) {
      const View v = view_of(ks);
      const Task& task = v.tasks.at(id);
      std::map<RobotId, NeedKeys> keys;
      std::map<RobotId, Position> positions;
      for (RobotId rid : group) {
        const auto& s = v.robots.at(rid);
        keys[rid] = NeedKeys{s.battery, rank,
                             scenario_.cata.base - scenario_.cata.w_d * euclidean(s.pos, task.center)};
        positions[rid] = s.pos;
      }
      const auto queue = sort_queue(t.group, keys, order_, depth);
      const auto vertices = polygon_vertices(task.center, task.required, scenario_.formation_radius);
      auto plan = formation_assign(queue, build_distance_matrix(queue, positions, vertices));
      plan.task = id;
      return plan.canonical();
    };

    const auto rec =
        negotiate(Phase::Formation, group, graph_, knowledge_, planner, negotiation_options(group));
    const auto plan = FormationPlan::parse(rec.payload);
    t.vertices = polygon_vertices(t.task.center, t.task.required, scenario_.formation_radius);
    t.slot_of = plan.slot_of;
    for (const auto& [rid, slot] : plan.slot_of) {
      auto& r = mut_robot(rid);
      r.formation_slot = slot;
      const Position& goal = t.vertices[static_cast<std::size_t>(slot)];
      if (r.pos == goal) {
        r.path.clear();
        set_phase(rid, RobotPhase::AtSlot);
      } else {
        r.path = {goal};
        set_phase(rid, RobotPhase::Routing);
      }
    }
    record_negotiation(rec);
    charge_comm(rec.participants, rec.total_rounds(), CommTag::Negotiation);
  }
  reap_dead();
}

void Simulation::run_routing() {
  const double clearance = 2.0 * scenario_.safety_radius;
  const double step = scenario_.step_length;
  moved_this_tick_.clear();

  std::vector<Position> claimed;
  for (const auto& [id, t] : tasks_) {
    for (const auto& [rid, slot] : t.slot_of) {
      if (phase_.at(rid) == RobotPhase::Routing) claimed.push_back(t.vertices[static_cast<std::size_t>(slot)]);
    }
  }

  std::map<RobotId, RoutePlan> plans;
  std::map<RobotId, std::string> stop_reason;
  for (const auto& r : robots_) {
    if (!r.alive) continue;
    std::optional<Position> goal;
    const RobotPhase ph = phase_.at(r.id);
    if (ph == RobotPhase::Routing) {
      goal = tasks_.at(*r.group).vertices[static_cast<std::size_t>(*r.formation_slot)];
    } else if (ph == RobotPhase::Idle) {
      // Idle robots step off vertices other robots are heading to, taking the
      // step that most increases their distance to the nearest such vertex.
      auto nearest_claim = [&](const Position& p) {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& c : claimed) d = std::min(d, euclidean(p, c));
        return d;
      };
      double best = nearest_claim(r.pos);
      if (best < clearance + step) {
        for (int k = 0; k < kMakeWayHeadings; ++k) {
          const double a = 2.0 * std::numbers::pi * k / kMakeWayHeadings;
          const Position p{std::clamp(r.pos.x + step * std::cos(a), 0.0, scenario_.world_size),
                           std::clamp(r.pos.y + step * std::sin(a), 0.0, scenario_.world_size)};
          const double d = nearest_claim(p);
          if (d > best + 1e-9) {
            best = d;
            goal = p;
          }
        }
      }
    }
    if (!goal) {
      stop_reason[r.id] = ph == RobotPhase::AtSlot ? "at_slot" : "idle";
      continue;
    }
    std::vector<Position> obstacles;
    for (const auto& o : robots_) {
      if (o.id != r.id) obstacles.push_back(o.pos);
    }
    auto plan = plan_step(r.pos, *goal, step, obstacles, clearance, scenario_.world_size);
    if (plan.moving) {
      plans[r.id] = std::move(plan);
    } else {
      stop_reason[r.id] = "blocked";
    }
  }

  std::map<RobotId, StepProposal> proposals;
  for (const auto& [id, plan] : plans) proposals[id] = StepProposal{robot(id).pos, plan.to};
  const auto pairs = detect_conflicts(proposals, scenario_.safety_radius);
  const auto clusters = cluster_conflicts(pairs, tick_);

  const auto ranks = current_ranks();
  auto keys_of = [&](RobotId id) {
    const auto& r = robot(id);
    return NeedKeys{r.battery, r.group ? ranks.at(*r.group) : kNoTaskRank, utility_key(r)};
  };

  // Every robot planning a route this tick shares its potential collision
  // queue q_c, empty or not, along with its need keys.
  std::map<RobotId, KnowledgeSet> routing_knowledge;
  std::set<RobotId> shared_ok;
  if (scenario_.conflict_negotiation) {
    std::set<RobotId> sharers;
    for (const auto& r : robots_) {
      if (r.alive && phase_.at(r.id) == RobotPhase::Routing) sharers.insert(r.id);
    }
    for (const auto& cluster : clusters) sharers.insert(cluster.members.begin(), cluster.members.end());

    std::map<RobotId, KnowledgeSet> shared;
    for (RobotId m : sharers) {
      std::vector<int> partners;
      for (const auto& [a, b] : pairs) {
        if (a == m) partners.push_back(b);
        if (b == m) partners.push_back(a);
      }
      const auto k = keys_of(m);
      json j{{"id", m}, {"with", partners}, {"b", k.battery}, {"r", k.task_rank}, {"u", k.utility}};
      shared[m] = KnowledgeSet{m, {Datagram{m, "q_c", j.dump()}}};
    }
    for (const auto& comp : graph_.components(alive_ids())) {
      std::set<RobotId> part;
      for (RobotId id : comp) {
        if (sharers.contains(id)) part.insert(id);
      }
      if (part.empty()) continue;
      shared_ok.insert(part.begin(), part.end());
      if (!graph_.connected(part)) part.insert(comp.begin(), comp.end());
      auto spread = dcm(shared, graph_, part);
      charge_comm(part, spread.rounds, CommTag::Negotiation);
      if (spread.rounds > 0) {
        emit(EventKind::Gossip, std::vector<int>(part.begin(), part.end()),
             {{"rounds", spread.rounds}, {"purpose", "q_c"}});
      }
      for (auto& [id, ks] : spread.equilibrium) routing_knowledge[id] = std::move(ks);
    }
  }

  for (const auto& cluster : clusters) {
    ++metrics_.conflict_frequency;
    const std::set<RobotId> members(cluster.members.begin(), cluster.members.end());
    emit(EventKind::ConflictDetected, cluster.members, json::object());

    // Members split across components cannot hear each other; they fall back
    // to the locally sorted queue.
    bool reachable = std::includes(shared_ok.begin(), shared_ok.end(), members.begin(), members.end());
    if (reachable) {
      const auto& ks = routing_knowledge.at(*members.begin());
      for (RobotId m : members) reachable = reachable && routing_knowledge.at(m) == ks;
    }

    std::vector<RobotId> order;
    if (scenario_.conflict_negotiation && reachable) {
      Planner planner = [&](RobotId self, const KnowledgeSet& ks, int depth) {
        std::map<RobotId, NeedKeys> keys;
        UnionFind uf;
        uf.find(self);
        for (const auto& d : ks.items) {
          if (d.kind != "q_c") continue;
          const auto j = json::parse(d.payload);
          const RobotId id = j.at("id").get<int>();
          keys[id] = NeedKeys{j.at("b").get<double>(), j.at("r").get<int>(), j.at("u").get<double>()};
          for (int other : j.at("with")) uf.unite(id, other);
        }
        std::vector<RobotId> queue;
        for (const auto& [id, k] : keys) {
          if (uf.find(id) == uf.find(self)) queue.push_back(id);
        }
        std::ostringstream os;
        os << "route";
        for (RobotId id : sort_queue(queue, keys, order_, depth)) os << ';' << id;
        return os.str();
      };

      const auto rec =
          negotiate(Phase::Routing, members, graph_, routing_knowledge, planner, negotiation_options(members));
      std::istringstream is(rec.payload);
      std::string field;
      std::getline(is, field, ';');
      while (std::getline(is, field, ';')) order.push_back(std::stoi(field));
      record_negotiation(rec);
      charge_comm(rec.participants, rec.total_rounds(), CommTag::Negotiation);
    } else {
      std::map<RobotId, NeedKeys> keys;
      for (RobotId m : members) keys[m] = keys_of(m);
      order = sort_queue(cluster.members, keys, order_, order_.needs_depth());
    }

    for (const auto& [id, action] : resolve_cluster(cluster, order)) {
      if (action == MotionAction::Stop) {
        plans.erase(id);
        stop_reason[id] = "conflict";
      }
    }
  }
  reap_dead();

  for (auto& r : robots_) {
    if (!r.alive) continue;
    auto it = plans.find(r.id);
    if (it == plans.end()) {
      emit(EventKind::Stop, {r.id}, {{"at", pos_json(r.pos)}, {"reason", stop_reason[r.id]}});
      continue;
    }
    const Position from = r.pos;
    r.pos = it->second.to;
    metrics_.total_distance += euclidean(from, r.pos);
    moved_this_tick_.insert(r.id);
    emit(EventKind::Move, {r.id}, {{"from", pos_json(from)}, {"to", pos_json(r.pos)}});
    if (phase_.at(r.id) == RobotPhase::Routing) {
      const Position& goal = tasks_.at(*r.group).vertices[static_cast<std::size_t>(*r.formation_slot)];
      if (r.pos == goal) {
        r.path.clear();
        set_phase(r.id, RobotPhase::AtSlot);
      } else {
        r.path = it->second.path;
      }
    }
  }

  for (std::size_t i = 0; i < robots_.size(); ++i) {
    for (std::size_t j = i + 1; j < robots_.size(); ++j) {
      if (euclidean(robots_[i].pos, robots_[j].pos) < clearance - 1e-9) {
        throw std::logic_error("safety violated between robots " + std::to_string(robots_[i].id) +
                               " and " + std::to_string(robots_[j].id) + " at tick " +
                               std::to_string(tick_));
      }
    }
  }
}

void Simulation::check_tasks() {
  for (TaskId id : task_order_) {
    auto& t = tasks_.at(id);
    if (t.status != TaskStatus::Active) continue;

    const bool in_place =
        static_cast<int>(t.group.size()) == t.task.required &&
        static_cast<int>(t.slot_of.size()) == t.task.required &&
        std::all_of(t.group.begin(), t.group.end(), [&](RobotId rid) {
          const auto& r = robot(rid);
          return r.alive &&
                 euclidean(r.pos, t.vertices[static_cast<std::size_t>(t.slot_of.at(rid))]) <= kArrivalTolerance;
        });
    if (in_place) {
      ++t.hold;
      t.locked = true;
    } else {
      t.hold = 0;
      t.locked = false;
    }

    if (in_place && t.hold >= t.task.duration) {
      t.status = TaskStatus::Completed;
      ++metrics_.tasks_completed;
      std::vector<int> subjects{id};
      subjects.insert(subjects.end(), t.group.begin(), t.group.end());
      emit(EventKind::TaskCompleted, subjects, {{"task", id}});
      release_group(t, RobotPhase::Idle);
    } else if (tick_ - t.task.arrival_tick >= t.task.timeout) {
      t.status = TaskStatus::TimedOut;
      ++metrics_.tasks_timed_out;
      std::vector<int> subjects{id};
      subjects.insert(subjects.end(), t.group.begin(), t.group.end());
      emit(EventKind::TaskTimedOut, subjects, {{"task", id}});
      release_group(t, RobotPhase::Idle);
    }
    if (t.status != TaskStatus::Active) {
      for (auto& [rid, known] : known_tasks_) known.erase(id);
    }
  }
}

void Simulation::tick() {
  if (finished()) throw std::logic_error("tick called on a finished simulation");

  std::set<RobotId> learned;
  deliver_arrivals(learned);
  graph_ = build_graph_unchecked(robots_, scenario_.comm_range);
  gossip(learned);
  preempt(learned);
  run_selection();
  run_formation();
  run_routing();

  for (auto& r : robots_) {
    if (!r.alive) continue;
    charge(r, moved_this_tick_.contains(r.id) ? ChargeKind::Move : ChargeKind::Idle, scenario_.energy,
           ledger_);
  }
  reap_dead();
  check_tasks();
  ++tick_;
}

bool Simulation::finished() const {
  if (tick_ >= scenario_.max_ticks) return true;
  if (std::none_of(robots_.begin(), robots_.end(), [](const RobotState& r) { return r.alive; })) return true;
  if (tasks_.empty()) return false;
  return std::all_of(tasks_.begin(), tasks_.end(), [](const auto& kv) {
    return kv.second.status == TaskStatus::Completed || kv.second.status == TaskStatus::TimedOut;
  });
}

RunResult Simulation::result() const {
  RunResult out;
  out.metrics = metrics_;
  out.trace = trace_;
  out.robots = robots_;
  out.ledger = ledger_;

  auto& m = out.metrics;
  m.energy_moving = ledger_.total_moving();
  m.energy_idle = ledger_.total_idle();
  m.energy_comm = ledger_.total_comm();
  m.energy_comm_negotiation = ledger_.total_comm_negotiation();
  m.per_task_comm = ledger_.per_task_comm();
  m.ticks_elapsed = tick_;
  if (!robots_.empty()) {
    double sum = 0.0;
    m.residual_max = -std::numeric_limits<double>::infinity();
    m.residual_min = std::numeric_limits<double>::infinity();
    for (const auto& r : robots_) {
      m.residual_max = std::max(m.residual_max, r.battery);
      m.residual_min = std::min(m.residual_min, r.battery);
      sum += r.battery;
    }
    m.residual_mean = sum / static_cast<double>(robots_.size());
  }
  return out;
}

RunResult run(const Scenario& scenario) {
  Simulation sim(scenario);
  while (!sim.finished()) sim.tick();
  return sim.result();
}

}  // namespace sass
