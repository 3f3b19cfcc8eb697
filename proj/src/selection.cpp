#include "sass/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace sass {

std::vector<RobotId> SelectionPlan::members_of(TaskId task) const {
  std::vector<RobotId> out;
  for (const auto& [robot, t] : assignment) {
    if (t && *t == task) out.push_back(robot);
  }
  return out;
}

std::string SelectionPlan::canonical() const {
  std::ostringstream os;
  os << "sel";
  for (const auto& [robot, t] : assignment) {
    os << ';' << robot << ':';
    if (t) {
      os << *t;
    } else {
      os << 'U';
    }
  }
  return os.str();
}

SelectionPlan SelectionPlan::parse(const std::string& text) {
  SelectionPlan plan;
  std::istringstream is(text);
  std::string field;
  std::getline(is, field, ';');
  if (field != "sel") throw std::invalid_argument("not a selection plan: " + text);
  while (std::getline(is, field, ';')) {
    const auto colon = field.find(':');
    const RobotId robot = std::stoi(field.substr(0, colon));
    const std::string task = field.substr(colon + 1);
    plan.assignment[robot] = task == "U" ? std::nullopt : std::optional<TaskId>(std::stoi(task));
  }
  return plan;
}

double estimate_cost(const RobotState& robot, const Task& task, const SelectionParams& params) {
  const double steps = std::ceil(euclidean(robot.pos, task.center) / params.step_length);
  return params.energy.move_cost * steps;
}

double plan_cost(const SelectionPlan& plan, const std::vector<RobotState>& robots,
                 const std::vector<Task>& tasks, const SelectionParams& params) {
  double total = 0.0;
  for (const auto& r : robots) {
    auto it = plan.assignment.find(r.id);
    if (it == plan.assignment.end() || !it->second) continue;
    const auto task = std::find_if(tasks.begin(), tasks.end(),
                                   [&](const Task& t) { return t.id == *it->second; });
    total += estimate_cost(r, *task, params);
  }
  return total;
}

std::map<RobotId, NeedKeys> selection_keys(const std::vector<RobotState>& robots,
                                           const std::vector<Task>& tasks, const PriorityLaw& law) {
  std::vector<TaskId> ids;
  for (const auto& t : tasks) ids.push_back(t.id);
  const auto ranks = task_ranks(law, ids);

  std::map<RobotId, NeedKeys> keys;
  for (const auto& r : robots) {
    NeedKeys k;
    k.battery = r.battery;
    double nearest = std::numeric_limits<double>::infinity();
    int nearest_rank = std::numeric_limits<int>::max();
    for (const auto& t : tasks) {
      const double d = euclidean(r.pos, t.center);
      const int rank = ranks.at(t.id);
      if (d < nearest || (d == nearest && rank < nearest_rank)) {
        nearest = d;
        nearest_rank = rank;
      }
    }
    k.task_rank = tasks.empty() ? 0 : nearest_rank;
    k.utility = tasks.empty() ? 0.0 : -nearest;
    keys[r.id] = k;
  }
  return keys;
}

namespace {

void check_feasible(const std::vector<RobotState>& robots, const std::vector<Task>& tasks) {
  if (tasks.empty()) throw std::invalid_argument("select: no tasks");
  long need = 0;
  for (const auto& t : tasks) need += t.required;
  const long alive = std::count_if(robots.begin(), robots.end(), [](auto& r) { return r.alive; });
  if (need > alive) {
    throw InsufficientRobots("tasks need " + std::to_string(need) + " robots, " +
                             std::to_string(alive) + " alive");
  }
}

}  // namespace

SelectionPlan select(const std::vector<RobotState>& robots, const std::vector<Task>& tasks,
                     const PriorityLaw& law, const SelectionParams& params, int depth) {
  (void)params;
  check_feasible(robots, tasks);

  std::vector<RobotState> alive;
  std::vector<RobotId> ids;
  for (const auto& r : robots) {
    if (!r.alive) continue;
    alive.push_back(r);
    ids.push_back(r.id);
  }
  const auto order = compile_law(law);
  const auto queue =
      sort_queue(ids, selection_keys(alive, tasks, law), order, depth < 0 ? order.needs_depth() : depth);

  std::vector<TaskId> task_ids;
  for (const auto& t : tasks) task_ids.push_back(t.id);
  const auto ranks = task_ranks(law, task_ids);
  std::vector<const Task*> by_rank;
  for (const auto& t : tasks) by_rank.push_back(&t);
  std::sort(by_rank.begin(), by_rank.end(),
            [&](const Task* a, const Task* b) { return ranks.at(a->id) < ranks.at(b->id); });

  // Block sizes and their order are fixed, so the cut positions are too.
  SelectionPlan plan;
  std::size_t cursor = 0;
  for (const Task* t : by_rank) {
    for (int k = 0; k < t->required; ++k) plan.assignment[queue[cursor++]] = t->id;
  }
  for (; cursor < queue.size(); ++cursor) plan.assignment[queue[cursor]] = std::nullopt;
  return plan;
}

OracleSelection selection_oracle(const std::vector<RobotState>& robots,
                                 const std::vector<Task>& tasks, const SelectionParams& params) {
  if (robots.size() > 10 || tasks.size() > 3) {
    throw std::invalid_argument("selection_oracle: instance beyond 10 robots / 3 tasks");
  }
  check_feasible(robots, tasks);

  std::vector<const RobotState*> alive;
  for (const auto& r : robots) {
    if (r.alive) alive.push_back(&r);
  }
  std::vector<int> open;
  for (const auto& t : tasks) open.push_back(t.required);
  int surplus = static_cast<int>(alive.size());
  for (int o : open) surplus -= o;

  std::vector<int> choice(alive.size(), -1);
  std::vector<int> best_choice;
  double best = std::numeric_limits<double>::infinity();

  auto recurse = [&](auto&& self, std::size_t i, double acc) -> void {
    if (acc >= best) return;
    if (i == alive.size()) {
      best = acc;
      best_choice = choice;
      return;
    }
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      if (open[t] == 0) continue;
      --open[t];
      choice[i] = static_cast<int>(t);
      self(self, i + 1, acc + estimate_cost(*alive[i], tasks[t], params));
      ++open[t];
    }
    if (surplus > 0) {
      --surplus;
      choice[i] = -1;
      self(self, i + 1, acc);
      ++surplus;
    }
  };
  recurse(recurse, 0, 0.0);

  OracleSelection out;
  out.cost = best;
  for (std::size_t i = 0; i < alive.size(); ++i) {
    out.plan.assignment[alive[i]->id] =
        best_choice[i] < 0 ? std::nullopt
                           : std::optional<TaskId>(tasks[static_cast<std::size_t>(best_choice[i])].id);
  }
  return out;
}

}  // namespace sass
