#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sass/world.hpp"

namespace sass {

// Levels of the robot needs hierarchy. Only Safety, Basic and Capability turn
// into ordering decisions; Team shows up as distance matrices and SelfUpgrade
// is never used.
enum class NeedLevel { Safety = 1, Basic = 2, Capability = 3, Team = 4, SelfUpgrade = 5 };

enum class LawKind { HighE, LowE, TPlusHighE, TPlusLowE, CataU };

struct PriorityLaw {
  LawKind kind = LawKind::TPlusLowE;
  // Task ids from highest to lowest priority. Empty means ascending task id.
  std::vector<TaskId> task_priority_order;
};

// Names used in scenario files and metrics: high_e, low_e, t_high_e, t_low_e, cata_u.
std::string_view law_name(LawKind kind);
std::optional<LawKind> parse_law(std::string_view name);

enum class Criterion { BatteryDescending, BatteryAscending, TaskRankAscending, UtilityDescending, IdAscending };

NeedLevel need_level(Criterion c);

// Ordered sort criteria. The last entry is always IdAscending.
struct NeedsOrderQueue {
  std::vector<Criterion> criteria;

  std::size_t size() const { return criteria.size(); }
  // Depth at which every need-derived criterion is in effect (everything but
  // the final id tie-break).
  int needs_depth() const { return static_cast<int>(criteria.size()) - 2; }
};

NeedsOrderQueue compile_law(const PriorityLaw& law);

// Per-robot values the criteria read.
struct NeedKeys {
  double battery = 0.0;
  int task_rank = 0;
  double utility = 0.0;
};

class ExhaustedCriteria : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sorts candidates by criteria[0..depth] and then by id, giving a strict order.
std::vector<RobotId> sort_queue(const std::vector<RobotId>& candidates,
                                const std::map<RobotId, NeedKeys>& context,
                                const NeedsOrderQueue& order, int depth);

// Rank of each task under the law (0 = most urgent). Tasks absent from an
// explicit order rank after the listed ones, by id.
std::map<TaskId, int> task_ranks(const PriorityLaw& law, const std::vector<TaskId>& active);

// Below this battery level a robot withdraws from new task selection.
inline constexpr double kLowBatteryThreshold = 5.0;

}  // namespace sass
