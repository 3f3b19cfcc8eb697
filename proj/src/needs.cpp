#include "sass/needs.hpp"

#include <algorithm>

namespace sass {

std::string_view law_name(LawKind kind) {
  switch (kind) {
    case LawKind::HighE:
      return "high_e";
    case LawKind::LowE:
      return "low_e";
    case LawKind::TPlusHighE:
      return "t_high_e";
    case LawKind::TPlusLowE:
      return "t_low_e";
    case LawKind::CataU:
      return "cata_u";
  }
  return "unknown";
}

std::optional<LawKind> parse_law(std::string_view name) {
  for (LawKind k : {LawKind::HighE, LawKind::LowE, LawKind::TPlusHighE, LawKind::TPlusLowE,
                    LawKind::CataU}) {
    if (law_name(k) == name) return k;
  }
  return std::nullopt;
}

NeedLevel need_level(Criterion c) {
  switch (c) {
    case Criterion::BatteryAscending:
    case Criterion::BatteryDescending:
      return NeedLevel::Basic;
    case Criterion::TaskRankAscending:
      return NeedLevel::Capability;
    case Criterion::UtilityDescending:
      return NeedLevel::Team;
    case Criterion::IdAscending:
      break;
  }
  return NeedLevel::Safety;
}

NeedsOrderQueue compile_law(const PriorityLaw& law) {
  using C = Criterion;
  switch (law.kind) {
    case LawKind::HighE:
      return {{C::BatteryDescending, C::IdAscending}};
    case LawKind::LowE:
      return {{C::BatteryAscending, C::IdAscending}};
    case LawKind::TPlusHighE:
      return {{C::TaskRankAscending, C::BatteryDescending, C::IdAscending}};
    case LawKind::TPlusLowE:
      return {{C::TaskRankAscending, C::BatteryAscending, C::IdAscending}};
    case LawKind::CataU:
      return {{C::UtilityDescending, C::BatteryAscending, C::IdAscending}};
  }
  return {{C::IdAscending}};
}

namespace {

// Negative when a goes first, positive when b goes first.
int compare_on(Criterion c, RobotId a, const NeedKeys& ka, RobotId b, const NeedKeys& kb) {
  auto cmp = [](auto x, auto y) { return x < y ? -1 : (y < x ? 1 : 0); };
  switch (c) {
    case Criterion::BatteryAscending:
      return cmp(ka.battery, kb.battery);
    case Criterion::BatteryDescending:
      return cmp(kb.battery, ka.battery);
    case Criterion::TaskRankAscending:
      return cmp(ka.task_rank, kb.task_rank);
    case Criterion::UtilityDescending:
      return cmp(kb.utility, ka.utility);
    case Criterion::IdAscending:
      return cmp(a, b);
  }
  return 0;
}

}  // namespace

std::vector<RobotId> sort_queue(const std::vector<RobotId>& candidates,
                                const std::map<RobotId, NeedKeys>& context,
                                const NeedsOrderQueue& order, int depth) {
  if (depth < 0 || depth >= static_cast<int>(order.size())) {
    throw ExhaustedCriteria("sort_queue: depth " + std::to_string(depth) + " exceeds " +
                            std::to_string(order.size()) + " criteria");
  }
  for (RobotId id : candidates) {
    if (!context.contains(id)) {
      throw std::invalid_argument("sort_queue: no key data for robot " + std::to_string(id));
    }
  }
  std::vector<RobotId> out = candidates;
  std::sort(out.begin(), out.end(), [&](RobotId a, RobotId b) {
    const auto& ka = context.at(a);
    const auto& kb = context.at(b);
    for (int i = 0; i <= depth; ++i) {
      const int c = compare_on(order.criteria[static_cast<std::size_t>(i)], a, ka, b, kb);
      if (c != 0) return c < 0;
    }
    return a < b;
  });
  return out;
}

std::map<TaskId, int> task_ranks(const PriorityLaw& law, const std::vector<TaskId>& active) {
  std::vector<TaskId> sorted = active;
  std::sort(sorted.begin(), sorted.end());
  std::map<TaskId, int> ranks;
  int next = 0;
  for (TaskId t : law.task_priority_order) {
    if (std::binary_search(sorted.begin(), sorted.end(), t) && !ranks.contains(t)) {
      ranks[t] = next++;
    }
  }
  for (TaskId t : sorted) {
    if (!ranks.contains(t)) ranks[t] = next++;
  }
  return ranks;
}

}  // namespace sass
