#include <algorithm>

#include "doctest.h"
#include "sass/needs.hpp"
#include "support.hpp"

using namespace sass;

namespace {

std::map<RobotId, NeedKeys> batteries(std::initializer_list<std::pair<RobotId, double>> values) {
  std::map<RobotId, NeedKeys> out;
  for (const auto& [id, b] : values) out[id] = NeedKeys{b, 0, 0.0};
  return out;
}

std::vector<RobotId> order_of(LawKind kind, const std::map<RobotId, NeedKeys>& keys) {
  std::vector<RobotId> ids;
  for (const auto& [id, k] : keys) ids.push_back(id);
  const auto order = compile_law({kind, {}});
  return sort_queue(ids, keys, order, order.needs_depth());
}

}  // namespace

TEST_CASE("law names round trip") {
  for (auto k : {LawKind::HighE, LawKind::LowE, LawKind::TPlusHighE, LawKind::TPlusLowE, LawKind::CataU}) {
    CHECK(parse_law(law_name(k)) == k);
  }
  CHECK(law_name(LawKind::TPlusLowE) == "t_low_e");
  CHECK_FALSE(parse_law("lowest").has_value());
}

TEST_CASE("compiled criteria") {
  using C = Criterion;
  CHECK(compile_law({LawKind::HighE, {}}).criteria == std::vector<C>{C::BatteryDescending, C::IdAscending});
  CHECK(compile_law({LawKind::LowE, {}}).criteria == std::vector<C>{C::BatteryAscending, C::IdAscending});
  CHECK(compile_law({LawKind::TPlusLowE, {}}).criteria ==
        std::vector<C>{C::TaskRankAscending, C::BatteryAscending, C::IdAscending});
  CHECK(compile_law({LawKind::TPlusHighE, {}}).criteria ==
        std::vector<C>{C::TaskRankAscending, C::BatteryDescending, C::IdAscending});
  CHECK(compile_law({LawKind::CataU, {}}).criteria ==
        std::vector<C>{C::UtilityDescending, C::BatteryAscending, C::IdAscending});
  CHECK(need_level(C::BatteryAscending) == NeedLevel::Basic);
  CHECK(need_level(C::TaskRankAscending) == NeedLevel::Capability);
}

TEST_CASE("low and high energy queues") {
  const auto keys = batteries({{1, 80}, {2, 60}, {3, 90}});
  CHECK(order_of(LawKind::LowE, keys) == std::vector<RobotId>{2, 1, 3});
  CHECK(order_of(LawKind::HighE, keys) == std::vector<RobotId>{3, 1, 2});
  CHECK(order_of(LawKind::LowE, batteries({{1, 70}, {2, 70}})) == std::vector<RobotId>{1, 2});
}

TEST_CASE("sort depth and exhaustion") {
  const auto low = compile_law({LawKind::LowE, {}});
  CHECK(sort_queue({1, 2, 3}, batteries({{1, 60}, {2, 60}, {3, 50}}), low, 0) == std::vector<RobotId>{3, 1, 2});

  const auto tlow = compile_law({LawKind::TPlusLowE, {}});
  auto keys = batteries({{1, 90}, {2, 40}});
  CHECK(sort_queue({1, 2}, keys, tlow, 1) == std::vector<RobotId>{2, 1});
  // depth 0 only looks at the (equal) task rank, so ids decide
  CHECK(sort_queue({1, 2}, keys, tlow, 0) == std::vector<RobotId>{1, 2});

  CHECK_THROWS_AS(sort_queue({1, 2}, keys, low, 2), ExhaustedCriteria);
  CHECK_THROWS_AS(sort_queue({1, 5}, keys, low, 0), std::exception);
}

TEST_CASE("task ranks follow an explicit order") {
  const auto def = task_ranks({LawKind::TPlusLowE, {}}, {2, 0, 1});
  CHECK(def.at(0) == 0);
  CHECK(def.at(1) == 1);
  CHECK(def.at(2) == 2);
  const auto custom = task_ranks({LawKind::TPlusLowE, {2, 0, 1}}, {0, 1, 2});
  CHECK(custom.at(2) == 0);
  CHECK(custom.at(0) == 1);
  CHECK(custom.at(1) == 2);
}

TEST_CASE("law duality: reversing batteries maps the low queue to the high queue") {
  support::Gen g(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = g.integer(1, 15);
    std::map<RobotId, NeedKeys> keys, mirrored;
    for (int i = 0; i < n; ++i) {
      const double b = g.real(0, 100);  // continuous draws, so no ties
      keys[i] = NeedKeys{b, 0, 0};
      mirrored[i] = NeedKeys{100.0 - b, 0, 0};
    }
    CHECK(order_of(LawKind::LowE, keys) == order_of(LawKind::HighE, mirrored));
  }
}

TEST_CASE("sort_queue is a strict total order independent of input order") {
  support::Gen g(6);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = g.integer(1, 12);
    std::map<RobotId, NeedKeys> keys;
    std::vector<RobotId> ids;
    for (int i = 0; i < n; ++i) {
      keys[i * 3] = NeedKeys{static_cast<double>(g.integer(50, 55)), g.integer(0, 2), static_cast<double>(g.integer(0, 3))};
      ids.push_back(i * 3);
    }
    auto shuffled = ids;
    std::shuffle(shuffled.begin(), shuffled.end(), g.rng);
    for (auto kind : {LawKind::HighE, LawKind::LowE, LawKind::TPlusHighE, LawKind::TPlusLowE, LawKind::CataU}) {
      const auto order = compile_law({kind, {}});
      for (int depth = 0; depth < static_cast<int>(order.size()); ++depth) {
        const auto a = sort_queue(ids, keys, order, depth);
        const auto b = sort_queue(shuffled, keys, order, depth);
        CHECK(a == b);
        auto sorted = a;
        std::sort(sorted.begin(), sorted.end());
        CHECK(sorted == ids);
      }
    }
  }
}
