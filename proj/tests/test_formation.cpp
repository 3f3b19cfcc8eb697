#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "sass/formation.hpp"
#include "support.hpp"

using namespace sass;

namespace {

DistanceMatrix matrix(std::vector<std::vector<double>> entries) {
  DistanceMatrix m;
  for (std::size_t i = 0; i < entries.size(); ++i) m.rows.push_back(static_cast<RobotId>(i + 1));
  m.entries = std::move(entries);
  return m;
}

// Brute-force minimum over every permutation.
double brute_force(const DistanceMatrix& m) {
  std::vector<int> perm(m.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = 1e300;
  do {
    double total = 0;
    for (std::size_t i = 0; i < m.size(); ++i) total += m.at(i, static_cast<std::size_t>(perm[i]));
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

TEST_CASE("greedy without contention takes row minima") {
  const auto m = matrix({{1, 5}, {2, 1}});
  const auto plan = formation_assign({1, 2}, m);
  CHECK(plan.slot_of.at(1) == 0);
  CHECK(plan.slot_of.at(2) == 1);
  CHECK(assignment_total(m, plan.slot_of) == doctest::Approx(2.0));
  CHECK(hungarian_oracle(m).total == doctest::Approx(2.0));
}

TEST_CASE("greedy can be beaten by the optimum") {
  const auto m = matrix({{1, 2}, {1, 9}});
  const auto plan = formation_assign({1, 2}, m);
  CHECK(plan.slot_of.at(1) == 0);
  CHECK(plan.slot_of.at(2) == 1);
  CHECK(assignment_total(m, plan.slot_of) == doctest::Approx(10.0));
  const auto opt = hungarian_oracle(m);
  CHECK(opt.total == doctest::Approx(3.0));
  CHECK(opt.col_of_row == std::vector<int>{1, 0});

  // queue order matters
  const auto swapped = formation_assign({2, 1}, m);
  CHECK(swapped.slot_of.at(2) == 0);
  CHECK(swapped.slot_of.at(1) == 1);
}

TEST_CASE("single robot and identity matrices") {
  CHECK(formation_assign({1}, matrix({{4}})).slot_of.at(1) == 0);
  CHECK(hungarian_oracle(matrix({{0, 9}, {9, 0}})).total == doctest::Approx(0.0));
}

TEST_CASE("ties go to the lower vertex index") {
  const auto plan = formation_assign({1, 2}, matrix({{3, 3}, {3, 3}}));
  CHECK(plan.slot_of.at(1) == 0);
  CHECK(plan.slot_of.at(2) == 1);
}

TEST_CASE("distance matrix over polygon vertices") {
  const auto vertices = polygon_vertices({0, 0}, 4, 2.0);
  const auto m = build_distance_matrix({7, 3}, {{3, {0, 0}}, {7, {0, 2}}}, vertices);
  CHECK(m.rows == std::vector<RobotId>{7, 3});
  CHECK(m.at(0, 0) == doctest::Approx(0.0));
  CHECK(m.at(1, 2) == doctest::Approx(2.0));
  const auto plan = formation_assign({7, 3}, m);
  CHECK(plan.slot_of.at(7) == 0);
  FormationPlan p = plan;
  p.task = 5;
  CHECK(FormationPlan::parse(p.canonical()).canonical() == p.canonical());
}

TEST_CASE("greedy never beats Hungarian, and Hungarian matches brute force") {
  support::Gen g(500);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = g.integer(1, 8);
    std::vector<std::vector<double>> e(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
    for (auto& row : e) {
      for (auto& v : row) v = g.real(0, 50);
    }
    const auto m = matrix(e);
    std::vector<RobotId> queue = m.rows;
    std::shuffle(queue.begin(), queue.end(), g.rng);
    const auto plan = formation_assign(queue, m);

    std::set<int> slots;
    for (const auto& [id, s] : plan.slot_of) slots.insert(s);
    CHECK(slots.size() == static_cast<std::size_t>(n));

    const auto opt = hungarian_oracle(m);
    CHECK(assignment_total(m, plan.slot_of) >= opt.total - 1e-9);
    if (n <= 7) CHECK(opt.total == doctest::Approx(brute_force(m)));
  }
}

TEST_CASE("greedy equals Hungarian on diagonal-dominant matrices") {
  support::Gen g(501);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = g.integer(1, 8);
    std::vector<std::vector<double>> e(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        e[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = i == j ? g.real(0, 1) : g.real(10, 50);
      }
    }
    const auto m = matrix(e);
    const auto plan = formation_assign(m.rows, m);
    CHECK(assignment_total(m, plan.slot_of) == doctest::Approx(hungarian_oracle(m).total));
  }
}
