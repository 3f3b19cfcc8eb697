#include "doctest.h"
#include "sass/comms.hpp"
#include "support.hpp"

using namespace sass;

namespace {

std::map<RobotId, Datagram> own_datagrams(const std::set<RobotId>& ids) {
  std::map<RobotId, Datagram> out;
  for (RobotId id : ids) out[id] = Datagram{id, "status", "d" + std::to_string(id)};
  return out;
}

CommGraph line(int n) {
  CommGraph g;
  for (int i = 0; i < n; ++i) g.add_node(i);
  for (int i = 1; i < n; ++i) g.add_edge(i - 1, i);
  return g;
}

}  // namespace

TEST_CASE("graph from ranges") {
  std::vector<RobotState> robots{support::robot(0, 0, 0), support::robot(1, 3, 0), support::robot(2, 6, 0)};
  const auto g = build_graph(robots, 3.5);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(1, 2));
  CHECK_FALSE(g.has_edge(0, 2));
  CHECK(g.diameter({0, 1, 2}) == 2);

  const auto complete = build_graph(robots, std::nullopt);
  CHECK(complete.edge_count() == 3);

  CHECK_THROWS_AS(build_graph(robots, 2.0), DisconnectedGraph);
  CHECK_THROWS_AS(build_graph({}, std::nullopt), std::exception);
}

TEST_CASE("dead robots drop out of the graph") {
  std::vector<RobotState> robots{support::robot(0, 0, 0), support::robot(1, 3, 0), support::robot(2, 6, 0)};
  robots[1].alive = false;
  const auto g = build_graph_unchecked(robots, std::nullopt);
  CHECK(g.has_edge(0, 2));
  CHECK_FALSE(g.has_edge(0, 1));
}

TEST_CASE("components of an induced subgraph") {
  const auto g = line(5);
  const auto comps = g.components({0, 1, 3, 4});
  REQUIRE(comps.size() == 2);
  CHECK(comps[0] == std::vector<RobotId>{0, 1});
  CHECK(comps[1] == std::vector<RobotId>{3, 4});
  CHECK_FALSE(g.connected({0, 1, 3}));
  CHECK_THROWS_AS(g.diameter({0, 4}), DisconnectedGraph);
}

TEST_CASE("dcm on a 3-line needs two rounds") {
  const auto g = line(3);
  const auto res = dcm(own_datagrams({0, 1, 2}), g, {0, 1, 2});
  CHECK(res.rounds == 2);
  for (const auto& [id, ks] : res.equilibrium) CHECK(ks.items.size() == 3);
}

TEST_CASE("dcm on a complete graph takes one round, singleton none") {
  CommGraph g;
  for (int i = 0; i < 6; ++i) g.add_node(i);
  for (int i = 0; i < 6; ++i) {
    for (int j = i + 1; j < 6; ++j) g.add_edge(i, j);
  }
  CHECK(dcm(own_datagrams({0, 1, 2, 3, 4, 5}), g, {0, 1, 2, 3, 4, 5}).rounds == 1);
  CHECK(dcm(own_datagrams({3}), g, {3}).rounds == 0);
}

TEST_CASE("dcm with equal sets does not communicate") {
  const auto g = line(4);
  std::map<RobotId, KnowledgeSet> same;
  for (int i = 0; i < 4; ++i) same[i] = KnowledgeSet{i, {Datagram{9, "task", "x"}}};
  CHECK(dcm(same, g, {0, 1, 2, 3}).rounds == 0);
}

TEST_CASE("dcm on a disconnected group does not terminate") {
  CommGraph g;
  g.add_node(0);
  g.add_node(1);
  CHECK_THROWS_AS(dcm(own_datagrams({0, 1}), g, {0, 1}), NonTermination);
}

TEST_CASE("dcm rounds match the breadth-first diameter on random connected graphs") {
  support::Gen g(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = g.integer(1, 30);
    const auto graph = support::random_connected_graph(g, n, g.real(0.0, 0.3));
    std::set<RobotId> ids;
    for (int i = 0; i < n; ++i) ids.insert(i);
    const auto res = dcm(own_datagrams(ids), graph, ids);

    const auto ecc = support::eccentricities(graph, n);
    const int diameter = *std::max_element(ecc.begin(), ecc.end());
    CHECK(res.rounds == diameter);
    CHECK(graph.diameter(ids) == diameter);
    for (const auto& [id, ks] : res.equilibrium) {
      CHECK(ks.items.size() == static_cast<std::size_t>(n));
      CHECK(ks == res.equilibrium.begin()->second);
    }
  }
}

TEST_CASE("dcm within a subgroup ignores outside neighbours") {
  const auto g = line(4);
  // 0 and 2 only connect through 1, which is not a participant
  CHECK_THROWS_AS(dcm(own_datagrams({0, 2}), g, {0, 2}), NonTermination);
  // with 1 relaying it settles
  std::map<RobotId, KnowledgeSet> init;
  init[0] = KnowledgeSet{0, {Datagram{0, "q", "a"}}};
  init[2] = KnowledgeSet{2, {Datagram{2, "q", "b"}}};
  const auto res = dcm(init, g, {0, 1, 2});
  CHECK(res.rounds == 2);
  CHECK(res.equilibrium.at(1).items.size() == 2);
}
