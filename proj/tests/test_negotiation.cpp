#include "doctest.h"
#include "sass/needs.hpp"
#include "sass/negotiation.hpp"
#include "support.hpp"

using namespace sass;

namespace {

CommGraph line(int n) {
  CommGraph g;
  for (int i = 0; i < n; ++i) g.add_node(i);
  for (int i = 1; i < n; ++i) g.add_edge(i - 1, i);
  return g;
}

// Plans from the task datagrams a member has heard of.
std::string tasks_known(RobotId, const KnowledgeSet& ks, int) {
  std::string out = "plan";
  for (const auto& d : ks.items) out += ";" + std::to_string(d.origin);
  return out;
}

}  // namespace

TEST_CASE("agreement") {
  const Proposal a{Phase::Selection, 1, "sel;1:0;2:0", 0};
  CHECK(agreement({a, {Phase::Selection, 2, a.payload, 0}, {Phase::Selection, 3, a.payload, 0}}) ==
        AgreementOutcome::End);
  CHECK(agreement({a, {Phase::Selection, 2, "sel;1:0;2:U", 0}}) == AgreementOutcome::Conflict);
  CHECK(agreement({a}) == AgreementOutcome::End);
  CHECK_THROWS_AS(agreement({a, {Phase::Routing, 2, a.payload, 0}}), PhaseMismatch);
  CHECK_THROWS(agreement({}));
}

TEST_CASE("agreement is End exactly when every payload is equal") {
  support::Gen g(41);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Proposal> ps;
    bool same = true;
    const int n = g.integer(1, 6);
    for (int i = 0; i < n; ++i) {
      ps.push_back({Phase::Formation, i, "p" + std::to_string(g.integer(0, 1)), 0});
      same = same && ps[static_cast<std::size_t>(i)].payload == ps.front().payload;
    }
    CHECK((agreement(ps) == AgreementOutcome::End) == same);
  }
}

TEST_CASE("identical knowledge agrees in one iteration") {
  const auto g = line(3);
  std::map<RobotId, KnowledgeSet> know;
  for (int i = 0; i < 3; ++i) know[i] = KnowledgeSet{i, {Datagram{7, "task", "t"}}};
  const auto rec = negotiate(Phase::Selection, {0, 1, 2}, g, know, tasks_known, {0, 3, {}});
  CHECK(rec.iterations == 1);
  CHECK(rec.final_depth == 0);
  CHECK(rec.payload == "plan;7");
  CHECK(rec.dcm_rounds == std::vector<int>{2});
  CHECK(rec.total_rounds() == 2);
}

TEST_CASE("a member missing a task datagram replans at the same depth") {
  const auto g = line(3);
  std::map<RobotId, KnowledgeSet> know;
  know[0] = KnowledgeSet{0, {Datagram{7, "task", "t"}, Datagram{8, "task", "u"}}};
  know[1] = KnowledgeSet{1, {Datagram{7, "task", "t"}, Datagram{8, "task", "u"}}};
  know[2] = KnowledgeSet{2, {Datagram{7, "task", "t"}}};
  const auto rec = negotiate(Phase::Selection, {0, 1, 2}, g, know, tasks_known, {0, 3, {}});
  CHECK(rec.iterations == 2);
  CHECK(rec.final_depth == 0);
  CHECK(rec.payload == "plan;7;8");
  CHECK(know.at(2) == know.at(0));
}

TEST_CASE("a conflict between equally informed members escalates") {
  const auto g = line(2);
  std::map<RobotId, KnowledgeSet> know{{0, {0, {}}}, {1, {1, {}}}};
  const Planner split = [](RobotId m, const KnowledgeSet&, int depth) {
    return depth == 0 ? "mine" + std::to_string(m) : std::string("shared");
  };
  const auto rec = negotiate(Phase::Routing, {0, 1}, g, know, split, {0, 3, {}});
  CHECK(rec.iterations == 2);
  CHECK(rec.final_depth == 1);
  CHECK(rec.payload == "shared");

  const Planner stubborn = [](RobotId m, const KnowledgeSet&, int) { return std::to_string(m); };
  CHECK_THROWS_AS(negotiate(Phase::Routing, {0, 1}, g, know, stubborn, {0, 3, {}}), ExhaustedCriteria);
}

TEST_CASE("negotiation settles within two iterations on random groups") {
  support::Gen g(77);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = g.integer(1, 12);
    const auto graph = support::random_connected_graph(g, n, 0.15);
    std::set<RobotId> group;
    std::map<RobotId, KnowledgeSet> know;
    for (int i = 0; i < n; ++i) {
      group.insert(i);
      KnowledgeSet ks{i, {}};
      for (int t = 0; t < 4; ++t) {
        if (g.coin(0.4)) ks.items.insert(Datagram{100 + t, "task", "t"});
      }
      know[i] = ks;
    }
    const auto rec = negotiate(Phase::Selection, group, graph, know, tasks_known, {0, 2, {}});
    CHECK(rec.iterations <= 2);
    CHECK(rec.final_depth == 0);
    for (const auto& [id, ks] : know) CHECK(tasks_known(id, ks, 0) == rec.payload);
  }
}
