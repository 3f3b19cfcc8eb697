#include "sass/comms.hpp"

#include <algorithm>
#include <deque>

namespace sass {

namespace {
const std::set<RobotId> kNoNeighbors;
}

void CommGraph::add_node(RobotId id) {
  adjacency_.try_emplace(id);
}

void CommGraph::add_edge(RobotId a, RobotId b) {
  if (a == b) {
    return;
  }
  adjacency_[a].insert(b);
  adjacency_[b].insert(a);
}

const std::set<RobotId>& CommGraph::neighbors(RobotId id) const {
  auto it = adjacency_.find(id);
  return it == adjacency_.end() ? kNoNeighbors : it->second;
}

bool CommGraph::has_edge(RobotId a, RobotId b) const {
  return neighbors(a).contains(b);
}

std::size_t CommGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& [id, nbrs] : adjacency_) n += nbrs.size();
  return n / 2;
}

std::vector<std::vector<RobotId>> CommGraph::components(const std::set<RobotId>& members) const {
  std::vector<std::vector<RobotId>> out;
  std::set<RobotId> seen;
  for (RobotId start : members) {
    if (seen.contains(start)) continue;
    std::vector<RobotId> comp;
    std::deque<RobotId> frontier{start};
    seen.insert(start);
    while (!frontier.empty()) {
      const RobotId cur = frontier.front();
      frontier.pop_front();
      comp.push_back(cur);
      for (RobotId n : neighbors(cur)) {
        if (members.contains(n) && seen.insert(n).second) {
          frontier.push_back(n);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

bool CommGraph::connected(const std::set<RobotId>& members) const {
  return members.empty() || components(members).size() == 1;
}

int CommGraph::diameter(const std::set<RobotId>& members) const {
  int best = 0;
  for (RobotId src : members) {
    std::map<RobotId, int> dist{{src, 0}};
    std::deque<RobotId> frontier{src};
    while (!frontier.empty()) {
      const RobotId cur = frontier.front();
      frontier.pop_front();
      for (RobotId n : neighbors(cur)) {
        if (members.contains(n) && !dist.contains(n)) {
          dist[n] = dist[cur] + 1;
          best = std::max(best, dist[n]);
          frontier.push_back(n);
        }
      }
    }
    if (dist.size() != members.size()) {
      throw DisconnectedGraph("diameter of a disconnected subgraph");
    }
  }
  return best;
}

CommGraph build_graph_unchecked(const std::vector<RobotState>& robots, CommRange range) {
  CommGraph g;
  for (const auto& r : robots) {
    if (r.alive) g.add_node(r.id);
  }
  for (std::size_t i = 0; i < robots.size(); ++i) {
    if (!robots[i].alive) continue;
    for (std::size_t j = i + 1; j < robots.size(); ++j) {
      if (!robots[j].alive) continue;
      if (!range || euclidean(robots[i].pos, robots[j].pos) <= *range) {
        g.add_edge(robots[i].id, robots[j].id);
      }
    }
  }
  return g;
}

CommGraph build_graph(const std::vector<RobotState>& robots, CommRange range) {
  if (robots.empty()) {
    throw std::invalid_argument("build_graph: no robots");
  }
  CommGraph g = build_graph_unchecked(robots, range);
  std::set<RobotId> alive;
  for (const auto& [id, nbrs] : g.adjacency()) alive.insert(id);
  if (!g.connected(alive)) {
    throw DisconnectedGraph("communication graph is not connected over alive robots");
  }
  return g;
}

bool KnowledgeSet::contains_origin(RobotId id, const std::string& kind) const {
  return std::any_of(items.begin(), items.end(),
                     [&](const Datagram& d) { return d.origin == id && d.kind == kind; });
}

DcmResult dcm(const std::map<RobotId, KnowledgeSet>& initial, const CommGraph& graph,
              const std::set<RobotId>& participants) {
  DcmResult result;
  for (RobotId id : participants) {
    auto it = initial.find(id);
    KnowledgeSet ks;
    ks.owner = id;
    if (it != initial.end()) ks.items = it->second.items;
    result.equilibrium.emplace(id, std::move(ks));
  }

  auto settled = [&] {
    const KnowledgeSet* first = nullptr;
    for (const auto& [id, ks] : result.equilibrium) {
      if (!first) {
        first = &ks;
      } else if (!(ks == *first)) {
        return false;
      }
    }
    return true;
  };

  const int guard = static_cast<int>(participants.size());
  while (!settled()) {
    if (result.rounds >= guard) {
      throw NonTermination("dcm: no equilibrium after " + std::to_string(guard) + " rounds");
    }
    auto next = result.equilibrium;
    for (RobotId id : participants) {
      auto& mine = next.at(id).items;
      for (RobotId n : graph.neighbors(id)) {
        if (!participants.contains(n)) continue;
        const auto& theirs = result.equilibrium.at(n).items;
        mine.insert(theirs.begin(), theirs.end());
      }
    }
    result.equilibrium = std::move(next);
    ++result.rounds;
  }
  return result;
}

DcmResult dcm(const std::map<RobotId, Datagram>& payloads, const CommGraph& graph,
              const std::set<RobotId>& group) {
  std::map<RobotId, KnowledgeSet> initial;
  for (RobotId id : group) {
    auto it = payloads.find(id);
    if (it == payloads.end()) {
      throw std::invalid_argument("dcm: member " + std::to_string(id) + " has no datagram");
    }
    initial[id] = KnowledgeSet{id, {it->second}};
  }
  return dcm(initial, graph, group);
}

}  // namespace sass
