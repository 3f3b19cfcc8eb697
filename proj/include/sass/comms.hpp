#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "sass/world.hpp"

namespace sass {

class DisconnectedGraph : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonTermination : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Range in meters, or nullopt for a complete graph.
using CommRange = std::optional<double>;

class CommGraph {
 public:
  CommGraph() = default;

  void add_node(RobotId id);
  void add_edge(RobotId a, RobotId b);

  const std::set<RobotId>& neighbors(RobotId id) const;
  const std::map<RobotId, std::set<RobotId>>& adjacency() const { return adjacency_; }
  bool has_edge(RobotId a, RobotId b) const;
  std::size_t edge_count() const;

  // Connected components of the subgraph induced by members, each sorted, ordered
  // by smallest id.
  std::vector<std::vector<RobotId>> components(const std::set<RobotId>& members) const;
  bool connected(const std::set<RobotId>& members) const;

  // Longest shortest path inside the subgraph induced by members. Requires the
  // subgraph to be connected.
  int diameter(const std::set<RobotId>& members) const;

 private:
  std::map<RobotId, std::set<RobotId>> adjacency_;
};

// Builds the graph over the given robots (dead ones included as isolated nodes is
// not meaningful, so only alive robots get nodes). Throws DisconnectedGraph when
// the alive robots do not form a single component.
CommGraph build_graph(const std::vector<RobotState>& robots, CommRange range);

// Same as build_graph without the connectivity check.
CommGraph build_graph_unchecked(const std::vector<RobotState>& robots, CommRange range);

// One element d_i of a knowledge set.
struct Datagram {
  RobotId origin = 0;
  std::string kind;
  std::string payload;

  friend auto operator<=>(const Datagram&, const Datagram&) = default;
};

struct KnowledgeSet {
  RobotId owner = 0;
  std::set<Datagram> items;

  bool contains_origin(RobotId id, const std::string& kind) const;
  friend bool operator==(const KnowledgeSet& a, const KnowledgeSet& b) { return a.items == b.items; }
};

struct DcmResult {
  std::map<RobotId, KnowledgeSet> equilibrium;
  int rounds = 0;
};

// Synchronous gossip to Information Equilibrium. Each round, every participant
// replaces its set with the union of its own and its in-group neighbors' sets
// from the previous round. Stops once every participant holds the same set.
// Throws NonTermination if that has not happened after |participants| rounds.
DcmResult dcm(const std::map<RobotId, KnowledgeSet>& initial, const CommGraph& graph,
              const std::set<RobotId>& participants);

// The single-datagram form: every group member starts with exactly its own d_i.
DcmResult dcm(const std::map<RobotId, Datagram>& payloads, const CommGraph& graph,
              const std::set<RobotId>& group);

}  // namespace sass
