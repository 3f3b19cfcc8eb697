#pragma once

#include <cstdint>
#include <deque>
#include <random>
#include <vector>

#include "sass/comms.hpp"
#include "sass/scenario.hpp"
#include "sass/world.hpp"

namespace support {

// Small seeded generator for hand-rolled property tests.
struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng); }
};

inline sass::RobotState robot(sass::RobotId id, double x, double y, double battery = 100.0) {
  sass::RobotState r;
  r.id = id;
  r.pos = {x, y};
  r.battery = battery;
  return r;
}

inline sass::Task task(sass::TaskId id, double x, double y, int required = 1) {
  sass::Task t;
  t.id = id;
  t.center = {x, y};
  t.required = required;
  return t;
}

// Random spanning tree on 0..n-1 plus extra edges with probability p.
inline sass::CommGraph random_connected_graph(Gen& g, int n, double p) {
  sass::CommGraph graph;
  for (int i = 0; i < n; ++i) graph.add_node(i);
  for (int i = 1; i < n; ++i) graph.add_edge(i, g.integer(0, i - 1));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (g.coin(p)) graph.add_edge(i, j);
    }
  }
  return graph;
}

// Eccentricity of every node by breadth-first search, independent of CommGraph::diameter.
inline std::vector<int> eccentricities(const sass::CommGraph& graph, int n) {
  std::vector<int> ecc(static_cast<std::size_t>(n), 0);
  for (int s = 0; s < n; ++s) {
    std::vector<int> dist(static_cast<std::size_t>(n), -1);
    std::deque<int> queue{s};
    dist[static_cast<std::size_t>(s)] = 0;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int v : graph.neighbors(u)) {
        if (dist[static_cast<std::size_t>(v)] < 0) {
          dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
          queue.push_back(v);
        }
      }
    }
    for (int d : dist) ecc[static_cast<std::size_t>(s)] = std::max(ecc[static_cast<std::size_t>(s)], d);
  }
  return ecc;
}

inline sass::Scenario base_scenario(double world = 40.0) {
  sass::Scenario s;
  s.world_size = world;
  s.max_ticks = 2000;
  return s;
}

inline void add_robot(sass::Scenario& s, sass::RobotId id, double x, double y, double battery = 100.0) {
  s.robots.push_back(sass::RobotSpec{id, {x, y}, battery});
}

inline void add_task(sass::Scenario& s, sass::TaskId id, double x, double y, int required, int arrival = 0,
                     int duration = 3, int timeout = 1000) {
  sass::Task t;
  t.id = id;
  t.center = {x, y};
  t.required = required;
  t.arrival_tick = arrival;
  t.duration = duration;
  t.timeout = timeout;
  s.tasks.push_back(t);
}

}  // namespace support
