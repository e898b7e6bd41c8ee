#pragma once

#include <cstdint>
#include <vector>

#include "mapf/instance.hpp"

namespace mapf::testing {

/// Path graph 0 - 1 - ... - (n-1).
inline Graph path_graph(int n) {
  Graph g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

/// 4-cycle 0 - 1 - 2 - 3 - 0, i.e. the full 2x2 grid.
inline Graph four_cycle() {
  Graph g(4);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 3);
  g.add_edge(3, 0);
  return g;
}

/// u1 - u2 - u3 with one agent u1 -> u3 (optimal cost 2).
inline MapfInstance fig5_instance() { return MapfInstance(path_graph(3), {{0, 2}}); }

/// Opposite corners of the 4-cycle, each heading to the other's corner.
inline MapfInstance cycle_crossing() { return MapfInstance(four_cycle(), {{0, 2}, {2, 0}}); }

/// Two agents swapping along a single edge.
inline MapfInstance edge_swap() { return MapfInstance(path_graph(2), {{0, 1}, {1, 0}}); }

/// Corridor 0-1-2-3 with a pocket 4 hanging off 1; agents meet head-on.
inline MapfInstance corridor_with_pocket() {
  Graph g = Graph(5);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 3);
  g.add_edge(1, 4);
  return MapfInstance(g, {{0, 3}, {3, 0}});
}

/// Random solvable instance on a grid of at most 4x4 with at most 3 agents.
inline MapfInstance small_random_instance(std::uint64_t seed) {
  GridInstanceParams p;
  p.width = 2 + static_cast<int>(seed % 3);
  p.height = 2 + static_cast<int>((seed / 3) % 3);
  p.obstacle_rate = (seed / 9) % 2 ? 0.15 : 0.0;
  int cells = p.width * p.height - static_cast<int>(p.obstacle_rate * p.width * p.height + 0.5);
  p.agents = 1 + static_cast<int>((seed / 18) % 3);
  if (p.agents > cells - 1) p.agents = std::max(1, cells - 1);
  p.seed = seed * 7919 + 17;
  p.walk_steps = 30;
  return generate_grid_instance(p);
}

}  // namespace mapf::testing
