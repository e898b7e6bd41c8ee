#include "mapf/teg.hpp"

#include <sstream>

namespace mapf {

Teg::Teg(int depth, int vertex_count)
    : depth_(depth),
      vertex_count_(vertex_count),
      admitted_(static_cast<std::size_t>(depth + 1) * vertex_count, 0),
      layers_(depth + 1),
      transitions_(depth),
      extra_per_step_(depth, 0) {}

std::size_t Teg::vertex_total() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += l.size();
  return n;
}

std::size_t Teg::edge_total() const {
  std::size_t n = 0;
  for (const auto& tr : transitions_) n += tr.size();
  return n;
}

std::vector<TegEdge> Teg::edges(EdgeKind kind) const {
  std::vector<TegEdge> out;
  for (const auto& tr : transitions_)
    for (const auto& e : tr)
      if (e.kind == kind) out.push_back(e);
  return out;
}

std::string Teg::dump() const {
  std::ostringstream out;
  for (const auto& tr : transitions_)
    for (const auto& e : tr)
      out << e.time << ' ' << e.from << ' ' << e.to << ' '
          << (e.kind == EdgeKind::Extra ? "extra" : "std") << '\n';
  return out.str();
}

Teg build_layered(const Graph& graph, int mu, int xi0, VertexId start, VertexId goal,
                  int budget, bool restrict) {
  if (mu < xi0) throw Error("TEG depth is below the agent's shortest path cost");
  if (xi0 < 0) throw Error("negative shortest path cost");
  if (!graph.valid(start) || !graph.valid(goal)) throw Error("TEG endpoints out of range");

  const int n = graph.vertex_count();
  Teg teg(mu, n);
  std::vector<int> from_start, to_goal;
  if (restrict) {
    from_start = graph.bfs(start);
    to_goal = graph.bfs(goal);
  }
  auto admit = [&](int t, VertexId u) {
    if (!restrict) return true;
    // the goal stays admitted after the budget: trailing waits there are free
    return from_start[u] >= 0 && to_goal[u] >= 0 && from_start[u] <= t &&
           (u == goal || t + to_goal[u] <= budget);
  };

  for (int t = 0; t <= mu; ++t) {
    for (VertexId u = 0; u < n; ++u) {
      if (admit(t, u)) {
        teg.admitted_[static_cast<std::size_t>(t) * n + u] = 1;
        teg.layers_[t].push_back(u);
      }
    }
  }
  // Destination-time rule: a move landing after xi0 is extra; waits never are.
  for (int t = 0; t < mu; ++t) {
    auto& out = teg.transitions_[t];
    const bool late = t + 1 > xi0;
    for (VertexId u : teg.layers_[t]) {
      auto push = [&](VertexId w) {
        if (!teg.admits(t + 1, w)) return;
        EdgeKind kind = (late && w != u) ? EdgeKind::Extra : EdgeKind::Standard;
        out.push_back({t, u, w, kind});
        if (kind == EdgeKind::Extra) ++teg.extra_per_step_[t];
      };
      // (from, to) order: neighbors below u, the wait, neighbors above u
      const auto& nb = graph.neighbors(u);
      std::size_t i = 0;
      for (; i < nb.size() && nb[i] < u; ++i) push(nb[i]);
      push(u);
      for (; i < nb.size(); ++i) push(nb[i]);
    }
  }
  return teg;
}

Teg build_teg(const Graph& graph, int mu, int xi0, VertexId start, VertexId goal) {
  return build_layered(graph, mu, xi0, start, goal, 0, false);
}

Teg build_mdd_teg(const Graph& graph, int mu, int xi0, int delta, VertexId start,
                  VertexId goal) {
  if (delta < 0) throw Error("negative slack");
  return build_layered(graph, mu, xi0, start, goal, xi0 + delta, true);
}

}  // namespace mapf
