#include <algorithm>
#include <cstdint>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "mapf/search.hpp"

namespace mapf {

std::optional<Conflict> first_conflict(const std::vector<Path>& paths) {
  std::size_t horizon = 0;
  for (const auto& p : paths) horizon = std::max(horizon, p.size());
  const int k = static_cast<int>(paths.size());
  for (int t = 0; t < static_cast<int>(horizon); ++t) {
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        if (position_at(paths[i], t) == position_at(paths[j], t))
          return Conflict{ConflictKind::Vertex, i, j, position_at(paths[i], t), t};
    if (t == 0) continue;
    for (int i = 0; i < k; ++i) {
      VertexId v = position_at(paths[i], t);
      if (v == position_at(paths[i], t - 1)) continue;
      for (int j = 0; j < k; ++j)
        if (j != i && position_at(paths[j], t - 1) == v)
          return Conflict{ConflictKind::Following, i, j, v, t};
    }
  }
  return std::nullopt;
}

namespace {

int count_conflicts(const std::vector<Path>& paths) {
  std::size_t horizon = 0;
  for (const auto& p : paths) horizon = std::max(horizon, p.size());
  const int k = static_cast<int>(paths.size());
  int count = 0;
  for (int t = 0; t < static_cast<int>(horizon); ++t)
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        if (i == j) continue;
        if (i < j && position_at(paths[i], t) == position_at(paths[j], t)) ++count;
        if (t > 0 && position_at(paths[i], t) != position_at(paths[i], t - 1) &&
            position_at(paths[j], t - 1) == position_at(paths[i], t))
          ++count;
      }
  return count;
}

std::int64_t cell_key(int t, VertexId v, int n) { return static_cast<std::int64_t>(t) * n + v; }

}  // namespace

std::optional<Path> low_level_astar(const MapfInstance& instance, int agent,
                                    std::span<const Constraint> constraints, int horizon,
                                    const std::vector<Path>& others) {
  const Graph& graph = instance.graph();
  const int n = graph.vertex_count();
  const Agent& me = instance.agents().at(agent);
  const std::vector<int> to_goal = graph.bfs(me.goal);
  if (to_goal[me.start] < 0) return std::nullopt;

  std::unordered_set<std::int64_t> blocked;
  int last_goal_block = -1;
  for (const auto& c : constraints) {
    // nothing is modelled past the horizon
    if (c.agent != agent || c.time > horizon) continue;
    blocked.insert(cell_key(c.time, c.vertex, n));
    if (c.vertex == me.goal) last_goal_block = std::max(last_goal_block, c.time);
  }
  if (blocked.count(cell_key(0, me.start, n))) return std::nullopt;

  auto conflicts_at = [&](VertexId from, VertexId to, int t) {
    int c = 0;
    for (const auto& p : others) {
      if (p.empty()) continue;
      if (position_at(p, t) == to) ++c;
      if (from != to && t > 0 && position_at(p, t - 1) == to) ++c;
    }
    return c;
  };

  struct Node {
    VertexId v;
    int t;
    int conflicts;
    int parent;
  };
  struct Entry {
    int f;
    int conflicts;
    int t;
    int index;
    bool operator>(const Entry& o) const {
      if (f != o.f) return f > o.f;
      if (conflicts != o.conflicts) return conflicts > o.conflicts;
      if (t != o.t) return t < o.t;  // deeper first
      return index > o.index;
    }
  };
  std::vector<Node> nodes;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::unordered_map<std::int64_t, int> best;  // (t, v) -> fewest conflicts seen

  int c0 = conflicts_at(me.start, me.start, 0);
  nodes.push_back({me.start, 0, c0, -1});
  best[cell_key(0, me.start, n)] = c0;
  open.push({to_goal[me.start], c0, 0, 0});

  while (!open.empty()) {
    Entry top = open.top();
    open.pop();
    const Node node = nodes[top.index];
    if (best[cell_key(node.t, node.v, n)] < node.conflicts) continue;  // stale
    if (node.v == me.goal && node.t > last_goal_block) {
      Path path;
      for (int i = top.index; i >= 0; i = nodes[i].parent) path.push_back(nodes[i].v);
      std::reverse(path.begin(), path.end());
      return path;
    }
    if (node.t >= horizon) continue;
    auto expand = [&](VertexId w) {
      const int t = node.t + 1;
      if (to_goal[w] < 0 || t + to_goal[w] > horizon) return;
      if (blocked.count(cell_key(t, w, n))) return;
      int c = node.conflicts + conflicts_at(node.v, w, t);
      auto key = cell_key(t, w, n);
      auto it = best.find(key);
      if (it != best.end() && it->second <= c) return;
      best[key] = c;
      nodes.push_back({w, t, c, top.index});
      open.push({t + to_goal[w], c, t, static_cast<int>(nodes.size()) - 1});
    };
    expand(node.v);
    for (VertexId w : graph.neighbors(node.v)) expand(w);
  }
  return std::nullopt;
}

SolveOutcome cbs_solve(const MapfInstance& instance, const CbsLimits& limits, CbsStats* stats) {
  const auto start = Clock::now();
  auto elapsed_ms = [&] {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  };
  SolveOutcome out;
  ShortestPathCosts costs;
  try {
    costs = shortest_path_costs(instance);
  } catch (const InfeasibleInstance&) {
    out.status = SolveStatus::InfeasibleWithinBound;
    out.total_ms = elapsed_ms();
    return out;
  }
  const int k = instance.agent_count();
  const int n = instance.graph().vertex_count();

  struct CtNode {
    std::vector<Constraint> constraints;
    std::vector<Path> paths;
    int cost = 0;
    int conflicts = 0;
  };
  auto path_cost_sum = [&](const std::vector<Path>& paths) {
    int sum = 0;
    for (int i = 0; i < k; ++i) sum += path_cost(paths[i], instance.agents()[i].goal);
    return sum;
  };
  auto horizon_for = [&](int agent, const std::vector<Constraint>& cs) {
    int last = -1;
    for (const auto& c : cs)
      if (c.agent == agent) last = std::max(last, c.time);
    return std::max(costs.mu0 + n, last + n + 1);
  };

  std::vector<CtNode> nodes;
  struct Entry {
    int cost;
    int conflicts;
    std::size_t index;
    bool operator>(const Entry& o) const {
      if (cost != o.cost) return cost > o.cost;
      if (conflicts != o.conflicts) return conflicts > o.conflicts;
      return index > o.index;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;

  CtNode root;
  root.paths.resize(k);
  for (int i = 0; i < k; ++i) {
    auto p = low_level_astar(instance, i, {}, horizon_for(i, {}), root.paths);
    if (!p) {
      out.status = SolveStatus::InfeasibleWithinBound;
      out.total_ms = elapsed_ms();
      return out;
    }
    root.paths[i] = std::move(*p);
  }
  root.cost = path_cost_sum(root.paths);
  root.conflicts = count_conflicts(root.paths);
  nodes.push_back(std::move(root));
  open.push({nodes[0].cost, nodes[0].conflicts, 0});
  if (stats) stats->generated = 1;

  const auto deadline = start + std::chrono::duration_cast<Clock::duration>(
                                    std::chrono::duration<double>(limits.timeout_s));
  while (!open.empty()) {
    if ((limits.timeout_s > 0 && Clock::now() > deadline) || nodes.size() > limits.max_nodes) {
      out.status = SolveStatus::Timeout;
      out.total_ms = elapsed_ms();
      return out;
    }
    const std::size_t index = open.top().index;
    open.pop();
    if (stats) ++stats->expanded;
    auto conflict = first_conflict(nodes[index].paths);
    if (!conflict) {
      out.status = SolveStatus::Optimal;
      out.solution = make_solution(nodes[index].paths, instance.agents());
      out.delta = out.solution->soc - costs.xi0_sum;
      out.mu = out.solution->makespan;
      out.total_ms = elapsed_ms();
      return out;
    }
    const Conflict c = *conflict;
    Constraint split[2] = {{c.a, c.vertex, c.time},
                           {c.b, c.vertex, c.kind == ConflictKind::Vertex ? c.time : c.time - 1}};
    for (const Constraint& added : split) {
      CtNode child;
      child.constraints = nodes[index].constraints;
      child.constraints.push_back(added);
      child.paths = nodes[index].paths;
      std::vector<Path> others = child.paths;
      others[added.agent].clear();
      auto p = low_level_astar(instance, added.agent, child.constraints,
                               horizon_for(added.agent, child.constraints), others);
      if (!p) continue;
      child.paths[added.agent] = std::move(*p);
      child.cost = path_cost_sum(child.paths);
      child.conflicts = count_conflicts(child.paths);
      if (stats) {
        ++stats->generated;
        stats->parent_child_costs.emplace_back(nodes[index].cost, child.cost);
      }
      nodes.push_back(std::move(child));
      open.push({nodes.back().cost, nodes.back().conflicts, nodes.size() - 1});
    }
  }
  out.status = SolveStatus::InfeasibleWithinBound;
  out.total_ms = elapsed_ms();
  return out;
}

}  // namespace mapf
