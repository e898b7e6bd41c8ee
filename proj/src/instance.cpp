#include "mapf/instance.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace mapf {

Graph::Graph(int vertex_count) : adjacency_(vertex_count) {
  if (vertex_count < 0) throw Error("negative vertex count");
}

void Graph::add_edge(VertexId a, VertexId b) {
  if (!valid(a) || !valid(b)) throw Error("edge endpoint out of range");
  if (a == b) throw Error("self-loop edges are not allowed");
  if (a > b) std::swap(a, b);
  if (adjacent(a, b)) return;
  edges_.emplace_back(a, b);
  auto insert_sorted = [](std::vector<VertexId>& list, VertexId v) {
    list.insert(std::lower_bound(list.begin(), list.end(), v), v);
  };
  insert_sorted(adjacency_[a], b);
  insert_sorted(adjacency_[b], a);
}

bool Graph::adjacent(VertexId a, VertexId b) const {
  if (!valid(a) || !valid(b)) return false;
  const auto& list = adjacency_[a];
  return std::binary_search(list.begin(), list.end(), b);
}

int Graph::max_degree() const {
  std::size_t best = 0;
  for (const auto& list : adjacency_) best = std::max(best, list.size());
  return static_cast<int>(best);
}

std::vector<int> Graph::bfs(VertexId source) const {
  std::vector<int> dist(adjacency_.size(), -1);
  if (!valid(source)) return dist;
  std::deque<VertexId> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    VertexId u = queue.front();
    queue.pop_front();
    for (VertexId w : adjacency_[u]) {
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

bool GridLayout::passable(int row, int col) const { return vertex_at(row, col) >= 0; }

VertexId GridLayout::vertex_at(int row, int col) const {
  if (row < 0 || col < 0 || row >= height || col >= width) return -1;
  return cell_to_vertex[static_cast<std::size_t>(row) * width + col];
}

namespace {

void check_agents(const Graph& graph, const std::vector<Agent>& agents) {
  std::set<VertexId> starts, goals;
  for (const auto& a : agents) {
    if (!graph.valid(a.start) || !graph.valid(a.goal))
      throw Error("agent start/goal is not a vertex of the graph");
    if (!starts.insert(a.start).second) throw Error("two agents share a start vertex");
    if (!goals.insert(a.goal).second) throw Error("two agents share a goal vertex");
  }
}

}  // namespace

MapfInstance::MapfInstance(Graph graph, std::vector<Agent> agents,
                           std::optional<GridLayout> layout)
    : graph_(std::move(graph)), agents_(std::move(agents)), layout_(std::move(layout)) {
  check_agents(graph_, agents_);
}

MapfInstance MapfInstance::unchecked(Graph graph, std::vector<Agent> agents) {
  MapfInstance inst;
  inst.graph_ = std::move(graph);
  inst.agents_ = std::move(agents);
  return inst;
}

MapfInstance MapfInstance::subset(const std::vector<int>& agent_ids) const {
  MapfInstance sub;
  sub.graph_ = graph_;
  sub.layout_ = layout_;
  for (int id : agent_ids) sub.agents_.push_back(agents_.at(id));
  return sub;
}

int path_cost(const Path& path, VertexId goal) {
  int last = static_cast<int>(path.size()) - 1;
  while (last > 0 && path[last] == goal && path[last - 1] == goal) --last;
  if (last >= 0 && path[last] != goal) return static_cast<int>(path.size());
  return std::max(last, 0);
}

Solution make_solution(std::vector<Path> paths, const std::vector<Agent>& agents) {
  Solution sol;
  std::size_t length = 0;
  for (const auto& p : paths) length = std::max(length, p.size());
  for (auto& p : paths) {
    if (p.empty()) continue;
    p.resize(length, p.back());
  }
  int makespan = 0;
  int soc = 0;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    int cost = path_cost(paths[i], agents.at(i).goal);
    soc += cost;
    makespan = std::max(makespan, cost);
  }
  // Only trim when every path really ends at its goal; otherwise the
  // validator must see the raw endpoints.
  bool all_at_goal = true;
  for (std::size_t i = 0; i < paths.size(); ++i)
    if (paths[i].empty() || paths[i].back() != agents[i].goal) all_at_goal = false;
  if (all_at_goal)
    for (auto& p : paths) p.resize(static_cast<std::size_t>(makespan) + 1);
  sol.paths = std::move(paths);
  sol.soc = soc;
  sol.makespan = all_at_goal ? makespan : static_cast<int>(length) - 1;
  return sol;
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::VertexConflict: return "vertex-conflict";
    case ViolationKind::TargetNotEmpty: return "target-not-empty";
    case ViolationKind::InvalidMove: return "invalid-move";
    case ViolationKind::EndpointMismatch: return "endpoint-mismatch";
  }
  return "unknown";
}

std::string ValidationReport::describe() const {
  std::ostringstream out;
  for (const auto& v : violations) {
    out << to_string(v.kind) << " t=" << v.time << " agents=";
    for (std::size_t i = 0; i < v.agents.size(); ++i) out << (i ? "," : "") << v.agents[i];
    out << '\n';
  }
  return out.str();
}

ValidationReport validate_solution(const MapfInstance& instance, const Solution& solution) {
  ValidationReport report;
  const auto& agents = instance.agents();
  const auto& graph = instance.graph();
  const auto& paths = solution.paths;
  auto add = [&](ViolationKind kind, std::vector<int> who, int t) {
    report.violations.push_back({kind, std::move(who), t});
  };

  if (paths.size() != agents.size()) {
    add(ViolationKind::EndpointMismatch, {}, 0);
    return report;
  }
  std::size_t length = paths.empty() ? 0 : paths.front().size();
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const auto& p = paths[i];
    int id = static_cast<int>(i);
    if (p.empty() || p.size() != length) {
      add(ViolationKind::EndpointMismatch, {id}, 0);
      return report;
    }
    if (p.front() != agents[i].start) add(ViolationKind::EndpointMismatch, {id}, 0);
    if (p.back() != agents[i].goal)
      add(ViolationKind::EndpointMismatch, {id}, static_cast<int>(length) - 1);
    for (std::size_t t = 0; t < p.size(); ++t) {
      if (!graph.valid(p[t])) {
        add(ViolationKind::InvalidMove, {id}, static_cast<int>(t));
        return report;
      }
    }
  }

  const int horizon = static_cast<int>(length);
  std::vector<int> occupant(graph.vertex_count(), -1);
  for (int t = 0; t < horizon; ++t) {
    std::fill(occupant.begin(), occupant.end(), -1);
    for (int i = 0; i < static_cast<int>(paths.size()); ++i) {
      VertexId v = paths[i][t];
      if (occupant[v] >= 0)
        add(ViolationKind::VertexConflict, {occupant[v], i}, t);
      else
        occupant[v] = i;
    }
    if (t + 1 >= horizon) break;
    for (int i = 0; i < static_cast<int>(paths.size()); ++i) {
      VertexId from = paths[i][t];
      VertexId to = paths[i][t + 1];
      if (from == to) continue;
      if (!graph.adjacent(from, to)) {
        add(ViolationKind::InvalidMove, {i}, t);
        continue;
      }
      // target must be empty at the source time step
      for (int h = 0; h < static_cast<int>(paths.size()); ++h) {
        if (h != i && paths[h][t] == to) add(ViolationKind::TargetNotEmpty, {i, h}, t);
      }
    }
  }
  return report;
}

ShortestPathCosts shortest_path_costs(const MapfInstance& instance) {
  ShortestPathCosts out;
  for (const auto& a : instance.agents()) {
    int d = instance.graph().bfs(a.start)[a.goal];
    if (d < 0) throw InfeasibleInstance("goal unreachable from start");
    out.xi0.push_back(d);
    out.xi0_sum += d;
    out.mu0 = std::max(out.mu0, d);
  }
  return out;
}

}  // namespace mapf
