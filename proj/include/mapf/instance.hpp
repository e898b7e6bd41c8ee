#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mapf {

using VertexId = int;
using Path = std::vector<VertexId>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error {
  using Error::Error;
};

/// Undirected graph with dense vertex ids. Self-loops are never stored; waits
/// are a property of the time expansion, not of the graph.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int vertex_count);

  /// Adds {a,b}. Duplicates are ignored. Throws on self-loops or bad ids.
  void add_edge(VertexId a, VertexId b);

  int vertex_count() const { return static_cast<int>(adjacency_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::pair<VertexId, VertexId>>& edges() const { return edges_; }
  const std::vector<VertexId>& neighbors(VertexId v) const { return adjacency_[v]; }
  bool adjacent(VertexId a, VertexId b) const;
  bool valid(VertexId v) const { return v >= 0 && v < vertex_count(); }
  int max_degree() const;

  /// BFS distance from `source` to every vertex; -1 where unreachable.
  std::vector<int> bfs(VertexId source) const;

 private:
  std::vector<std::pair<VertexId, VertexId>> edges_;  // a < b, insertion order
  std::vector<std::vector<VertexId>> adjacency_;      // sorted
};

/// Cell layout of a 4-connected grid graph. Vertex ids are assigned to
/// passable cells in row-major order.
struct GridLayout {
  int width = 0;
  int height = 0;
  std::vector<VertexId> cell_to_vertex;  // -1 for blocked cells
  std::vector<std::pair<int, int>> vertex_to_cell;  // (row, col)

  bool passable(int row, int col) const;
  VertexId vertex_at(int row, int col) const;
};

/// 4-connected graph over the passable cells of `layout`.
Graph build_grid_graph(const GridLayout& layout);

struct GridMap {
  Graph graph;
  GridLayout layout;
};

struct Agent {
  VertexId start = 0;
  VertexId goal = 0;
};

class MapfInstance {
 public:
  MapfInstance() = default;
  /// Throws Error if the agent placements are invalid.
  MapfInstance(Graph graph, std::vector<Agent> agents,
               std::optional<GridLayout> layout = std::nullopt);

  /// Builds without checking distinctness of starts/goals. Used by tests that
  /// feed deliberately broken instances to the encoder.
  static MapfInstance unchecked(Graph graph, std::vector<Agent> agents);

  const Graph& graph() const { return graph_; }
  const std::vector<Agent>& agents() const { return agents_; }
  int agent_count() const { return static_cast<int>(agents_.size()); }
  const std::optional<GridLayout>& layout() const { return layout_; }

  /// Sub-instance with the listed agents (in the given order) on the same graph.
  MapfInstance subset(const std::vector<int>& agent_ids) const;

 private:
  Graph graph_;
  std::vector<Agent> agents_;
  std::optional<GridLayout> layout_;
};

/// Individual cost: steps strictly before the final arrival at the goal.
/// Trailing waits at the goal are free.
int path_cost(const Path& path, VertexId goal);

struct Solution {
  std::vector<Path> paths;
  int soc = 0;
  int makespan = 0;
};

/// Pads shorter paths with waits at their last vertex, trims steps after the
/// last final arrival, and computes soc/makespan against the goals.
Solution make_solution(std::vector<Path> paths, const std::vector<Agent>& agents);

enum class ViolationKind { VertexConflict, TargetNotEmpty, InvalidMove, EndpointMismatch };

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::vector<int> agents;
  int time = 0;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string describe() const;
};

ValidationReport validate_solution(const MapfInstance& instance, const Solution& solution);

struct ShortestPathCosts {
  std::vector<int> xi0;
  int xi0_sum = 0;
  int mu0 = 0;
};

struct InfeasibleInstance : Error {
  using Error::Error;
};

/// Throws InfeasibleInstance if some goal is unreachable from its start.
ShortestPathCosts shortest_path_costs(const MapfInstance& instance);

// Formats.

GridMap parse_map(std::string_view text);
std::string write_map(const GridLayout& layout);

/// Native instance text. Grid instances use `agents K` followed by
/// `start_row start_col goal_row goal_col` lines and require the map.
/// Graph instances use `vertices N`, `edge a b` and `agent s g` lines.
MapfInstance parse_instance(std::string_view text, const GridMap* map = nullptr);
std::string write_instance(const MapfInstance& instance);

/// One line per agent: space-separated vertex ids. `#` starts a comment line.
std::string write_solution(const Solution& solution);
Solution parse_solution(std::string_view text, const MapfInstance& instance);

struct GridInstanceParams {
  int width = 8;
  int height = 8;
  double obstacle_rate = 0.1;
  int agents = 4;
  std::uint64_t seed = 1;
  int walk_steps = 200;
};

/// Random obstacles, uniform distinct starts, goals from a collision-free
/// random walk of the start arrangement (one agent moves per step).
MapfInstance generate_grid_instance(const GridInstanceParams& params);

}  // namespace mapf
