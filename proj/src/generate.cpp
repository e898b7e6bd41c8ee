#include <cmath>
#include <random>

#include "mapf/instance.hpp"

namespace mapf {

MapfInstance generate_grid_instance(const GridInstanceParams& params) {
  if (params.width <= 0 || params.height <= 0) throw Error("grid dimensions must be positive");
  if (params.agents < 0) throw Error("agent count must be nonnegative");
  if (params.walk_steps < 0) throw Error("walk_steps must be nonnegative");
  if (params.obstacle_rate < 0.0 || params.obstacle_rate > 1.0)
    throw Error("obstacle rate must lie in [0,1]");

  std::mt19937_64 rng(params.seed);
  auto uniform = [&rng](int n) {
    return std::uniform_int_distribution<int>(0, n - 1)(rng);
  };

  const int cells = params.width * params.height;
  const int obstacles = static_cast<int>(std::lround(params.obstacle_rate * cells));
  if (cells - obstacles < params.agents)
    throw Error("not enough free cells for " + std::to_string(params.agents) + " agents");

  // partial Fisher-Yates: the first `obstacles` entries become blocked
  std::vector<int> order(cells);
  for (int i = 0; i < cells; ++i) order[i] = i;
  for (int i = 0; i < obstacles; ++i) std::swap(order[i], order[i + uniform(cells - i)]);
  std::vector<bool> blocked(cells, false);
  for (int i = 0; i < obstacles; ++i) blocked[order[i]] = true;

  GridLayout layout;
  layout.width = params.width;
  layout.height = params.height;
  layout.cell_to_vertex.assign(cells, -1);
  for (int cell = 0; cell < cells; ++cell) {
    if (blocked[cell]) continue;
    layout.cell_to_vertex[cell] = static_cast<VertexId>(layout.vertex_to_cell.size());
    layout.vertex_to_cell.emplace_back(cell / params.width, cell % params.width);
  }
  Graph graph = build_grid_graph(layout);

  const int free_cells = graph.vertex_count();
  std::vector<VertexId> pool(free_cells);
  for (int i = 0; i < free_cells; ++i) pool[i] = i;
  std::vector<VertexId> position(params.agents);
  std::vector<int> occupant(free_cells, -1);
  for (int i = 0; i < params.agents; ++i) {
    std::swap(pool[i], pool[i + uniform(free_cells - i)]);
    position[i] = pool[i];
    occupant[pool[i]] = i;
  }
  const std::vector<VertexId> starts = position;

  std::vector<VertexId> options;
  for (int step = 0; step < params.walk_steps && params.agents > 0; ++step) {
    int agent = uniform(params.agents);
    VertexId at = position[agent];
    options.assign(1, at);  // wait
    for (VertexId w : graph.neighbors(at))
      if (occupant[w] < 0) options.push_back(w);
    VertexId to = options[uniform(static_cast<int>(options.size()))];
    if (to == at) continue;
    occupant[at] = -1;
    occupant[to] = agent;
    position[agent] = to;
  }

  std::vector<Agent> agents(params.agents);
  for (int i = 0; i < params.agents; ++i) agents[i] = {starts[i], position[i]};
  return MapfInstance(std::move(graph), std::move(agents), std::move(layout));
}

}  // namespace mapf
