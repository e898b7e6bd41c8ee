#include <charconv>
#include <sstream>

#include "mapf/instance.hpp"

namespace mapf {

namespace {

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::string current;
  for (char c : text) {
    if (c == '\n') {
      if (!current.empty() && current.back() == '\r') current.pop_back();
      lines.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) lines.push_back(std::move(current));
  return lines;
}

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

int to_int(const std::string& s, const char* what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError(std::string("expected integer for ") + what + ", got '" + s + "'");
  return value;
}

bool blank_or_comment(const std::string& line) {
  auto t = tokens(line);
  return t.empty() || t[0][0] == '#';
}

}  // namespace

Graph build_grid_graph(const GridLayout& layout) {
  Graph graph(static_cast<int>(layout.vertex_to_cell.size()));
  for (VertexId v = 0; v < graph.vertex_count(); ++v) {
    auto [r, c] = layout.vertex_to_cell[v];
    if (VertexId right = layout.vertex_at(r, c + 1); right >= 0) graph.add_edge(v, right);
    if (VertexId down = layout.vertex_at(r + 1, c); down >= 0) graph.add_edge(v, down);
  }
  return graph;
}

GridMap parse_map(std::string_view text) {
  auto lines = split_lines(text);
  std::size_t pos = 0;
  int width = -1, height = -1;
  bool saw_type = false;
  for (; pos < lines.size(); ++pos) {
    auto t = tokens(lines[pos]);
    if (t.empty()) continue;
    if (t[0] == "map") {
      ++pos;
      break;
    }
    if (t.size() != 2) throw ParseError("malformed map header line: " + lines[pos]);
    if (t[0] == "type") {
      saw_type = true;
    } else if (t[0] == "height") {
      height = to_int(t[1], "height");
    } else if (t[0] == "width") {
      width = to_int(t[1], "width");
    } else {
      throw ParseError("unknown map header key: " + t[0]);
    }
  }
  if (!saw_type || width <= 0 || height <= 0)
    throw ParseError("map header needs type, positive height and width");
  if (lines.size() < pos + static_cast<std::size_t>(height))
    throw ParseError("map has fewer rows than its height");

  GridLayout layout;
  layout.width = width;
  layout.height = height;
  layout.cell_to_vertex.assign(static_cast<std::size_t>(width) * height, -1);
  for (int r = 0; r < height; ++r) {
    const std::string& row = lines[pos + r];
    if (static_cast<int>(row.size()) != width)
      throw ParseError("map row " + std::to_string(r) + " has length " +
                       std::to_string(row.size()) + ", expected " + std::to_string(width));
    for (int c = 0; c < width; ++c) {
      switch (row[c]) {
        case '.':
        case 'G':
          layout.cell_to_vertex[static_cast<std::size_t>(r) * width + c] =
              static_cast<VertexId>(layout.vertex_to_cell.size());
          layout.vertex_to_cell.emplace_back(r, c);
          break;
        case '@':
        case 'O':
        case 'T':
          break;
        default:
          throw ParseError(std::string("unknown map cell character '") + row[c] + "'");
      }
    }
  }
  for (std::size_t i = pos + height; i < lines.size(); ++i)
    if (!tokens(lines[i]).empty()) throw ParseError("trailing content after map rows");

  Graph graph = build_grid_graph(layout);
  return {std::move(graph), std::move(layout)};
}

std::string write_map(const GridLayout& layout) {
  std::ostringstream out;
  out << "type octile\nheight " << layout.height << "\nwidth " << layout.width << "\nmap\n";
  for (int r = 0; r < layout.height; ++r) {
    for (int c = 0; c < layout.width; ++c) out << (layout.passable(r, c) ? '.' : '@');
    out << '\n';
  }
  return out.str();
}

MapfInstance parse_instance(std::string_view text, const GridMap* map) {
  auto lines = split_lines(text);
  std::vector<Agent> agents;
  int declared_agents = -1;
  int vertices = -1;
  std::vector<std::pair<int, int>> edges;
  bool grid_form = false;

  for (const auto& line : lines) {
    if (blank_or_comment(line)) continue;
    auto t = tokens(line);
    if (t[0] == "agents" && t.size() == 2) {
      declared_agents = to_int(t[1], "agents");
      grid_form = true;
    } else if (t[0] == "vertices" && t.size() == 2) {
      vertices = to_int(t[1], "vertices");
    } else if (t[0] == "edge" && t.size() == 3) {
      edges.emplace_back(to_int(t[1], "edge"), to_int(t[2], "edge"));
    } else if (t[0] == "agent" && t.size() == 3) {
      agents.push_back({to_int(t[1], "agent start"), to_int(t[2], "agent goal")});
    } else if (grid_form && t.size() == 4) {
      if (!map) throw ParseError("grid instance requires a map");
      int sr = to_int(t[0], "start_row"), sc = to_int(t[1], "start_col");
      int gr = to_int(t[2], "goal_row"), gc = to_int(t[3], "goal_col");
      VertexId s = map->layout.vertex_at(sr, sc), g = map->layout.vertex_at(gr, gc);
      if (s < 0 || g < 0) throw ParseError("agent placed on a blocked or off-map cell: " + line);
      agents.push_back({s, g});
    } else {
      throw ParseError("unrecognized instance line: " + line);
    }
  }

  if (grid_form) {
    if (vertices >= 0 || !edges.empty()) throw ParseError("mixed grid and graph instance forms");
    if (static_cast<int>(agents.size()) != declared_agents)
      throw ParseError("agent count does not match 'agents' header");
    return MapfInstance(map->graph, std::move(agents), map->layout);
  }
  if (vertices < 0) throw ParseError("graph instance needs a 'vertices N' line");
  Graph graph(vertices);
  for (auto [a, b] : edges) graph.add_edge(a, b);
  return MapfInstance(std::move(graph), std::move(agents));
}

std::string write_instance(const MapfInstance& instance) {
  std::ostringstream out;
  if (const auto& layout = instance.layout()) {
    out << "agents " << instance.agent_count() << '\n';
    for (const auto& a : instance.agents()) {
      auto [sr, sc] = layout->vertex_to_cell[a.start];
      auto [gr, gc] = layout->vertex_to_cell[a.goal];
      out << sr << ' ' << sc << ' ' << gr << ' ' << gc << '\n';
    }
    return out.str();
  }
  out << "vertices " << instance.graph().vertex_count() << '\n';
  for (auto [a, b] : instance.graph().edges()) out << "edge " << a << ' ' << b << '\n';
  for (const auto& a : instance.agents()) out << "agent " << a.start << ' ' << a.goal << '\n';
  return out.str();
}

std::string write_solution(const Solution& solution) {
  std::ostringstream out;
  out << "# soc " << solution.soc << " makespan " << solution.makespan << '\n';
  for (const auto& path : solution.paths) {
    for (std::size_t t = 0; t < path.size(); ++t) out << (t ? " " : "") << path[t];
    out << '\n';
  }
  return out.str();
}

Solution parse_solution(std::string_view text, const MapfInstance& instance) {
  std::vector<Path> paths;
  for (const auto& line : split_lines(text)) {
    if (blank_or_comment(line)) continue;
    Path p;
    for (const auto& tok : tokens(line)) p.push_back(to_int(tok, "path vertex"));
    paths.push_back(std::move(p));
  }
  if (static_cast<int>(paths.size()) != instance.agent_count())
    throw ParseError("solution has " + std::to_string(paths.size()) + " paths for " +
                     std::to_string(instance.agent_count()) + " agents");
  // Keep the raw paths: validation must see exactly what was written.
  Solution sol;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    int c = path_cost(paths[i], instance.agents()[i].goal);
    sol.soc += c;
    sol.makespan = std::max(sol.makespan, c);
  }
  sol.paths = std::move(paths);
  return sol;
}

}  // namespace mapf
