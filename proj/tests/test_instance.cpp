#include <doctest.h>

#include <set>

#include "helpers.hpp"
#include "mapf/instance.hpp"

using namespace mapf;
using namespace mapf::testing;

namespace {

std::string map_text(int h, int w, const std::vector<std::string>& rows) {
  std::string s = "type octile\nheight " + std::to_string(h) + "\nwidth " + std::to_string(w) +
                  "\nmap\n";
  for (const auto& r : rows) s += r + "\n";
  return s;
}

}  // namespace

TEST_CASE("parse_map builds 4-connected graphs") {
  auto full = parse_map(map_text(2, 2, {"..", ".."}));
  CHECK(full.graph.vertex_count() == 4);
  CHECK(full.graph.edge_count() == 4);

  auto line = parse_map(map_text(1, 3, {"..."}));
  CHECK(line.graph.vertex_count() == 3);
  CHECK(line.graph.edge_count() == 2);

  auto corner = parse_map(map_text(2, 2, {".@", ".."}));
  CHECK(corner.graph.vertex_count() == 3);
  CHECK(corner.graph.edge_count() == 2);

  auto mixed = parse_map(map_text(1, 5, {".GTO@"}));
  CHECK(mixed.graph.vertex_count() == 2);
}

TEST_CASE("parse_map rejects malformed input") {
  CHECK_THROWS_AS(parse_map(map_text(1, 3, {".x."})), ParseError);
  CHECK_THROWS_AS(parse_map(map_text(2, 3, {"..."})), ParseError);
  CHECK_THROWS_AS(parse_map("height 1\nwidth 1\n"), ParseError);
}

TEST_CASE("map and instance text round-trip") {
  GridInstanceParams p;
  p.width = 6;
  p.height = 5;
  p.agents = 3;
  p.seed = 11;
  auto inst = generate_grid_instance(p);
  auto map = parse_map(write_map(*inst.layout()));
  auto again = parse_instance(write_instance(inst), &map);
  CHECK(write_instance(again) == write_instance(inst));
  CHECK(again.graph().edges() == inst.graph().edges());

  auto cyc = cycle_crossing();
  auto cyc2 = parse_instance(write_instance(cyc));
  CHECK(cyc2.graph().edges() == cyc.graph().edges());
  CHECK(cyc2.agents().size() == 2);
}

TEST_CASE("instances reject shared starts or goals") {
  CHECK_THROWS_AS(MapfInstance(path_graph(3), {{0, 2}, {0, 1}}), Error);
  CHECK_THROWS_AS(MapfInstance(path_graph(3), {{0, 2}, {1, 2}}), Error);
  CHECK_THROWS_AS(MapfInstance(path_graph(3), {{0, 5}}), Error);
  CHECK_NOTHROW(MapfInstance::unchecked(path_graph(3), {{0, 2}, {0, 1}}));
}

TEST_CASE("generate_grid_instance") {
  GridInstanceParams p;
  p.width = 8;
  p.height = 8;
  p.obstacle_rate = 0.10;
  p.agents = 4;
  p.seed = 1;
  p.walk_steps = 200;
  auto inst = generate_grid_instance(p);
  CHECK(inst.graph().vertex_count() == 64 - 6);
  std::set<VertexId> starts, goals;
  for (auto a : inst.agents()) {
    starts.insert(a.start);
    goals.insert(a.goal);
  }
  CHECK(starts.size() == 4);
  CHECK(goals.size() == 4);
  CHECK(write_instance(generate_grid_instance(p)) == write_instance(inst));
  CHECK(write_map(*generate_grid_instance(p).layout()) == write_map(*inst.layout()));

  GridInstanceParams line{3, 1, 0.0, 1, 99, 0};
  auto one = generate_grid_instance(line);
  CHECK(one.agent_count() == 1);
  CHECK(one.agents()[0].start == one.agents()[0].goal);

  p.seed = 2;
  CHECK(write_instance(generate_grid_instance(p)) != write_instance(inst));
}

TEST_CASE("path_cost counts steps before the final arrival") {
  CHECK(path_cost({0, 1, 2}, 2) == 2);
  CHECK(path_cost({0, 1, 2, 2, 2}, 2) == 2);
  CHECK(path_cost({2, 2, 2}, 2) == 0);
  CHECK(path_cost({2, 1, 2}, 2) == 2);
  CHECK(path_cost({0, 0, 1, 2}, 2) == 3);
}

TEST_CASE("make_solution pads and trims") {
  auto inst = cycle_crossing();
  auto s = make_solution({{0, 1, 2, 2, 2}, {2, 3, 0}}, inst.agents());
  CHECK(s.soc == 4);
  CHECK(s.makespan == 2);
  CHECK(s.paths[0].size() == 3);
  CHECK(s.paths[1] == Path{2, 3, 0});
}

TEST_CASE("validate_solution") {
  MapfInstance waiter(path_graph(2), {{0, 0}});
  CHECK(validate_solution(waiter, make_solution({{0, 0, 0}}, waiter.agents())).ok());

  auto swap = edge_swap();
  Solution bad{{{0, 1}, {1, 0}}, 2, 1};
  auto report = validate_solution(swap, bad);
  CHECK_FALSE(report.ok());
  int target = 0;
  std::set<int> who;
  for (const auto& v : report.violations)
    if (v.kind == ViolationKind::TargetNotEmpty) {
      ++target;
      for (int a : v.agents) who.insert(a);
    }
  CHECK(target >= 1);
  CHECK(who == std::set<int>{0, 1});

  // 2x2 rotation through distinct sides
  auto cyc = cycle_crossing();
  auto rot = make_solution({{0, 1, 2}, {2, 3, 0}}, cyc.agents());
  CHECK(validate_solution(cyc, rot).ok());
  CHECK(rot.soc == 4);
  CHECK(rot.makespan == 2);

  // following into a vacated vertex is forbidden
  MapfInstance chain(path_graph(3), {{0, 1}, {1, 2}});
  Solution follow{{{0, 1}, {1, 2}}, 2, 1};
  CHECK_FALSE(validate_solution(chain, follow).ok());

  Solution jump{{{0, 2}}, 1, 1};
  CHECK_FALSE(validate_solution(fig5_instance(), jump).ok());
  Solution short_of_goal{{{0, 1}}, 1, 1};
  CHECK_FALSE(validate_solution(fig5_instance(), short_of_goal).ok());
  Solution wrong_start{{{1, 2}}, 1, 1};
  CHECK_FALSE(validate_solution(fig5_instance(), wrong_start).ok());
}

TEST_CASE("shortest_path_costs") {
  auto c = shortest_path_costs(fig5_instance());
  CHECK(c.xi0 == std::vector<int>{2});
  CHECK(shortest_path_costs(MapfInstance(path_graph(2), {{1, 1}})).xi0_sum == 0);
  auto cyc = shortest_path_costs(cycle_crossing());
  CHECK(cyc.xi0_sum == 4);
  CHECK(cyc.mu0 == 2);
  Graph split(4);
  split.add_edge(0, 1);
  split.add_edge(2, 3);
  CHECK_THROWS_AS(shortest_path_costs(MapfInstance(split, {{0, 3}})), InfeasibleInstance);
}

TEST_CASE("solution text round-trip keeps raw paths") {
  auto cyc = cycle_crossing();
  auto s = make_solution({{0, 1, 2}, {2, 3, 0}}, cyc.agents());
  auto back = parse_solution(write_solution(s), cyc);
  CHECK(back.paths == s.paths);
  CHECK(back.soc == 4);
  CHECK_THROWS_AS(parse_solution("0 1 2\n", cyc), ParseError);
}
