#include "mapf/idframe.hpp"

#include <algorithm>

#include "mapf/search.hpp"

namespace mapf {

bool Forbidden::cell(VertexId v, int t) const {
  if (cells.count({v, t})) return true;
  for (auto [pv, t0] : permanent)
    if (pv == v && t >= t0) return true;
  return false;
}

bool Forbidden::entry(VertexId v, int t) const {
  if (entries.count({v, t})) return true;
  for (auto [pv, t0] : permanent)
    if (pv == v && t >= t0 + 1) return true;
  return false;
}

Forbidden forbidden_from_paths(const std::vector<Path>& paths) {
  Forbidden f;
  for (const auto& p : paths) {
    if (p.empty()) continue;
    const int last = static_cast<int>(p.size()) - 1;
    for (int t = 0; t <= last; ++t) {
      f.cells.insert({p[t], t});
      // the other agent is at p[t] at t, so nobody may step into it at t + 1
      f.entries.insert({p[t], t + 1});
      // the other agent enters p[t + 1] at t + 1, so it must be empty at t
      if (t < last && p[t + 1] != p[t]) f.cells.insert({p[t + 1], t});
    }
    f.permanent.push_back({p[last], last});
  }
  return f;
}

std::optional<std::vector<Path>> same_cost_replan(const MapfInstance& group,
                                                  const Forbidden& forbidden, int delta,
                                                  SatBackend& backend, Deadline deadline) {
  const ShortestPathCosts costs = shortest_path_costs(group);
  const int mu = costs.mu0 + delta;
  const Graph& graph = group.graph();

  // after mu every agent sits at its goal forever
  for (const auto& a : group.agents()) {
    for (auto [v, t] : forbidden.cells)
      if (v == a.goal && t > mu) return std::nullopt;
    for (auto [v, t0] : forbidden.permanent)
      if (v == a.goal) return std::nullopt;
  }

  auto tegs = build_tegs(group, costs.xi0, mu, delta, TegKind::Mdd, Exec::Serial);
  Encoding enc = encode_soc(group, tegs, delta);
  for (int a = 0; a < group.agent_count(); ++a) {
    for (int t = 0; t <= mu; ++t) {
      for (VertexId v : tegs[a].layer(t)) {
        if (forbidden.cell(v, t)) enc.formula.add_unit(Lit::neg(enc.vars.x(a, t, v)));
        if (t == 0 || !forbidden.entry(v, t)) continue;
        for (VertexId u : graph.neighbors(v))
          if (int e = enc.vars.e(a, t - 1, u, v)) enc.formula.add_unit(Lit::neg(e));
      }
    }
  }
  SatResult r = backend.solve(enc.formula, {}, deadline);
  if (r.status != SatStatus::Sat) return std::nullopt;
  return decode_model(group, enc.vars, r).paths;
}

namespace {

struct Group {
  std::vector<int> agents;  // sorted
  std::vector<Path> paths;  // aligned with agents
  int soc = 0;
  int delta = 0;
  int label() const { return agents.front(); }
};

}  // namespace

SolveOutcome id_solve(const MapfInstance& instance, const GroupSolver& solver, IdMode mode,
                      SatBackend& backend, const IdOptions& options, IdStats* stats) {
  const auto start = Clock::now();
  const Deadline deadline =
      options.timeout_s > 0
          ? Deadline(start + std::chrono::duration_cast<Clock::duration>(
                                 std::chrono::duration<double>(options.timeout_s)))
          : std::nullopt;
  auto remaining = [&] {
    if (!deadline) return 0.0;
    return std::max(1e-3, std::chrono::duration<double>(*deadline - Clock::now()).count());
  };
  auto expired = [&] { return deadline && Clock::now() > *deadline; };

  SolveOutcome out;
  auto finish = [&](SolveStatus status) {
    out.status = status;
    out.total_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    return out;
  };
  ShortestPathCosts costs;
  try {
    costs = shortest_path_costs(instance);
  } catch (const InfeasibleInstance&) {
    return finish(SolveStatus::InfeasibleWithinBound);
  }

  const int k = instance.agent_count();
  std::vector<Group> groups;
  std::vector<int> group_of(k);
  auto record = [&] {
    if (stats) stats->group_counts.push_back(static_cast<int>(groups.size()));
  };
  // solves g from scratch; false with the failing status otherwise
  auto solve_group = [&](Group& g, SolveStatus& status) {
    SolveOutcome o = solver(instance.subset(g.agents), remaining());
    if (o.status != SolveStatus::Optimal || !o.solution) {
      status = o.status;
      return false;
    }
    g.paths = o.solution->paths;
    g.soc = o.solution->soc;
    g.delta = o.delta;
    return true;
  };

  for (int i = 0; i < k; ++i) {
    Group g;
    g.agents = {i};
    SolveStatus status;
    if (expired()) return finish(SolveStatus::Timeout);
    if (!solve_group(g, status)) return finish(status);
    group_of[i] = static_cast<int>(groups.size());
    groups.push_back(std::move(g));
  }
  record();

  std::set<std::pair<int, int>> history;
  auto all_paths = [&] {
    std::vector<Path> paths(k);
    for (const auto& g : groups)
      for (std::size_t j = 0; j < g.agents.size(); ++j) paths[g.agents[j]] = g.paths[j];
    return paths;
  };

  while (true) {
    if (expired()) return finish(SolveStatus::Timeout);
    auto conflict = first_conflict(all_paths());
    if (!conflict) break;
    int ga = group_of[conflict->a];
    int gb = group_of[conflict->b];
    std::pair<int, int> key = std::minmax(groups[ga].label(), groups[gb].label());

    bool resolved = false;
    if (mode == IdMode::Full && !history.count(key)) {
      history.insert(key);
      int first = ga, second = gb;
      auto size_of = [&](int g) { return groups[g].agents.size(); };
      if (options.smaller_first &&
          (size_of(gb) < size_of(ga) ||
           (size_of(gb) == size_of(ga) && groups[gb].label() < groups[ga].label())))
        std::swap(first, second);
      for (auto [mine, other] : {std::pair{first, second}, std::pair{second, first}}) {
        Forbidden forbidden = forbidden_from_paths(groups[other].paths);
        auto paths = same_cost_replan(instance.subset(groups[mine].agents), forbidden,
                                      groups[mine].delta, backend, deadline);
        if (paths) {
          groups[mine].paths = std::move(*paths);
          if (stats) ++stats->replans_succeeded;
          resolved = true;
          break;
        }
        if (stats) ++stats->replans_failed;
      }
    }
    if (resolved) continue;

    Group merged;
    merged.agents = groups[ga].agents;
    merged.agents.insert(merged.agents.end(), groups[gb].agents.begin(), groups[gb].agents.end());
    std::sort(merged.agents.begin(), merged.agents.end());
    SolveStatus status;
    if (!solve_group(merged, status)) return finish(status);
    groups.erase(groups.begin() + std::max(ga, gb));
    groups.erase(groups.begin() + std::min(ga, gb));
    groups.push_back(std::move(merged));
    for (int g = 0; g < static_cast<int>(groups.size()); ++g)
      for (int a : groups[g].agents) group_of[a] = g;
    if (stats) ++stats->merges;
    record();
  }

  Solution solution = make_solution(all_paths(), instance.agents());
  out.solution = solution;
  out.delta = solution.soc - costs.xi0_sum;
  out.mu = solution.makespan;
  if (stats)
    for (const auto& g : groups) stats->final_groups.push_back(g.agents);
  return finish(SolveStatus::Optimal);
}

}  // namespace mapf
