#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mapf/satloop.hpp"

namespace mapf {

/// Agent `agent` must not be at `vertex` at time `time`.
struct Constraint {
  int agent = 0;
  VertexId vertex = 0;
  int time = 0;
  friend bool operator==(const Constraint&, const Constraint&) = default;
};

enum class ConflictKind { Vertex, Following };

/// Vertex: a and b both at `vertex` at `time`. Following: a enters `vertex` at
/// `time` while b was there at `time - 1` (target-empty rule).
struct Conflict {
  ConflictKind kind = ConflictKind::Vertex;
  int a = 0;
  int b = 0;
  VertexId vertex = 0;
  int time = 0;
};

/// Position of an agent at time t, staying at its last vertex after the path ends.
inline VertexId position_at(const Path& path, int t) {
  return path[std::min<std::size_t>(static_cast<std::size_t>(t), path.size() - 1)];
}

/// Earliest conflict among the paths (vertex conflicts before following
/// conflicts at the same time step).
std::optional<Conflict> first_conflict(const std::vector<Path>& paths);

/// Shortest space-time path for one agent avoiding its constraints, with cost
/// counted up to the final goal arrival. Ties prefer fewer conflicts with
/// `others` (paths of the other agents, may be empty). Returns nullopt when no
/// path ends within `horizon` steps. Constraints after the horizon are ignored.
std::optional<Path> low_level_astar(const MapfInstance& instance, int agent,
                                    std::span<const Constraint> constraints, int horizon,
                                    const std::vector<Path>& others = {});

struct CbsLimits {
  double timeout_s = 30.0;
  std::size_t max_nodes = 2'000'000;
};

struct CbsStats {
  std::size_t expanded = 0;
  std::size_t generated = 0;
  /// costs of (parent, child) pairs, for the monotonicity property
  std::vector<std::pair<int, int>> parent_child_costs;
};

/// Conflict-based search, sum-of-costs optimal.
SolveOutcome cbs_solve(const MapfInstance& instance, const CbsLimits& limits = {},
                       CbsStats* stats = nullptr);

struct OracleResult {
  bool feasible = false;
  int soc = 0;
  Solution solution;
  std::size_t expanded = 0;
};

struct StateSpaceTooLarge : Error {
  using Error::Error;
};

/// Uniform-cost search over joint states (positions + per-agent "finally at
/// goal" flags) under the target-empty movement rule. With `makespan_cap`,
/// only solutions whose last arrival is at most the cap are considered.
/// Throws StateSpaceTooLarge when |V|^k * 2^k exceeds `state_bound`.
OracleResult oracle_solve(const MapfInstance& instance, int soc_cap,
                          std::optional<int> makespan_cap = std::nullopt,
                          double state_bound = 5e6);

/// Minimal makespan by breadth-first search over joint positions, or nullopt
/// when no solution has makespan <= `makespan_cap`.
std::optional<int> oracle_makespan(const MapfInstance& instance, int makespan_cap,
                                   double state_bound = 5e6);

}  // namespace mapf
