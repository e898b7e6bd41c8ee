#pragma once

#include <functional>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "mapf/satloop.hpp"

namespace mapf {

enum class IdMode { Simple, Full };

/// Any sum-of-costs optimal solver for a sub-instance. The second argument is
/// the remaining time budget in seconds.
using GroupSolver = std::function<SolveOutcome(const MapfInstance&, double)>;

/// What another group's fixed paths rule out for a replanned group.
struct Forbidden {
  std::set<std::pair<VertexId, int>> cells;    // (v, t): may not be at v at t
  std::set<std::pair<VertexId, int>> entries;  // (v, t): may not move into v at t
  std::vector<std::pair<VertexId, int>> permanent;  // (v, t0): v occupied for all t >= t0

  bool cell(VertexId v, int t) const;
  bool entry(VertexId v, int t) const;
};

/// Forbidden cells and entries induced by `paths` under the target-empty rule.
/// Each path is extended by waiting at its last vertex forever.
Forbidden forbidden_from_paths(const std::vector<Path>& paths);

/// Re-solves `group` (a sub-instance) at the same delta with the forbidden
/// positions and moves excluded. Returns paths of identical sum of costs, or
/// nullopt when none exist.
std::optional<std::vector<Path>> same_cost_replan(const MapfInstance& group,
                                                  const Forbidden& forbidden, int delta,
                                                  SatBackend& backend,
                                                  Deadline deadline = std::nullopt);

struct IdOptions {
  double timeout_s = 30.0;
  bool smaller_first = true;  // which group tries to replan first
};

struct IdStats {
  int merges = 0;
  int replans_succeeded = 0;
  int replans_failed = 0;
  std::vector<int> group_counts;  // after every change to the partition
  std::vector<std::vector<int>> final_groups;
};

/// Simple (merge on every conflict) or full independence detection around
/// `solver`. The outcome carries no iteration list; delta is soc - xi0_sum.
SolveOutcome id_solve(const MapfInstance& instance, const GroupSolver& solver, IdMode mode,
                      SatBackend& backend, const IdOptions& options = {},
                      IdStats* stats = nullptr);

}  // namespace mapf
