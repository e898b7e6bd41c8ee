#pragma once

#include <vector>

#include "mapf/teg.hpp"

namespace mapf {

/// Serial is the reference path; Parallel splits the per-agent work across
/// OpenMP threads and must produce identical results.
enum class Exec { Serial, Parallel };

enum class TegKind { Full, Mdd };

/// One TEG per agent at common depth `mu`. `xi0[i]` is agent i's cost
/// threshold for extra edges; MDD layers use the budget xi0[i] + delta.
std::vector<Teg> build_tegs(const MapfInstance& instance, const std::vector<int>& xi0, int mu,
                            int delta, TegKind kind, Exec exec = Exec::Parallel);

/// BFS distance table from each source.
std::vector<std::vector<int>> distance_tables(const Graph& graph,
                                              const std::vector<VertexId>& sources,
                                              Exec exec = Exec::Parallel);

/// Number of OpenMP threads available (1 without OpenMP).
int max_threads();

}  // namespace mapf
