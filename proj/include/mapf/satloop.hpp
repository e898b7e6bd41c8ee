#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "mapf/encoder.hpp"
#include "mapf/kernels.hpp"
#include "mapf/sat.hpp"

namespace mapf {

enum class EncodingKind { Basic, Mdd };
enum class SolveStatus { Optimal, InfeasibleWithinBound, Timeout };

std::string_view to_string(SolveStatus status);
std::string_view to_string(EncodingKind kind);

/// One decision query. `bound` is delta in sum-of-costs mode and mu in
/// makespan mode.
struct Iteration {
  int bound = 0;
  int var_count = 0;
  std::size_t clause_count = 0;
  double solver_ms = 0.0;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::Timeout;
  std::optional<Solution> solution;
  std::vector<Iteration> iterations;
  double total_ms = 0.0;
  int delta = -1;  // soc - xi0_sum when optimal
  int mu = -1;     // TEG depth of the satisfiable query, when any
};

using FormulaHook = std::function<void(const CnfFormula&, const VarMap&, int bound)>;

struct Limits {
  double timeout_s = 30.0;
  int delta_cap = 64;  // also caps mu - mu0 in makespan mode
  Exec exec = Exec::Parallel;
  FormulaHook on_formula;  // called for every formula before it is solved

  Deadline deadline_from(Clock::time_point start) const;
};

/// Decision formula F(mu0 + delta, delta) for the instance.
Encoding soc_formula(const MapfInstance& instance, const ShortestPathCosts& costs,
                     EncodingKind kind, int delta, Exec exec = Exec::Parallel);

/// Delta = 0, 1, 2, ... at depth mu0 + delta until satisfiable; the first
/// satisfiable delta gives the optimal sum of costs xi0_sum + delta.
SolveOutcome solve_soc_optimal(const MapfInstance& instance, EncodingKind kind,
                               SatBackend& backend, const Limits& limits = {});

/// mu = mu0, mu0 + 1, ... until satisfiable.
SolveOutcome solve_makespan_optimal(const MapfInstance& instance, EncodingKind kind,
                                    SatBackend& backend, const Limits& limits = {});

}  // namespace mapf
