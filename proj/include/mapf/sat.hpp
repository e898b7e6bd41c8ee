#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mapf/cnf.hpp"

namespace mapf {

using Clock = std::chrono::steady_clock;
using Deadline = std::optional<Clock::time_point>;

enum class SatStatus { Sat, Unsat, Unknown };

struct SatResult {
  SatStatus status = SatStatus::Unknown;
  std::vector<bool> model;  // indexed by variable id; entry 0 unused

  bool value(int var) const { return model.at(var); }
  bool value(Lit lit) const { return value(lit.var()) != lit.negated(); }
};

struct SatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Returns a total model satisfying every clause (and every assumption), an
/// UNSAT verdict, or Unknown when the deadline passed first.
class SatBackend {
 public:
  virtual ~SatBackend() = default;
  virtual SatResult solve(const CnfFormula& formula, std::span<const Lit> assumptions = {},
                          Deadline deadline = std::nullopt) = 0;
  virtual std::string name() const = 0;
};

/// In-process CDCL solver: two watched literals, first-UIP learning, VSIDS,
/// phase saving, Luby restarts, LBD-based clause database reduction.
/// Deterministic for identical input.
class EmbeddedSolver final : public SatBackend {
 public:
  SatResult solve(const CnfFormula& formula, std::span<const Lit> assumptions = {},
                  Deadline deadline = std::nullopt) override;
  std::string name() const override { return "embedded"; }
};

/// Runs `command <dimacs-file>` and reads SAT-competition style output
/// (`s SATISFIABLE` / `s UNSATISFIABLE` plus `v` lines). Assumptions are
/// appended as unit clauses.
class ExternalSolver final : public SatBackend {
 public:
  explicit ExternalSolver(std::string command);
  SatResult solve(const CnfFormula& formula, std::span<const Lit> assumptions = {},
                  Deadline deadline = std::nullopt) override;
  std::string name() const override { return "external"; }
  const std::string& command() const { return command_; }

 private:
  std::string command_;
};

/// Parses solver stdout. Throws SatError on missing/unknown status lines or an
/// incomplete model.
SatResult parse_solver_output(const std::string& output, int var_count);

/// Command from MAPF_SAT_SOLVER, if set and nonempty.
std::optional<std::string> external_solver_from_env();

inline SatResult sat_solve(SatBackend& backend, const CnfFormula& formula,
                           std::span<const Lit> assumptions = {}) {
  return backend.solve(formula, assumptions);
}

/// True when `model` satisfies every clause of `formula`.
bool satisfies(const CnfFormula& formula, const std::vector<bool>& model);

}  // namespace mapf
