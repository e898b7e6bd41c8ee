#pragma once

// Independent reference checks used by the unit and acceptance tests.

#include <cstdint>
#include <random>
#include <vector>

#include "mapf/cnf.hpp"
#include "mapf/sat.hpp"

namespace mapf::testing {

/// Truth-table satisfiability for formulas with few variables.
inline bool brute_force_sat(const CnfFormula& f) {
  const int n = f.var_count();
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    bool all = true;
    for (const auto& c : f.clauses()) {
      bool sat = false;
      for (Lit l : c) sat = sat || (((m >> (l.var() - 1)) & 1) != 0) != l.negated();
      if (!sat) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

/// Uniform random 3-CNF with `vars` variables and `clauses` clauses over
/// distinct variables per clause.
inline CnfFormula random_3cnf(int vars, int clauses, std::mt19937_64& rng) {
  CnfFormula f;
  for (int i = 0; i < vars; ++i) f.new_var();
  std::uniform_int_distribution<int> pick(1, vars);
  std::bernoulli_distribution sign(0.5);
  for (int c = 0; c < clauses; ++c) {
    Clause cl;
    while (cl.size() < 3) {
      int v = pick(rng);
      bool dup = false;
      for (Lit l : cl) dup = dup || l.var() == v;
      if (!dup) cl.push_back(sign(rng) ? Lit::pos(v) : Lit::neg(v));
    }
    f.add_clause(cl);
  }
  return f;
}

/// For every assignment of n inputs, "at most bound" must be extendable to a
/// model exactly when at most `bound` inputs are true. Checked with the
/// backend under assumptions.
inline bool at_most_projection_exact(int n, int bound, SatBackend& backend) {
  CnfFormula f;
  std::vector<Lit> xs;
  for (int i = 0; i < n; ++i) xs.push_back(Lit::pos(f.new_var()));
  add_at_most(f, xs, bound);
  for (std::uint32_t m = 0; m < (1u << n); ++m) {
    std::vector<Lit> assume;
    int ones = 0;
    for (int i = 0; i < n; ++i) {
      bool on = (m >> i) & 1;
      ones += on;
      assume.push_back(on ? xs[i] : ~xs[i]);
    }
    SatResult r = backend.solve(f, assume);
    if ((r.status == SatStatus::Sat) != (ones <= bound)) return false;
    if (r.status == SatStatus::Sat && !satisfies(f, r.model)) return false;
  }
  return true;
}

}  // namespace mapf::testing
