#include "mapf/satloop.hpp"

namespace mapf {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::InfeasibleWithinBound: return "infeasible-within-bound";
    case SolveStatus::Timeout: return "timeout";
  }
  return "unknown";
}

std::string_view to_string(EncodingKind kind) {
  return kind == EncodingKind::Basic ? "basic" : "mdd";
}

Deadline Limits::deadline_from(Clock::time_point start) const {
  if (timeout_s <= 0) return std::nullopt;
  return start + std::chrono::duration_cast<Clock::duration>(
                     std::chrono::duration<double>(timeout_s));
}

namespace {

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

TegKind teg_kind(EncodingKind kind) {
  return kind == EncodingKind::Basic ? TegKind::Full : TegKind::Mdd;
}

struct Query {
  SatResult result;
  Iteration iteration;
};

Query run_query(const Encoding& enc, int bound, SatBackend& backend, const Limits& limits,
                const Deadline& deadline) {
  if (limits.on_formula) limits.on_formula(enc.formula, enc.vars, bound);
  Query q;
  q.iteration.bound = bound;
  q.iteration.var_count = enc.formula.var_count();
  q.iteration.clause_count = enc.formula.clause_count();
  auto t0 = Clock::now();
  q.result = backend.solve(enc.formula, {}, deadline);
  q.iteration.solver_ms = ms_since(t0);
  return q;
}

}  // namespace

Encoding soc_formula(const MapfInstance& instance, const ShortestPathCosts& costs,
                     EncodingKind kind, int delta, Exec exec) {
  const int mu = costs.mu0 + delta;
  auto tegs = build_tegs(instance, costs.xi0, mu, delta, teg_kind(kind), exec);
  return encode_soc(instance, tegs, delta);
}

SolveOutcome solve_soc_optimal(const MapfInstance& instance, EncodingKind kind,
                               SatBackend& backend, const Limits& limits) {
  const auto start = Clock::now();
  const Deadline deadline = limits.deadline_from(start);
  SolveOutcome out;
  ShortestPathCosts costs;
  try {
    costs = shortest_path_costs(instance);
  } catch (const InfeasibleInstance&) {
    out.status = SolveStatus::InfeasibleWithinBound;
    out.total_ms = ms_since(start);
    return out;
  }

  out.status = SolveStatus::InfeasibleWithinBound;
  for (int delta = 0; delta <= limits.delta_cap; ++delta) {
    if (deadline && Clock::now() > *deadline) {
      out.status = SolveStatus::Timeout;
      break;
    }
    Encoding enc = soc_formula(instance, costs, kind, delta, limits.exec);
    Query q = run_query(enc, delta, backend, limits, deadline);
    out.iterations.push_back(q.iteration);
    if (q.result.status == SatStatus::Unknown) {
      out.status = SolveStatus::Timeout;
      break;
    }
    if (q.result.status == SatStatus::Sat) {
      out.status = SolveStatus::Optimal;
      out.solution = decode_model(instance, enc.vars, q.result);
      out.delta = delta;
      out.mu = costs.mu0 + delta;
      break;
    }
  }
  out.total_ms = ms_since(start);
  return out;
}

SolveOutcome solve_makespan_optimal(const MapfInstance& instance, EncodingKind kind,
                                    SatBackend& backend, const Limits& limits) {
  const auto start = Clock::now();
  const Deadline deadline = limits.deadline_from(start);
  SolveOutcome out;
  ShortestPathCosts costs;
  try {
    costs = shortest_path_costs(instance);
  } catch (const InfeasibleInstance&) {
    out.status = SolveStatus::InfeasibleWithinBound;
    out.total_ms = ms_since(start);
    return out;
  }

  out.status = SolveStatus::InfeasibleWithinBound;
  for (int mu = costs.mu0; mu <= costs.mu0 + limits.delta_cap; ++mu) {
    if (deadline && Clock::now() > *deadline) {
      out.status = SolveStatus::Timeout;
      break;
    }
    // every edge standard: thresholds at mu, MDD budget mu
    std::vector<int> thresholds(instance.agent_count(), mu);
    auto tegs = build_tegs(instance, thresholds, mu, 0, teg_kind(kind), limits.exec);
    Encoding enc = encode_makespan(instance, tegs);
    Query q = run_query(enc, mu, backend, limits, deadline);
    out.iterations.push_back(q.iteration);
    if (q.result.status == SatStatus::Unknown) {
      out.status = SolveStatus::Timeout;
      break;
    }
    if (q.result.status == SatStatus::Sat) {
      out.status = SolveStatus::Optimal;
      out.solution = decode_model(instance, enc.vars, q.result);
      out.delta = out.solution->soc - costs.xi0_sum;
      out.mu = mu;
      break;
    }
  }
  out.total_ms = ms_since(start);
  return out;
}

}  // namespace mapf
