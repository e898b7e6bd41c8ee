#pragma once

#include <string>
#include <vector>

#include "mapf/cnf.hpp"
#include "mapf/sat.hpp"
#include "mapf/teg.hpp"

namespace mapf {

/// Propositional variables of one encoding. Lookups return 0 when the
/// corresponding TEG element does not exist.
class VarMap {
 public:
  VarMap() = default;
  VarMap(int agents, int depth, int vertex_count);

  int agents() const { return agents_; }
  int depth() const { return depth_; }
  int vertex_count() const { return vertex_count_; }

  /// agent at vertex v at time t
  int x(int agent, int t, VertexId v) const;
  /// agent traverses TEG edge (from at t) -> (to at t+1)
  int e(int agent, int t, VertexId from, VertexId to) const;
  /// agent pays for an extra edge leaving time t
  int c(int agent, int t) const;

  std::vector<int> cost_vars() const;

  /// `x agent vertex time var`, then `e agent time from to var`, then
  /// `c agent time var`, one per line.
  std::string write_sidecar() const;

 private:
  friend class Encoder;
  struct EdgeVar {
    VertexId from;
    VertexId to;
    int var;
  };

  int agents_ = 0;
  int depth_ = 0;
  int vertex_count_ = 0;
  std::vector<std::vector<int>> x_;                  // [agent][t * |V| + v]
  std::vector<std::vector<std::vector<EdgeVar>>> e_;  // [agent][t], sorted by (from, to)
  std::vector<std::vector<int>> c_;                  // [agent][t]
};

struct Encoding {
  CnfFormula formula;
  VarMap vars;
};

struct EncodingBug : Error {
  using Error::Error;
};

/// Sum-of-costs decision formula for TEGs of common depth mu0 + delta:
/// movement and collision constraints plus "at most delta extra-edge cost
/// steps". Throws Error when TEG depths disagree.
Encoding encode_soc(const MapfInstance& instance, const std::vector<Teg>& tegs, int delta);

/// Makespan decision formula: same movement and collision constraints with no
/// cost variables. TEGs must have no extra edges.
Encoding encode_makespan(const MapfInstance& instance, const std::vector<Teg>& tegs);

/// Reads the single true position variable per (agent, t). Throws EncodingBug
/// when a layer has zero or several true position variables.
Solution decode_model(const MapfInstance& instance, const VarMap& vars, const SatResult& model);

}  // namespace mapf
