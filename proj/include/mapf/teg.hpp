#pragma once

#include <string>
#include <vector>

#include "mapf/instance.hpp"

namespace mapf {

enum class EdgeKind : unsigned char { Standard, Extra };

/// Directed edge between layer `time` and layer `time + 1`. A wait has from == to.
struct TegEdge {
  int time = 0;
  VertexId from = 0;
  VertexId to = 0;
  EdgeKind kind = EdgeKind::Standard;

  bool is_wait() const { return from == to; }
  friend bool operator==(const TegEdge&, const TegEdge&) = default;
};

/// Time expansion graph of one agent: layers 0..depth of admitted vertices and
/// the edges between consecutive layers. Edges whose destination time exceeds
/// the agent's shortest-path cost and that are not waits are extra edges; all
/// others are standard.
class Teg {
 public:
  Teg() = default;
  Teg(int depth, int vertex_count);

  int depth() const { return depth_; }
  int vertex_count() const { return vertex_count_; }

  bool admits(int t, VertexId v) const {
    return admitted_[static_cast<std::size_t>(t) * vertex_count_ + v] != 0;
  }
  /// Sorted admitted vertices of layer t.
  const std::vector<VertexId>& layer(int t) const { return layers_[t]; }
  /// Edges leaving layer t, ordered by (from, to).
  const std::vector<TegEdge>& transition(int t) const { return transitions_[t]; }

  bool has_extra_edge(int t) const { return extra_per_step_[t] > 0; }
  std::size_t vertex_total() const;
  std::size_t edge_total() const;
  std::vector<TegEdge> edges(EdgeKind kind) const;

  /// `t from to std|extra`, one edge per line.
  std::string dump() const;

  friend bool operator==(const Teg&, const Teg&) = default;

 private:
  friend Teg build_layered(const Graph&, int, int, VertexId, VertexId, int, bool);

  int depth_ = 0;
  int vertex_count_ = 0;
  std::vector<unsigned char> admitted_;
  std::vector<std::vector<VertexId>> layers_;
  std::vector<std::vector<TegEdge>> transitions_;
  std::vector<int> extra_per_step_;
};

/// Full time expansion of depth `mu`: every layer holds every vertex.
/// Throws Error if mu < xi0.
Teg build_teg(const Graph& graph, int mu, int xi0, VertexId start, VertexId goal);

/// Time expansion restricted to vertices on some start-goal walk of cost at
/// most xi0 + delta: u is in layer t iff dist(start,u) <= t and either
/// t + dist(u,goal) <= xi0 + delta or u is the goal.
Teg build_mdd_teg(const Graph& graph, int mu, int xi0, int delta, VertexId start,
                  VertexId goal);

}  // namespace mapf
