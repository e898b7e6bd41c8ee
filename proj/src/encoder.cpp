#include "mapf/encoder.hpp"

#include <algorithm>
#include <sstream>

namespace mapf {

VarMap::VarMap(int agents, int depth, int vertex_count)
    : agents_(agents),
      depth_(depth),
      vertex_count_(vertex_count),
      x_(agents, std::vector<int>(static_cast<std::size_t>(depth + 1) * vertex_count, 0)),
      e_(agents, std::vector<std::vector<EdgeVar>>(depth)),
      c_(agents, std::vector<int>(depth, 0)) {}

int VarMap::x(int agent, int t, VertexId v) const {
  if (agent < 0 || agent >= agents_ || t < 0 || t > depth_ || v < 0 || v >= vertex_count_)
    return 0;
  return x_[agent][static_cast<std::size_t>(t) * vertex_count_ + v];
}

int VarMap::e(int agent, int t, VertexId from, VertexId to) const {
  if (agent < 0 || agent >= agents_ || t < 0 || t >= depth_) return 0;
  const auto& list = e_[agent][t];
  auto it = std::lower_bound(list.begin(), list.end(), std::pair(from, to),
                             [](const EdgeVar& ev, std::pair<VertexId, VertexId> key) {
                               return std::pair(ev.from, ev.to) < key;
                             });
  if (it == list.end() || it->from != from || it->to != to) return 0;
  return it->var;
}

int VarMap::c(int agent, int t) const {
  if (agent < 0 || agent >= agents_ || t < 0 || t >= depth_) return 0;
  return c_[agent][t];
}

std::vector<int> VarMap::cost_vars() const {
  std::vector<int> out;
  for (const auto& per_agent : c_)
    for (int v : per_agent)
      if (v) out.push_back(v);
  return out;
}

std::string VarMap::write_sidecar() const {
  std::ostringstream out;
  for (int a = 0; a < agents_; ++a)
    for (int t = 0; t <= depth_; ++t)
      for (VertexId v = 0; v < vertex_count_; ++v)
        if (int var = x(a, t, v)) out << "x " << a << ' ' << v << ' ' << t << ' ' << var << '\n';
  for (int a = 0; a < agents_; ++a)
    for (int t = 0; t < depth_; ++t)
      for (const auto& ev : e_[a][t])
        out << "e " << a << ' ' << t << ' ' << ev.from << ' ' << ev.to << ' ' << ev.var << '\n';
  for (int a = 0; a < agents_; ++a)
    for (int t = 0; t < depth_; ++t)
      if (c_[a][t]) out << "c " << a << ' ' << t << ' ' << c_[a][t] << '\n';
  return out.str();
}

class Encoder {
 public:
  Encoder(const MapfInstance& instance, const std::vector<Teg>& tegs, bool with_cost)
      : instance_(instance), tegs_(tegs), with_cost_(with_cost) {
    if (static_cast<int>(tegs.size()) != instance.agent_count())
      throw Error("one TEG per agent is required");
    depth_ = tegs.empty() ? 0 : tegs.front().depth();
    for (const auto& teg : tegs) {
      if (teg.depth() != depth_) throw Error("inconsistent TEG depths across agents");
      if (teg.vertex_count() != instance.graph().vertex_count())
        throw Error("TEG built for a different graph");
    }
  }

  Encoding run(int delta) {
    const int k = instance_.agent_count();
    const int n = instance_.graph().vertex_count();
    enc_.vars = VarMap(k, depth_, n);
    allocate();
    for (int a = 0; a < k; ++a) agent_clauses(a);
    collision_clauses();
    if (with_cost_) {
      std::vector<Lit> costs;
      for (int var : enc_.vars.cost_vars()) costs.push_back(Lit::pos(var));
      if (!costs.empty()) add_at_most(enc_.formula, costs, delta);
    }
    return std::move(enc_);
  }

 private:
  void allocate() {
    auto& f = enc_.formula;
    auto& vm = enc_.vars;
    const int n = vm.vertex_count_;
    for (int a = 0; a < vm.agents_; ++a) {
      const Teg& teg = tegs_[a];
      for (int t = 0; t <= depth_; ++t)
        for (VertexId v : teg.layer(t)) vm.x_[a][static_cast<std::size_t>(t) * n + v] = f.new_var();
      for (int t = 0; t < depth_; ++t)
        for (const auto& edge : teg.transition(t))
          vm.e_[a][t].push_back({edge.from, edge.to, f.new_var()});
      if (with_cost_)
        for (int t = 0; t < depth_; ++t)
          if (teg.has_extra_edge(t)) vm.c_[a][t] = f.new_var();
    }
  }

  Lit X(int a, int t, VertexId v) const { return Lit::pos(enc_.vars.x(a, t, v)); }

  void agent_clauses(int a) {
    auto& f = enc_.formula;
    const auto& vm = enc_.vars;
    const Teg& teg = tegs_[a];
    const Agent& agent = instance_.agents()[a];
    const int k = instance_.agent_count();

    // placement: start at layer 0, goal at layer depth
    if (!teg.admits(0, agent.start) || !teg.admits(depth_, agent.goal)) {
      f.add_clause(Clause{});
      return;
    }
    f.add_unit(X(a, 0, agent.start));
    f.add_unit(X(a, depth_, agent.goal));
    for (VertexId v : teg.layer(0))
      if (v != agent.start) f.add_unit(~X(a, 0, v));

    std::vector<std::vector<Lit>> incoming(instance_.graph().vertex_count());
    for (int t = 0; t < depth_; ++t) {
      const auto& edges = teg.transition(t);
      const auto& evars = vm.e_[a][t];
      for (auto& list : incoming) list.clear();
      // edges are grouped by source vertex
      std::size_t i = 0;
      while (i < edges.size()) {
        std::size_t j = i;
        while (j < edges.size() && edges[j].from == edges[i].from) ++j;
        const VertexId u = edges[i].from;
        // C1: a present agent leaves along exactly one edge
        Clause leave{~X(a, t, u)};
        for (std::size_t p = i; p < j; ++p) leave.push_back(Lit::pos(evars[p].var));
        f.add_clause(std::move(leave));
        for (std::size_t p = i; p < j; ++p)
          for (std::size_t q = p + 1; q < j; ++q)
            f.add_clause({Lit::neg(evars[p].var), Lit::neg(evars[q].var)});
        i = j;
      }
      for (std::size_t p = 0; p < edges.size(); ++p) {
        const TegEdge& edge = edges[p];
        const Lit ev = Lit::pos(evars[p].var);
        // C2: an edge is used only between its endpoints
        f.add_clause({~ev, X(a, t, edge.from)});
        f.add_clause({~ev, X(a, t + 1, edge.to)});
        incoming[edge.to].push_back(ev);
        // C3: the target of a move is empty at the source time step
        if (!edge.is_wait())
          for (int h = 0; h < k; ++h)
            if (h != a && tegs_[h].admits(t, edge.to)) f.add_clause({~ev, ~X(h, t, edge.to)});
        // C5: extra edges charge the cost step
        if (with_cost_ && edge.kind == EdgeKind::Extra)
          f.add_clause({~ev, Lit::pos(vm.c(a, t))});
      }
      // every occupied vertex of the next layer is entered by some edge
      for (VertexId v : teg.layer(t + 1)) {
        Clause support{~X(a, t + 1, v)};
        for (Lit l : incoming[v]) support.push_back(l);
        f.add_clause(std::move(support));
      }
    }

    // C6: paying at step t means every earlier cost step is paid too
    if (with_cost_) {
      for (int t = 0; t < depth_; ++t) {
        if (!vm.c(a, t)) continue;
        for (int s = 0; s < t; ++s)
          if (vm.c(a, s)) f.add_clause({Lit::neg(vm.c(a, t)), Lit::pos(vm.c(a, s))});
      }
    }
  }

  // C4: pairwise vertex exclusion
  void collision_clauses() {
    auto& f = enc_.formula;
    const int k = instance_.agent_count();
    const int n = instance_.graph().vertex_count();
    std::vector<int> present;
    for (int t = 0; t <= depth_; ++t) {
      for (VertexId v = 0; v < n; ++v) {
        present.clear();
        for (int a = 0; a < k; ++a)
          if (tegs_[a].admits(t, v)) present.push_back(a);
        for (std::size_t p = 0; p < present.size(); ++p)
          for (std::size_t q = p + 1; q < present.size(); ++q)
            f.add_clause({~X(present[p], t, v), ~X(present[q], t, v)});
      }
    }
  }

  const MapfInstance& instance_;
  const std::vector<Teg>& tegs_;
  bool with_cost_;
  int depth_ = 0;
  Encoding enc_;
};

Encoding encode_soc(const MapfInstance& instance, const std::vector<Teg>& tegs, int delta) {
  if (delta < 0) throw Error("negative delta");
  return Encoder(instance, tegs, true).run(delta);
}

Encoding encode_makespan(const MapfInstance& instance, const std::vector<Teg>& tegs) {
  for (const auto& teg : tegs)
    for (int t = 0; t < teg.depth(); ++t)
      if (teg.has_extra_edge(t)) throw Error("makespan encoding expects TEGs without extra edges");
  return Encoder(instance, tegs, false).run(0);
}

Solution decode_model(const MapfInstance& instance, const VarMap& vars, const SatResult& model) {
  if (model.status != SatStatus::Sat) throw Error("cannot decode a non-satisfying result");
  std::vector<Path> paths(vars.agents());
  for (int a = 0; a < vars.agents(); ++a) {
    for (int t = 0; t <= vars.depth(); ++t) {
      VertexId at = -1;
      for (VertexId v = 0; v < vars.vertex_count(); ++v) {
        int var = vars.x(a, t, v);
        if (var == 0 || !model.value(var)) continue;
        if (at >= 0)
          throw EncodingBug("agent " + std::to_string(a) + " in two vertices at t=" +
                            std::to_string(t));
        at = v;
      }
      if (at < 0)
        throw EncodingBug("agent " + std::to_string(a) + " nowhere at t=" + std::to_string(t));
      paths[a].push_back(at);
    }
  }
  return make_solution(std::move(paths), instance.agents());
}

}  // namespace mapf
