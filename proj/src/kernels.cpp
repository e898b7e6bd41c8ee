#include "mapf/kernels.hpp"

#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mapf {

namespace {

Teg build_one(const MapfInstance& instance, const std::vector<int>& xi0, int mu, int delta,
              TegKind kind, int i) {
  const Agent& a = instance.agents()[i];
  if (kind == TegKind::Full) return build_teg(instance.graph(), mu, xi0[i], a.start, a.goal);
  return build_mdd_teg(instance.graph(), mu, xi0[i], delta, a.start, a.goal);
}

}  // namespace

std::vector<Teg> build_tegs(const MapfInstance& instance, const std::vector<int>& xi0, int mu,
                            int delta, TegKind kind, Exec exec) {
  const int k = instance.agent_count();
  if (static_cast<int>(xi0.size()) != k) throw Error("xi0 size does not match agent count");
  std::vector<Teg> tegs(k);
  if (exec == Exec::Serial) {
    for (int i = 0; i < k; ++i) tegs[i] = build_one(instance, xi0, mu, delta, kind, i);
    return tegs;
  }
  // exceptions must not escape an OpenMP region
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < k; ++i) {
    try {
      tegs[i] = build_one(instance, xi0, mu, delta, kind, i);
    } catch (...) {
#pragma omp critical(mapf_teg_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return tegs;
}

std::vector<std::vector<int>> distance_tables(const Graph& graph,
                                              const std::vector<VertexId>& sources, Exec exec) {
  const int n = static_cast<int>(sources.size());
  std::vector<std::vector<int>> out(n);
  if (exec == Exec::Serial) {
    for (int i = 0; i < n; ++i) out[i] = graph.bfs(sources[i]);
    return out;
  }
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) out[i] = graph.bfs(sources[i]);
  return out;
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace mapf
