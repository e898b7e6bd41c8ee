#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <queue>
#include <unordered_map>
#include <unordered_set>

#include "mapf/search.hpp"

namespace mapf {

namespace {

using Key = std::uint64_t;

class JointSpace {
 public:
  JointSpace(const MapfInstance& instance, double state_bound)
      : instance_(instance),
        n_(instance.graph().vertex_count()),
        k_(instance.agent_count()) {
    if (std::pow(static_cast<double>(std::max(n_, 1)), k_) * std::pow(2.0, k_) > state_bound)
      throw StateSpaceTooLarge("joint state space exceeds the configured bound");
    base_ = 1;
    for (int i = 0; i < k_; ++i) base_ *= static_cast<Key>(n_);
  }

  int agents() const { return k_; }
  Key position_count() const { return base_; }

  Key encode(const std::vector<VertexId>& pos) const {
    Key code = 0;
    for (int i = k_ - 1; i >= 0; --i) code = code * n_ + pos[i];
    return code;
  }
  std::vector<VertexId> decode(Key code) const {
    std::vector<VertexId> pos(k_);
    for (int i = 0; i < k_; ++i) {
      pos[i] = static_cast<VertexId>(code % n_);
      code /= n_;
    }
    return pos;
  }

  /// Calls visit(next_positions) for every legal joint step in which only
  /// agents with movable[i] act. All-wait is skipped.
  template <class Visit>
  void for_each_step(const std::vector<VertexId>& pos, const std::vector<bool>& movable,
                     Visit&& visit) const {
    const Graph& g = instance_.graph();
    std::vector<VertexId> next = pos;
    std::vector<char> occupied_now(n_, 0), taken(n_, 0);
    for (VertexId v : pos) occupied_now[v] = 1;
    // waiting agents keep their vertex; movers need an empty target that no
    // other mover claims
    std::function<void(int, bool)> rec = [&](int i, bool any_move) {
      if (i == k_) {
        if (any_move) visit(next);
        return;
      }
      next[i] = pos[i];
      rec(i + 1, any_move);
      if (!movable[i]) return;
      for (VertexId w : g.neighbors(pos[i])) {
        if (occupied_now[w] || taken[w]) continue;
        taken[w] = 1;
        next[i] = w;
        rec(i + 1, true);
        taken[w] = 0;
      }
      next[i] = pos[i];
    };
    rec(0, false);
  }

 private:
  const MapfInstance& instance_;
  int n_;
  int k_;
  Key base_ = 1;
};

}  // namespace

OracleResult oracle_solve(const MapfInstance& instance, int soc_cap,
                          std::optional<int> makespan_cap, double state_bound) {
  OracleResult result;
  const int k = instance.agent_count();
  if (k > 20) throw StateSpaceTooLarge("too many agents for the joint-state oracle");
  JointSpace space(instance, state_bound * (makespan_cap ? *makespan_cap + 1 : 1));
  const Key masks = Key{1} << k;
  const Key full = masks - 1;

  auto make_key = [&](int t, Key pos, Key mask) {
    return (static_cast<Key>(makespan_cap ? t : 0) * space.position_count() + pos) * masks + mask;
  };
  struct Entry {
    int cost;
    Key parent;
    bool step;
    bool closed;
  };
  std::unordered_map<Key, Entry> seen;
  using Item = std::pair<int, Key>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;

  std::vector<VertexId> starts(k);
  for (int i = 0; i < k; ++i) starts[i] = instance.agents()[i].start;
  const Key root = make_key(0, space.encode(starts), 0);
  seen[root] = {0, root, false, false};
  open.push({0, root});

  // time is only tracked in the key when a makespan cap is given
  std::unordered_map<Key, int> time_of;
  time_of[root] = 0;

  auto relax = [&](Key from, Key to, int cost, bool step, int t) {
    if (cost > soc_cap) return;
    auto it = seen.find(to);
    if (it != seen.end() && (it->second.closed || it->second.cost <= cost)) return;
    seen[to] = {cost, from, step, false};
    time_of[to] = t;
    open.push({cost, to});
  };

  Key goal_key = 0;
  bool found = false;
  while (!open.empty()) {
    auto [cost, key] = open.top();
    open.pop();
    Entry& entry = seen[key];
    if (entry.closed || entry.cost != cost) continue;
    entry.closed = true;
    ++result.expanded;
    const Key mask = key % masks;
    const Key pos_code = (key / masks) % space.position_count();
    const int t = time_of[key];
    if (mask == full) {
      goal_key = key;
      found = true;
      break;
    }
    auto pos = space.decode(pos_code);
    // commit an agent sitting on its goal to stay there for good
    for (int i = 0; i < k; ++i) {
      if ((mask >> i) & 1 || pos[i] != instance.agents()[i].goal) continue;
      relax(key, make_key(t, pos_code, mask | (Key{1} << i)), cost, false, t);
    }
    if (makespan_cap && t >= *makespan_cap) continue;
    std::vector<bool> movable(k);
    int active = 0;
    for (int i = 0; i < k; ++i) {
      movable[i] = !((mask >> i) & 1);
      active += movable[i];
    }
    space.for_each_step(pos, movable, [&](const std::vector<VertexId>& next) {
      relax(key, make_key(t + 1, space.encode(next), mask), cost + active, true, t + 1);
    });
  }
  if (!found) return result;

  // commit transitions keep positions, steps always change them, so the
  // timeline is the parent chain with repeated layers collapsed
  std::vector<std::vector<VertexId>> chain;
  for (Key key = goal_key;; key = seen[key].parent) {
    chain.push_back(space.decode((key / masks) % space.position_count()));
    if (key == root) break;
  }
  std::reverse(chain.begin(), chain.end());
  std::vector<std::vector<VertexId>> timeline;
  for (auto& layer : chain)
    if (timeline.empty() || timeline.back() != layer) timeline.push_back(std::move(layer));

  std::vector<Path> paths(k);
  for (const auto& layer : timeline)
    for (int i = 0; i < k; ++i) paths[i].push_back(layer[i]);
  result.feasible = true;
  result.soc = seen[goal_key].cost;
  result.solution = make_solution(std::move(paths), instance.agents());
  return result;
}

std::optional<int> oracle_makespan(const MapfInstance& instance, int makespan_cap,
                                   double state_bound) {
  const int k = instance.agent_count();
  JointSpace space(instance, state_bound);
  std::vector<VertexId> starts(k), goals(k);
  for (int i = 0; i < k; ++i) {
    starts[i] = instance.agents()[i].start;
    goals[i] = instance.agents()[i].goal;
  }
  const Key target = space.encode(goals);
  std::vector<Key> frontier{space.encode(starts)};
  std::unordered_set<Key> visited(frontier.begin(), frontier.end());
  const std::vector<bool> movable(k, true);
  for (int depth = 0; depth <= makespan_cap; ++depth) {
    std::vector<Key> next_frontier;
    for (Key code : frontier) {
      if (code == target) return depth;
      space.for_each_step(space.decode(code), movable, [&](const std::vector<VertexId>& next) {
        Key c = space.encode(next);
        if (visited.insert(c).second) next_frontier.push_back(c);
      });
    }
    if (next_frontier.empty()) break;
    frontier = std::move(next_frontier);
  }
  return std::nullopt;
}

}  // namespace mapf
