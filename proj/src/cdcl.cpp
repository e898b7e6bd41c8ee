#include <algorithm>
#include <cstdint>

#include "mapf/sat.hpp"

namespace mapf {

namespace {

// Literal index: 2*var + sign, var 0-based.
using LitIdx = int;
constexpr int kNoReason = -1;

inline LitIdx encode(Lit l) { return 2 * (l.var() - 1) + (l.negated() ? 1 : 0); }
inline int var_of(LitIdx l) { return l >> 1; }
inline LitIdx negate(LitIdx l) { return l ^ 1; }

enum : std::int8_t { kFalse = 0, kTrue = 1, kUndef = 2 };

struct ClauseData {
  std::vector<LitIdx> lits;
  bool learnt = false;
  bool deleted = false;
  int lbd = 0;
  double activity = 0.0;
};

struct Watcher {
  int clause;
  LitIdx blocker;
};

double luby(double base, int index) {
  int size = 1, seq = 0;
  while (size < index + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != index) {
    size = (size - 1) >> 1;
    --seq;
    index %= size;
  }
  double r = 1.0;
  for (int i = 0; i < seq; ++i) r *= base;
  return r;
}

class Cdcl {
 public:
  explicit Cdcl(int vars)
      : assigns_(vars, kUndef),
        level_(vars, 0),
        reason_(vars, kNoReason),
        polarity_(vars, 1),
        activity_(vars, 0.0),
        seen_(vars, 0),
        heap_pos_(vars, -1),
        watches_(2 * static_cast<std::size_t>(vars)) {
    for (int v = 0; v < vars; ++v) heap_insert(v);
  }

  bool add_clause(std::vector<LitIdx> lits) {
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (std::size_t i = 1; i < lits.size(); ++i)
      if (lits[i] == negate(lits[i - 1])) return true;  // tautology
    // drop literals already false at level 0, satisfied clauses vanish
    std::vector<LitIdx> kept;
    for (LitIdx l : lits) {
      if (value(l) == kTrue) return true;
      if (value(l) == kUndef) kept.push_back(l);
    }
    if (kept.empty()) return false;
    if (kept.size() == 1) {
      enqueue(kept[0], kNoReason);
      return propagate() == kNoReason;
    }
    attach(static_cast<int>(clauses_.size()), kept);
    clauses_.push_back({std::move(kept)});
    return true;
  }

  SatStatus solve(const std::vector<LitIdx>& assumptions, const Deadline& deadline) {
    assumptions_ = assumptions;
    int restart = 0;
    max_learnts_ = std::max<std::size_t>(clauses_.size() / 3, 2000);
    while (true) {
      const int budget = static_cast<int>(luby(2.0, restart++) * 100);
      SatStatus status = search(budget, deadline);
      if (status != SatStatus::Unknown || timed_out_) {
        return status;
      }
    }
  }

  bool model_value(int var) const { return assigns_[var] == kTrue; }
  bool timed_out() const { return timed_out_; }

 private:
  std::int8_t value(LitIdx l) const {
    std::int8_t a = assigns_[var_of(l)];
    if (a == kUndef) return kUndef;
    return static_cast<std::int8_t>(a ^ (l & 1));
  }

  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  void enqueue(LitIdx l, int reason) {
    int v = var_of(l);
    assigns_[v] = static_cast<std::int8_t>((l & 1) ? kFalse : kTrue);
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back(l);
  }

  void attach(int ci, const std::vector<LitIdx>& lits) {
    watches_[negate(lits[0])].push_back({ci, lits[1]});
    watches_[negate(lits[1])].push_back({ci, lits[0]});
  }

  // Returns the conflicting clause index or kNoReason.
  int propagate() {
    int conflict = kNoReason;
    while (qhead_ < trail_.size()) {
      LitIdx p = trail_[qhead_++];  // p became true; visit clauses watching ~p
      auto& ws = watches_[p];
      std::size_t i = 0, j = 0;
      const LitIdx false_lit = negate(p);
      while (i < ws.size()) {
        Watcher w = ws[i];
        if (value(w.blocker) == kTrue) {
          ws[j++] = ws[i++];
          continue;
        }
        ClauseData& c = clauses_[w.clause];
        if (c.deleted) {
          ++i;
          continue;
        }
        auto& lits = c.lits;
        if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
        ++i;
        LitIdx first = lits[0];
        if (first != w.blocker && value(first) == kTrue) {
          ws[j++] = {w.clause, first};
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < lits.size(); ++k) {
          if (value(lits[k]) != kFalse) {
            std::swap(lits[1], lits[k]);
            watches_[negate(lits[1])].push_back({w.clause, first});
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = {w.clause, first};
        if (value(first) == kFalse) {
          conflict = w.clause;
          qhead_ = trail_.size();
          while (i < ws.size()) ws[j++] = ws[i++];
        } else {
          enqueue(first, w.clause);
        }
      }
      ws.resize(j);
      if (conflict != kNoReason) break;
    }
    return conflict;
  }

  void bump_var(int v) {
    if ((activity_[v] += var_inc_) > 1e100) {
      for (auto& a : activity_) a *= 1e-100;
      var_inc_ *= 1e-100;
    }
    if (heap_pos_[v] >= 0) heap_up(heap_pos_[v]);
  }

  void bump_clause(ClauseData& c) {
    if ((c.activity += clause_inc_) > 1e20) {
      for (auto& cd : clauses_)
        if (cd.learnt) cd.activity *= 1e-20;
      clause_inc_ *= 1e-20;
    }
  }

  bool redundant(LitIdx l, std::uint32_t abstract_levels) {
    // recursive minimization with an explicit stack
    std::vector<LitIdx> stack{l};
    std::size_t top = to_clear_.size();
    while (!stack.empty()) {
      LitIdx q = stack.back();
      stack.pop_back();
      const auto& c = clauses_[reason_[var_of(q)]].lits;
      for (std::size_t i = 1; i < c.size(); ++i) {
        int v = var_of(c[i]);
        if (seen_[v] || level_[v] == 0) continue;
        if (reason_[v] != kNoReason && (abstract_level(v) & abstract_levels) != 0) {
          seen_[v] = 1;
          stack.push_back(c[i]);
          to_clear_.push_back(c[i]);
        } else {
          for (std::size_t k = top; k < to_clear_.size(); ++k) seen_[var_of(to_clear_[k])] = 0;
          to_clear_.resize(top);
          return false;
        }
      }
    }
    return true;
  }

  std::uint32_t abstract_level(int v) const { return 1u << (level_[v] & 31); }

  void analyze(int conflict, std::vector<LitIdx>& learnt, int& backtrack_level) {
    learnt.assign(1, 0);
    int pending = 0;
    LitIdx p = -1;
    std::size_t index = trail_.size();
    do {
      ClauseData& c = clauses_[conflict];
      if (c.learnt) bump_clause(c);
      for (std::size_t i = (p == -1 ? 0 : 1); i < c.lits.size(); ++i) {
        LitIdx q = c.lits[i];
        int v = var_of(q);
        if (!seen_[v] && level_[v] > 0) {
          seen_[v] = 1;
          bump_var(v);
          if (level_[v] >= decision_level())
            ++pending;
          else
            learnt.push_back(q);
        }
      }
      while (!seen_[var_of(trail_[--index])]) {
      }
      p = trail_[index];
      conflict = reason_[var_of(p)];
      seen_[var_of(p)] = 0;
      --pending;
    } while (pending > 0);
    learnt[0] = negate(p);

    to_clear_.assign(learnt.begin(), learnt.end());
    std::uint32_t levels = 0;
    for (std::size_t i = 1; i < learnt.size(); ++i) levels |= abstract_level(var_of(learnt[i]));
    std::size_t j = 1;
    for (std::size_t i = 1; i < learnt.size(); ++i) {
      int v = var_of(learnt[i]);
      if (reason_[v] == kNoReason || !redundant(learnt[i], levels)) learnt[j++] = learnt[i];
    }
    learnt.resize(j);
    for (LitIdx l : to_clear_) seen_[var_of(l)] = 0;
    to_clear_.clear();

    backtrack_level = 0;
    if (learnt.size() > 1) {
      std::size_t max_i = 1;
      for (std::size_t i = 2; i < learnt.size(); ++i)
        if (level_[var_of(learnt[i])] > level_[var_of(learnt[max_i])]) max_i = i;
      std::swap(learnt[1], learnt[max_i]);
      backtrack_level = level_[var_of(learnt[1])];
    }
  }

  int compute_lbd(const std::vector<LitIdx>& lits) {
    ++lbd_stamp_;
    int count = 0;
    for (LitIdx l : lits) {
      int lv = level_[var_of(l)];
      if (lbd_seen_.size() <= static_cast<std::size_t>(lv)) lbd_seen_.resize(lv + 1, 0);
      if (lbd_seen_[lv] != lbd_stamp_) {
        lbd_seen_[lv] = lbd_stamp_;
        ++count;
      }
    }
    return count;
  }

  void cancel_until(int level) {
    if (decision_level() <= level) return;
    for (std::size_t i = trail_.size(); i-- > static_cast<std::size_t>(trail_lim_[level]);) {
      int v = var_of(trail_[i]);
      assigns_[v] = kUndef;
      reason_[v] = kNoReason;
      polarity_[v] = static_cast<std::int8_t>((trail_[i] & 1) ? 0 : 1);
      if (heap_pos_[v] < 0) heap_insert(v);
    }
    trail_.resize(trail_lim_[level]);
    trail_lim_.resize(level);
    qhead_ = trail_.size();
  }

  bool locked(int ci) const {
    const auto& c = clauses_[ci];
    int v = var_of(c.lits[0]);
    return reason_[v] == ci && value(c.lits[0]) == kTrue;
  }

  void reduce_db() {
    std::vector<int> learnts;
    for (int i = 0; i < static_cast<int>(clauses_.size()); ++i)
      if (clauses_[i].learnt && !clauses_[i].deleted && clauses_[i].lbd > 2 &&
          clauses_[i].lits.size() > 2)
        learnts.push_back(i);
    std::sort(learnts.begin(), learnts.end(), [&](int a, int b) {
      if (clauses_[a].lbd != clauses_[b].lbd) return clauses_[a].lbd > clauses_[b].lbd;
      return clauses_[a].activity < clauses_[b].activity;
    });
    for (std::size_t i = 0; i < learnts.size() / 2; ++i) {
      int ci = learnts[i];
      if (locked(ci)) continue;
      clauses_[ci].deleted = true;
      clauses_[ci].lits.clear();
      clauses_[ci].lits.shrink_to_fit();
      --num_learnts_;
    }
    // deleted clauses are skipped lazily in propagate; purge their watchers now
    for (auto& ws : watches_)
      ws.erase(std::remove_if(ws.begin(), ws.end(),
                              [&](const Watcher& w) { return clauses_[w.clause].deleted; }),
               ws.end());
  }

  LitIdx pick_branch() {
    while (!heap_.empty()) {
      int v = heap_pop();
      if (assigns_[v] == kUndef) return 2 * v + (polarity_[v] ? 0 : 1);
    }
    return -1;
  }

  SatStatus search(int conflict_budget, const Deadline& deadline) {
    int conflicts = 0;
    std::vector<LitIdx> learnt;
    while (true) {
      int conflict = propagate();
      if (conflict != kNoReason) {
        ++conflicts;
        ++total_conflicts_;
        if (decision_level() == 0) return SatStatus::Unsat;
        int bt = 0;
        analyze(conflict, learnt, bt);
        // never backtrack below the assumption levels without re-deciding them
        cancel_until(bt);
        if (learnt.size() == 1) {
          enqueue(learnt[0], kNoReason);
        } else {
          int ci = static_cast<int>(clauses_.size());
          ClauseData c{learnt, true};
          c.lbd = compute_lbd(learnt);
          clauses_.push_back(std::move(c));
          attach(ci, clauses_[ci].lits);
          bump_clause(clauses_[ci]);
          ++num_learnts_;
          enqueue(learnt[0], ci);
        }
        var_inc_ /= 0.95;
        clause_inc_ /= 0.999;
        if ((total_conflicts_ & 127) == 0 && deadline && Clock::now() > *deadline) {
          timed_out_ = true;
          return SatStatus::Unknown;
        }
        continue;
      }
      if (conflicts >= conflict_budget) {
        cancel_until(0);
        return SatStatus::Unknown;
      }
      if (num_learnts_ >= max_learnts_ + trail_.size()) {
        reduce_db();
        max_learnts_ += max_learnts_ / 10;
      }
      LitIdx next = -1;
      while (decision_level() < static_cast<int>(assumptions_.size())) {
        LitIdx a = assumptions_[decision_level()];
        if (value(a) == kTrue) {
          trail_lim_.push_back(static_cast<int>(trail_.size()));
        } else if (value(a) == kFalse) {
          return SatStatus::Unsat;
        } else {
          next = a;
          break;
        }
      }
      if (next == -1) {
        if ((++decisions_ & 4095) == 0 && deadline && Clock::now() > *deadline) {
          timed_out_ = true;
          return SatStatus::Unknown;
        }
        next = pick_branch();
        if (next == -1) return SatStatus::Sat;
      }
      trail_lim_.push_back(static_cast<int>(trail_.size()));
      enqueue(next, kNoReason);
    }
  }

  // binary max-heap on activity
  bool heap_less(int a, int b) const {
    if (activity_[a] != activity_[b]) return activity_[a] > activity_[b];
    return a < b;
  }
  void heap_insert(int v) {
    heap_pos_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    heap_up(heap_pos_[v]);
  }
  void heap_up(int i) {
    int v = heap_[i];
    while (i > 0) {
      int parent = (i - 1) / 2;
      if (!heap_less(v, heap_[parent])) break;
      heap_[i] = heap_[parent];
      heap_pos_[heap_[i]] = i;
      i = parent;
    }
    heap_[i] = v;
    heap_pos_[v] = i;
  }
  void heap_down(int i) {
    int v = heap_[i];
    const int n = static_cast<int>(heap_.size());
    while (true) {
      int child = 2 * i + 1;
      if (child >= n) break;
      if (child + 1 < n && heap_less(heap_[child + 1], heap_[child])) ++child;
      if (!heap_less(heap_[child], v)) break;
      heap_[i] = heap_[child];
      heap_pos_[heap_[i]] = i;
      i = child;
    }
    heap_[i] = v;
    heap_pos_[v] = i;
  }
  int heap_pop() {
    int top = heap_[0];
    heap_pos_[top] = -1;
    int last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
      heap_[0] = last;
      heap_pos_[last] = 0;
      heap_down(0);
    }
    return top;
  }

  std::vector<std::int8_t> assigns_;
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<std::int8_t> polarity_;
  std::vector<double> activity_;
  std::vector<char> seen_;
  std::vector<int> heap_pos_;
  std::vector<int> heap_;
  std::vector<std::vector<Watcher>> watches_;
  std::vector<ClauseData> clauses_;
  std::vector<LitIdx> trail_;
  std::vector<int> trail_lim_;
  std::vector<LitIdx> to_clear_;
  std::vector<LitIdx> assumptions_;
  std::vector<int> lbd_seen_;
  int lbd_stamp_ = 0;
  std::size_t qhead_ = 0;
  std::size_t num_learnts_ = 0;
  std::size_t max_learnts_ = 0;
  std::uint64_t total_conflicts_ = 0;
  std::uint64_t decisions_ = 0;
  double var_inc_ = 1.0;
  double clause_inc_ = 1.0;
  bool timed_out_ = false;
};

}  // namespace

SatResult EmbeddedSolver::solve(const CnfFormula& formula, std::span<const Lit> assumptions,
                                Deadline deadline) {
  SatResult result;
  const int n = formula.var_count();
  Cdcl solver(n);
  for (const auto& clause : formula.clauses()) {
    std::vector<LitIdx> lits;
    lits.reserve(clause.size());
    for (Lit l : clause) lits.push_back(encode(l));
    if (!solver.add_clause(std::move(lits))) {
      result.status = SatStatus::Unsat;
      return result;
    }
  }
  std::vector<LitIdx> assume;
  for (Lit l : assumptions) {
    if (l.var() < 1 || l.var() > n) throw SatError("assumption over unknown variable");
    assume.push_back(encode(l));
  }
  result.status = solver.solve(assume, deadline);
  if (result.status == SatStatus::Sat) {
    result.model.assign(static_cast<std::size_t>(n) + 1, false);
    for (int v = 0; v < n; ++v) result.model[v + 1] = solver.model_value(v);
  }
  return result;
}

bool satisfies(const CnfFormula& formula, const std::vector<bool>& model) {
  if (model.size() < static_cast<std::size_t>(formula.var_count()) + 1) return false;
  for (const auto& clause : formula.clauses()) {
    bool sat = false;
    for (Lit l : clause)
      if (model[l.var()] != l.negated()) {
        sat = true;
        break;
      }
    if (!sat) return false;
  }
  return true;
}

}  // namespace mapf
