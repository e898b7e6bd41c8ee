#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mapf {

/// DIMACS-style literal: +v or -v for variable v >= 1.
class Lit {
 public:
  constexpr Lit() = default;
  static constexpr Lit pos(int var) { return Lit(var); }
  static constexpr Lit neg(int var) { return Lit(-var); }
  static constexpr Lit from_dimacs(int value) { return Lit(value); }

  constexpr int var() const { return value_ < 0 ? -value_ : value_; }
  constexpr bool negated() const { return value_ < 0; }
  constexpr int dimacs() const { return value_; }
  constexpr Lit operator~() const { return Lit(-value_); }

  friend constexpr bool operator==(Lit, Lit) = default;
  friend constexpr auto operator<=>(Lit, Lit) = default;

 private:
  constexpr explicit Lit(int value) : value_(value) {}
  int value_ = 0;
};

using Clause = std::vector<Lit>;

enum class CardinalityEncoding { SequentialCounter };

class CnfFormula {
 public:
  int new_var() { return ++var_count_; }
  int var_count() const { return var_count_; }
  std::size_t clause_count() const { return clauses_.size(); }
  const std::vector<Clause>& clauses() const { return clauses_; }

  /// Throws std::invalid_argument on literals over unallocated variables.
  /// An empty clause is stored and flags the formula trivially unsatisfiable.
  void add_clause(Clause clause);
  void add_clause(std::initializer_list<Lit> lits) { add_clause(Clause(lits)); }
  void add_unit(Lit lit) { add_clause(Clause{lit}); }

  bool has_empty_clause() const { return has_empty_clause_; }

  friend bool operator==(const CnfFormula&, const CnfFormula&) = default;

 private:
  int var_count_ = 0;
  std::vector<Clause> clauses_;
  bool has_empty_clause_ = false;
};

/// Posts "at most `bound` of `vars` are true". The sequential counter uses
/// (n-1)*bound register variables and 2*n*bound + n - 3*bound - 1 clauses
/// when 1 <= bound < n; bound 0 gives unit clauses and bound >= n nothing.
void add_at_most(CnfFormula& formula, std::span<const Lit> vars, int bound,
                 CardinalityEncoding encoding = CardinalityEncoding::SequentialCounter);

std::string write_dimacs(const CnfFormula& formula);

/// Accepts comment lines and clauses spanning several lines. Throws
/// std::runtime_error on malformed input.
CnfFormula parse_dimacs(std::string_view text);

}  // namespace mapf
