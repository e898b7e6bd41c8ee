#include "mapf/cnf.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace mapf {

void CnfFormula::add_clause(Clause clause) {
  for (Lit l : clause)
    if (l.var() < 1 || l.var() > var_count_)
      throw std::invalid_argument("literal over unallocated variable " +
                                  std::to_string(l.dimacs()));
  if (clause.empty()) has_empty_clause_ = true;
  clauses_.push_back(std::move(clause));
}

namespace {

// Sinz 2005 sequential counter. reg(i, j) is true when at least j+1 of
// x_0..x_i are true.
void sequential_counter(CnfFormula& f, std::span<const Lit> x, int k) {
  const int n = static_cast<int>(x.size());
  std::vector<int> regs(static_cast<std::size_t>(n - 1) * k);
  for (auto& r : regs) r = f.new_var();
  auto reg = [&](int i, int j) { return Lit::pos(regs[static_cast<std::size_t>(i) * k + j]); };

  f.add_clause({~x[0], reg(0, 0)});
  for (int j = 1; j < k; ++j) f.add_unit(~reg(0, j));
  for (int i = 1; i < n - 1; ++i) {
    f.add_clause({~x[i], reg(i, 0)});
    f.add_clause({~reg(i - 1, 0), reg(i, 0)});
    for (int j = 1; j < k; ++j) {
      f.add_clause({~x[i], ~reg(i - 1, j - 1), reg(i, j)});
      f.add_clause({~reg(i - 1, j), reg(i, j)});
    }
    f.add_clause({~x[i], ~reg(i - 1, k - 1)});
  }
  f.add_clause({~x[n - 1], ~reg(n - 2, k - 1)});
}

}  // namespace

void add_at_most(CnfFormula& formula, std::span<const Lit> vars, int bound,
                 CardinalityEncoding encoding) {
  if (bound < 0) throw std::invalid_argument("negative cardinality bound");
  const int n = static_cast<int>(vars.size());
  if (bound >= n) return;
  if (bound == 0) {
    for (Lit x : vars) formula.add_unit(~x);
    return;
  }
  switch (encoding) {
    case CardinalityEncoding::SequentialCounter:
      sequential_counter(formula, vars, bound);
      break;
  }
}

std::string write_dimacs(const CnfFormula& formula) {
  std::string out = "p cnf " + std::to_string(formula.var_count()) + ' ' +
                    std::to_string(formula.clause_count()) + '\n';
  char buf[16];
  for (const auto& clause : formula.clauses()) {
    for (Lit l : clause) {
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, l.dimacs());
      out.append(buf, end);
      out.push_back(' ');
    }
    out += "0\n";
  }
  return out;
}

CnfFormula parse_dimacs(std::string_view text) {
  CnfFormula f;
  bool header = false;
  long declared_clauses = 0;
  Clause current;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    line.remove_prefix(first);
    if (line[0] == 'c' || line[0] == '%') continue;
    if (line[0] == 'p') {
      if (header) throw std::runtime_error("duplicate DIMACS header");
      int vars = 0;
      if (std::sscanf(std::string(line).c_str(), "p cnf %d %ld", &vars, &declared_clauses) != 2 ||
          vars < 0 || declared_clauses < 0)
        throw std::runtime_error("malformed DIMACS header");
      for (int i = 0; i < vars; ++i) f.new_var();
      header = true;
      continue;
    }
    if (!header) throw std::runtime_error("clause before DIMACS header");
    const char* p = line.data();
    const char* end = line.data() + line.size();
    while (p < end) {
      while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
      if (p >= end) break;
      int value = 0;
      auto [next, ec] = std::from_chars(p, end, value);
      if (ec != std::errc{}) throw std::runtime_error("bad literal in DIMACS clause");
      p = next;
      if (value == 0) {
        f.add_clause(std::move(current));
        current.clear();
      } else {
        if (std::abs(value) > f.var_count())
          throw std::runtime_error("literal exceeds declared variable count");
        current.push_back(Lit::from_dimacs(value));
      }
    }
  }
  if (!current.empty()) throw std::runtime_error("unterminated DIMACS clause");
  if (header && static_cast<long>(f.clause_count()) != declared_clauses)
    throw std::runtime_error("DIMACS clause count does not match header");
  if (!header) throw std::runtime_error("missing DIMACS header");
  return f;
}

}  // namespace mapf
