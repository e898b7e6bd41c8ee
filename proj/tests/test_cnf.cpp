#include <doctest.h>

#include <random>

#include "mapf/cnf.hpp"
#include "oracles.hpp"

using namespace mapf;
using namespace mapf::testing;

TEST_CASE("variable allocation") {
  CnfFormula f;
  CHECK(f.new_var() == 1);
  f.new_var();
  f.new_var();
  CHECK(f.var_count() == 3);
}

TEST_CASE("clauses over unknown variables are rejected") {
  CnfFormula f;
  f.new_var();
  CHECK_THROWS_AS(f.add_clause({Lit::pos(2)}), std::invalid_argument);
  CHECK_FALSE(f.has_empty_clause());
  f.add_clause(Clause{});
  CHECK(f.has_empty_clause());
}

TEST_CASE("DIMACS output") {
  CHECK(write_dimacs(CnfFormula{}) == "p cnf 0 0\n");
  CnfFormula f;
  f.new_var();
  f.new_var();
  f.add_clause({Lit::pos(1), Lit::neg(2)});
  CHECK(write_dimacs(f) == "p cnf 2 1\n1 -2 0\n");
}

TEST_CASE("DIMACS round-trip over random formulas") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    CnfFormula f = random_3cnf(3 + i % 20, 1 + i * 2, rng);
    CHECK(parse_dimacs(write_dimacs(f)) == f);
  }
  CnfFormula g = parse_dimacs("c comment\np cnf 3 2\n1 -3\n 2 0 -1\n0\n");
  CHECK(g.clause_count() == 2);
  CHECK(g.clauses()[0] == Clause{Lit::pos(1), Lit::neg(3), Lit::pos(2)});
  CHECK_THROWS(parse_dimacs("p cnf 2 1\n1 3 0\n"));
  CHECK_THROWS(parse_dimacs("p cnf 2 2\n1 0\n"));
  CHECK_THROWS(parse_dimacs("1 2 0\n"));
}

TEST_CASE("at-most-0 is unit clauses") {
  CnfFormula f;
  std::vector<Lit> xs{Lit::pos(f.new_var()), Lit::pos(f.new_var())};
  add_at_most(f, xs, 0);
  CHECK(f.clauses() == std::vector<Clause>{{Lit::neg(1)}, {Lit::neg(2)}});
  CHECK(f.var_count() == 2);
}

TEST_CASE("at-most-n adds nothing") {
  CnfFormula f;
  std::vector<Lit> xs{Lit::pos(f.new_var()), Lit::pos(f.new_var()), Lit::pos(f.new_var())};
  add_at_most(f, xs, 3);
  add_at_most(f, xs, 7);
  CHECK(f.clause_count() == 0);
  CHECK(f.var_count() == 3);
}

TEST_CASE("sequential counter sizes match the closed form") {
  for (int n = 2; n <= 12; ++n)
    for (int k = 1; k < n; ++k) {
      CnfFormula f;
      std::vector<Lit> xs;
      for (int i = 0; i < n; ++i) xs.push_back(Lit::pos(f.new_var()));
      add_at_most(f, xs, k);
      CHECK(f.var_count() - n == (n - 1) * k);
      CHECK(static_cast<int>(f.clause_count()) == 2 * n * k + n - 3 * k - 1);
    }
}

TEST_CASE("sequential counter projects onto at-most-k (n <= 6)") {
  EmbeddedSolver solver;
  for (int n = 1; n <= 6; ++n)
    for (int k = 0; k <= n; ++k) {
      CAPTURE(n);
      CAPTURE(k);
      CHECK(at_most_projection_exact(n, k, solver));
    }
}

TEST_CASE("four inputs, at most two: eleven projected models") {
  EmbeddedSolver solver;
  CnfFormula f;
  std::vector<Lit> xs;
  for (int i = 0; i < 4; ++i) xs.push_back(Lit::pos(f.new_var()));
  add_at_most(f, xs, 2);
  int models = 0;
  for (int m = 0; m < 16; ++m) {
    std::vector<Lit> assume;
    for (int i = 0; i < 4; ++i) assume.push_back((m >> i) & 1 ? xs[i] : ~xs[i]);
    models += solver.solve(f, assume).status == SatStatus::Sat;
  }
  CHECK(models == 11);
}

TEST_CASE("negative literals count as inputs") {
  EmbeddedSolver solver;
  CnfFormula f;
  std::vector<Lit> xs{Lit::neg(f.new_var()), Lit::neg(f.new_var()), Lit::neg(f.new_var())};
  add_at_most(f, xs, 1);  // at least two of the variables are true
  f.add_unit(Lit::neg(1));
  f.add_unit(Lit::neg(2));
  CHECK(solver.solve(f).status == SatStatus::Unsat);
}
