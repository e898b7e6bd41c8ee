#!/usr/bin/env python3
"""Glucose 3 (via python-sat) behind the SAT-competition command-line contract.

Usage: glucose_dimacs.py FILE.cnf
Prints `s SATISFIABLE` + `v` lines (exit 10) or `s UNSATISFIABLE` (exit 20).
"""
import sys

from pysat.formula import CNF
from pysat.solvers import Glucose3


def main() -> int:
    if len(sys.argv) < 2:
        print("usage: glucose_dimacs.py FILE.cnf", file=sys.stderr)
        return 1
    cnf = CNF(from_file=sys.argv[-1])
    with Glucose3(bootstrap_with=cnf.clauses) as solver:
        if not solver.solve():
            print("s UNSATISFIABLE")
            return 20
        model = set(solver.get_model() or [])
    values = [v if v in model else -v for v in range(1, cnf.nv + 1)]
    print("s SATISFIABLE")
    for i in range(0, len(values), 20):
        print("v " + " ".join(map(str, values[i:i + 20])))
    print("v 0")
    return 10


if __name__ == "__main__":
    sys.exit(main())
