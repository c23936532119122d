#!/usr/bin/env python3
"""DIMACS front end for the CaDiCaL binding shipped with python-sat.

Usage: pysat_solve.py FILE.cnf

Prints the competition output format (s/v lines) and exits with 10 for
satisfiable and 20 for unsatisfiable instances.
"""
import sys

from pysat.formula import CNF
from pysat.solvers import Solver


def main(argv):
    if len(argv) != 2:
        print("usage: pysat_solve.py FILE.cnf", file=sys.stderr)
        return 2
    formula = CNF(from_file=argv[1])
    with Solver(name="cadical195", bootstrap_with=formula.clauses) as solver:
        if not solver.solve():
            print("s UNSATISFIABLE")
            return 20
        model = solver.get_model() or []
        print("s SATISFIABLE")
        print("v " + " ".join(str(lit) for lit in model) + " 0")
        return 10


if __name__ == "__main__":
    sys.exit(main(sys.argv))
