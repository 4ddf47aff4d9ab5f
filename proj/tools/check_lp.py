#!/usr/bin/env python3
"""Solve an exported LP file with scipy and print the optimal objective.

Cross-checks the built-in branch-and-bound against an independent MILP
implementation. Exits 0 and prints the objective on success; exits 2 when
the model is infeasible.

Usage: check_lp.py model.lp [expected_objective]
"""
import re
import sys

import numpy as np
from scipy import optimize, sparse


def parse_terms(expr, var_index):
    terms = []
    for sign, coeff, name in re.findall(r"([+-]?)\s*(\d+\.\d+)\s+([A-Za-z_][\w]*)", expr):
        value = float(coeff)
        if sign == "-":
            value = -value
        if name not in var_index:
            var_index[name] = len(var_index)
        terms.append((var_index[name], value))
    return terms


def main():
    path = sys.argv[1]
    lines = [ln.strip() for ln in open(path, encoding="utf-8")]
    lines = [ln for ln in lines if ln and not ln.startswith("\\")]

    section = None
    objective = []
    rows = []  # (terms, relation, rhs)
    var_index = {}
    for ln in lines:
        low = ln.lower()
        if low == "minimize":
            section = "obj"
            continue
        if low == "subject to":
            section = "st"
            continue
        if low == "binary":
            section = "bin"
            continue
        if low == "end":
            break
        if section == "obj":
            expr = ln.split(":", 1)[1] if ":" in ln else ln
            objective += parse_terms(expr, var_index)
        elif section == "st":
            body = ln.split(":", 1)[1]
            if "<=" in body:
                lhs, rhs = body.split("<=")
                rel = "<="
            else:
                lhs, rhs = body.split("=")
                rel = "="
            rows.append((parse_terms(lhs, var_index), rel, float(rhs)))
        elif section == "bin":
            if ln not in var_index:
                var_index[ln] = len(var_index)

    n = len(var_index)
    c = np.zeros(n)
    for var, coeff in objective:
        c[var] = coeff

    data, ri, ci, lo, hi = [], [], [], [], []
    for r, (terms, rel, rhs) in enumerate(rows):
        for var, coeff in terms:
            ri.append(r)
            ci.append(var)
            data.append(coeff)
        lo.append(rhs if rel == "=" else -np.inf)
        hi.append(rhs)
    constraints = optimize.LinearConstraint(
        sparse.csr_matrix((data, (ri, ci)), shape=(len(rows), n)), lo, hi
    )
    res = optimize.milp(
        c,
        integrality=np.ones(n),
        bounds=optimize.Bounds(np.zeros(n), np.ones(n)),
        constraints=constraints,
    )
    if not res.success:
        print("infeasible")
        return 2
    print(f"objective {res.fun:.6f}")
    if len(sys.argv) > 2:
        expected = float(sys.argv[2])
        if abs(res.fun - expected) > 1e-6:
            print(f"MISMATCH: expected {expected:.6f}")
            return 1
        print("MATCH")
    return 0


if __name__ == "__main__":
    sys.exit(main())
