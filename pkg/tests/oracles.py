"""Slow, obviously-correct reference computations used by the tests."""

from itertools import combinations, product
from math import gcd

from subtorus.lattice import IntMatrix


def minor_gcds(rows):
    """``Delta_k`` = gcd of all k x k minors, for k = 1.. until it vanishes."""
    M = IntMatrix.from_rows(rows)
    out = []
    for k in range(1, min(M.shape) + 1):
        g = 0
        for ri in combinations(range(M.rows), k):
            for ci in combinations(range(M.cols), k):
                sub = IntMatrix.from_rows([[M[i, j] for j in ci] for i in ri])
                g = gcd(g, sub.det())
        if g == 0:
            break
        out.append(g)
    return out


def invariant_factors_from_minors(rows):
    """``d_k = Delta_k / Delta_{k-1}``."""
    deltas = minor_gcds(rows)
    prev = 1
    out = []
    for d in deltas:
        out.append(d // prev)
        prev = d
    return out


def is_hermite(rows):
    """Row Hermite conditions: staircase, positive pivots, reduced above, zero rows last."""
    last = -1
    seen_zero = False
    for i, row in enumerate(rows):
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            seen_zero = True
            continue
        if seen_zero:
            return False
        p = nz[0]
        if p <= last or row[p] <= 0:
            return False
        if any(not (0 <= rows[k][p] < row[p]) for k in range(i)):
            return False
        last = p
    return True


def hermite_forms_by_search(rows, bound=3):
    """All Hermite-form results ``U @ M`` over unimodular ``U`` with entries in ``[-bound, bound]``."""
    M = IntMatrix.from_rows(rows)
    m = M.rows
    found = set()
    for entries in product(range(-bound, bound + 1), repeat=m * m):
        U = IntMatrix(m, m, entries)
        if abs(U.det()) != 1:
            continue
        H = (U @ M).tolist()
        if is_hermite(H):
            found.add(tuple(map(tuple, H)))
    return found
