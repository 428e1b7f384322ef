"""Brute-force enumeration of torsion points in the intersection of two subtori.

The oracle knows nothing about the adapted-basis construction: it walks the
whole grid ``(1/N) Z^n / Z^n`` and keeps the points lying on both subtori.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterator, Optional

import numpy as np

from .errors import AmbientMismatch, EnumerationTooLarge
from .lattice import IntMatrix, Sublattice, is_primitive
from .torus import (
    Finite,
    TorusPoint,
    character_matrix,
    intersect_subtori,
    membership,
    transversal,
)

DEFAULT_CEILING = 10**7
_CHUNK = 1 << 18


@dataclass(frozen=True)
class OracleConfig:
    order_bound: int
    ambient_rank: int
    ceiling: int = DEFAULT_CEILING

    def __post_init__(self):
        if self.order_bound < 1:
            raise ValueError("order_bound must be positive")

    @property
    def size(self) -> int:
        return self.order_bound**self.ambient_rank


def _grid_chunks(N: int, n: int) -> Iterator[np.ndarray]:
    total = N**n
    powers = np.array([N ** (n - 1 - i) for i in range(n)], dtype=np.int64)
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        yield (idx[:, None] // powers[None, :]) % N


def brute_force_intersection(
    A: Sublattice, B: Sublattice, cfg: OracleConfig, batched: bool = True
) -> set[TorusPoint]:
    """All points of order dividing ``cfg.order_bound`` on both subtori.

    With ``batched=True`` candidates are tested in numpy blocks against the
    defining characters of each subtorus (``k @ C == 0 mod N``); otherwise
    each candidate goes through :func:`membership`. The two paths agree, and
    the test suite checks that they do.
    """
    n = cfg.ambient_rank
    if A.ambient_rank != n or B.ambient_rank != n:
        raise AmbientMismatch("oracle ambient rank does not match the lattices")
    if cfg.size > cfg.ceiling:
        raise EnumerationTooLarge(f"{cfg.order_bound}^{n} = {cfg.size} candidates exceeds {cfg.ceiling}")
    N = cfg.order_bound

    if not batched:
        out = set()
        for start in _grid_chunks(N, n):
            for k in start.tolist():
                p = TorusPoint(tuple(Fraction(x, N) for x in k))
                if membership(p, A) and membership(p, B):
                    out.add(p)
        return out

    CA, CB = character_matrix(A).tolist(), character_matrix(B).tolist()
    C = [ra + rb for ra, rb in zip(CA, CB)] if n else []
    width = len(C[0]) if C else 0
    bound = max((abs(x) for row in C for x in row), default=0)
    if N * bound * max(n, 1) >= 2**62:  # pragma: no cover - desk-scale inputs never get here
        return brute_force_intersection(A, B, cfg, batched=False)
    Cn = np.array(C, dtype=np.int64).reshape(n, width)

    out = set()
    for K in _grid_chunks(N, n):
        if width:
            mask = ((K @ Cn) % N == 0).all(axis=1)
            K = K[mask]
        for k in K.tolist():
            out.add(TorusPoint(tuple(Fraction(x, N) for x in k)))
    return out


# --- Randomized equivalence suite -------------------------------------------


@dataclass
class CaseResult:
    index: int
    ambient_rank: int
    a_rows: list
    b_rows: list
    factors: tuple
    passed: bool
    detail: str = ""


@dataclass
class SuiteResult:
    seed: int
    cases: list[CaseResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)


def _random_primitive(rng: random.Random, k: int, n: int, bound: int) -> Optional[Sublattice]:
    rows = [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(k)]
    S = Sublattice(n, IntMatrix.from_rows(rows, cols=n))
    if S.rank != k or not is_primitive(S):
        return None
    return S


def random_transversal_pair(
    rng: random.Random,
    max_rank: int = 5,
    entry_bound: int = 3,
    ceiling: int = DEFAULT_CEILING,
) -> tuple[Sublattice, Sublattice]:
    """Draw a transversal pair of primitive lattices by rejection.

    Ranks are drawn with ``rank A + rank B`` in ``{n - 1, n}``, where the
    quotient has room for torsion. Draws whose generators are dependent,
    non-primitive or non-transversal are discarded, never repaired, as is
    any pair whose oracle grid at twice the group exponent would exceed
    ``ceiling``.
    """
    while True:
        n = rng.randint(1, max_rank)
        a = rng.randint(0, n)
        b = rng.randint(max(0, n - a - 1), n - a)
        A = _random_primitive(rng, a, n, entry_bound)
        if A is None:
            continue
        B = _random_primitive(rng, b, n, entry_bound)
        if B is None or not transversal(A, B):
            continue
        res = intersect_subtori(A, B)
        N = lcm(1, *res.group.invariant_factors)
        if (2 * N) ** n > ceiling:
            continue
        return A, B


def check_pair(A: Sublattice, B: Sublattice, ceiling: int = DEFAULT_CEILING) -> tuple[bool, tuple, str]:
    """Compare the constructive intersection with the oracle at ``N`` and ``2N``."""
    res = intersect_subtori(A, B)
    if not isinstance(res, Finite):
        return False, (), f"unexpected result {res!r}"
    group = res.group
    factors = group.invariant_factors
    problems = []
    for d, g in zip(factors, group.generators):
        if g.order() != d:
            problems.append(f"generator {g} has order {g.order()}, expected {d}")
        if not (membership(g, A) and membership(g, B)):
            problems.append(f"generator {g} is not on both subtori")
    generated = set(group.elements())
    if len(generated) != group.order:
        problems.append(f"generators span {len(generated)} points, expected {group.order}")
    N = lcm(1, *factors)
    n = A.ambient_rank
    at_n = brute_force_intersection(A, B, OracleConfig(N, n, ceiling))
    if at_n != generated:
        problems.append(f"oracle(N={N}) found {len(at_n)} points, construction {len(generated)}")
    at_2n = brute_force_intersection(A, B, OracleConfig(2 * N, n, ceiling))
    if at_2n != at_n:
        problems.append(f"oracle(2N={2 * N}) found {len(at_2n)} points vs {len(at_n)} at N")
    return not problems, factors, "; ".join(problems)


def run_oracle_suite(
    seed: int, cases: int = 200, max_rank: int = 5, entry_bound: int = 3, ceiling: int = DEFAULT_CEILING
) -> SuiteResult:
    rng = random.Random(seed)
    suite = SuiteResult(seed=seed)
    for i in range(cases):
        A, B = random_transversal_pair(rng, max_rank, entry_bound, ceiling)
        ok, factors, detail = check_pair(A, B, ceiling)
        suite.cases.append(
            CaseResult(i, A.ambient_rank, A.basis.tolist(), B.basis.tolist(), factors, ok, detail)
        )
    return suite
