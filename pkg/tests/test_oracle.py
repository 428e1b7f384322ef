import random
from fractions import Fraction

import pytest

import subtorus.torus as torus
from subtorus.errors import EnumerationTooLarge
from subtorus.lattice import Sublattice, is_primitive
from subtorus.oracle import (
    OracleConfig,
    brute_force_intersection,
    random_transversal_pair,
    run_oracle_suite,
)
from subtorus.torus import TorusPoint, transversal

E8 = Sublattice.span([[1, 0, -1, -1, 0, 1, 0], [0, 1, -1, -1, 0, 0, 0]])
E9 = Sublattice.span([[0, -1, -1, 0, 1, 1, 0], [0, 1, 1, -1, 0, 0, 0]])
h = Fraction(1, 2)


def test_axes():
    got = brute_force_intersection(Sublattice.span([[1, 0]]), Sublattice.span([[0, 1]]), OracleConfig(6, 2))
    assert got == {TorusPoint.identity(2)}


def test_diagonals():
    A, B = Sublattice.span([[1, 1]]), Sublattice.span([[1, -1]])
    assert brute_force_intersection(A, B, OracleConfig(2, 2)) == {TorusPoint.identity(2), TorusPoint((h, h))}


def test_deleted_b3():
    rho_w = TorusPoint((0, h, h, h, 0, 0, 0))
    assert brute_force_intersection(E8, E9, OracleConfig(2, 7)) == {TorusPoint.identity(7), rho_w}


def test_ceiling():
    with pytest.raises(EnumerationTooLarge):
        brute_force_intersection(E8, E9, OracleConfig(11, 7))
    with pytest.raises(EnumerationTooLarge):
        brute_force_intersection(E8, E9, OracleConfig(2, 7, ceiling=100))


@pytest.mark.parametrize("seed", range(12))
def test_batched_matches_membership(seed):
    rng = random.Random(seed)
    A, B = random_transversal_pair(rng, max_rank=3, ceiling=10**3)
    n = A.ambient_rank
    for N in (1, 2, 3, 4, 6):
        cfg = OracleConfig(N, n)
        assert brute_force_intersection(A, B, cfg) == brute_force_intersection(A, B, cfg, batched=False)


@pytest.mark.parametrize("seed", range(12))
def test_monotone_under_divisibility(seed):
    A, B = random_transversal_pair(random.Random(seed), max_rank=3, ceiling=10**3)
    n = A.ambient_rank
    small = brute_force_intersection(A, B, OracleConfig(2, n))
    big = brute_force_intersection(A, B, OracleConfig(6, n))
    assert TorusPoint.identity(n) in small
    assert small <= big


def test_random_pairs_respect_rejection_rules():
    rng = random.Random(7)
    for _ in range(50):
        A, B = random_transversal_pair(rng)
        assert A.ambient_rank <= 5
        assert is_primitive(A) and is_primitive(B)
        assert transversal(A, B)
        assert all(abs(x) <= 3 for x in A.generators.entries + B.generators.entries)


def test_suite_is_deterministic():
    first = run_oracle_suite(seed=1234, cases=25)
    second = run_oracle_suite(seed=1234, cases=25)
    assert [(c.a_rows, c.b_rows, c.factors) for c in first.cases] == [
        (c.a_rows, c.b_rows, c.factors) for c in second.cases
    ]
    assert first.passed


def test_mutated_lift_normalization_is_caught(monkeypatch):
    original = torus._normalize_lifts

    def off_by_one(lift, alpha, d, F):
        lift, reduced = original(lift, alpha, d, F)
        if reduced:
            reduced = [(reduced[0] + 1) % d] + reduced[1:]
        return lift, reduced

    monkeypatch.setattr(torus, "_normalize_lifts", off_by_one)
    suite = run_oracle_suite(seed=0, cases=200)
    assert not suite.passed
