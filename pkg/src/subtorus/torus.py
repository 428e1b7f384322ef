"""Torsion points of (C*)^n and intersections of rational subtori.

A torsion point is stored through its exponent vector ``q`` in ``[0, 1)^n``;
coordinate ``i`` stands for ``exp(2*pi*i*q_i)``. A subtorus is stored through
its tangent lattice ``A``: it is the image of ``A tensor C`` under the
coordinate-wise exponential, possibly multiplied by a torsion translation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm, prod
from typing import Iterable, Optional, Sequence, Union

from .errors import AmbientMismatch, InfiniteOrderTranslation, NotPrimitive
from .lattice import (
    IntMatrix,
    Sublattice,
    is_primitive,
    lattice_sum,
    saturate,
    snf,
    solve_integer,
)

Rational = Union[int, Fraction, str]

_NAMED_VALUES = {
    "1": Fraction(0),
    "-1": Fraction(1, 2),
    "i": Fraction(1, 4),
    "-i": Fraction(3, 4),
}
_VALUE_NAMES = {v: k for k, v in _NAMED_VALUES.items()}


def _fraction(x: Rational) -> Fraction:
    if isinstance(x, bool):
        raise TypeError("booleans are not exponents")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"exponent must be int, Fraction or 'num/den' string, got {type(x).__name__}")


@dataclass(frozen=True, order=True)
class TorusPoint:
    """A point of finite order in (C*)^n.

    Exponents are reduced mod 1 on construction, so two equal points always
    compare and hash equal.
    """

    exponents: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(_fraction(q) % 1 for q in self.exponents))

    @classmethod
    def identity(cls, n: int) -> "TorusPoint":
        return cls((Fraction(0),) * n)

    @classmethod
    def from_strings(cls, items: Iterable[str]) -> "TorusPoint":
        return cls(tuple(Fraction(s) for s in items))

    @classmethod
    def from_values(cls, items: Iterable[str]) -> "TorusPoint":
        """Parse coordinate values written as ``1``, ``-1``, ``i`` or ``-i``.

        Any other Gaussian integer is a legal point of C* but not a root of
        unity, so it is rejected as having infinite order.
        """
        out = []
        for tok in items:
            tok = tok.strip().replace(" ", "")
            if tok in _NAMED_VALUES:
                out.append(_NAMED_VALUES[tok])
                continue
            try:
                z = complex(tok.replace("i", "j"))
            except ValueError:
                raise ValueError(f"cannot parse torus coordinate {tok!r}") from None
            if z == 0:
                raise ValueError("0 is not a point of C*")
            raise InfiniteOrderTranslation(f"coordinate {tok} is not a root of unity")
        return cls(tuple(out))

    def __len__(self) -> int:
        return len(self.exponents)

    @property
    def dimension(self) -> int:
        return len(self.exponents)

    def __mul__(self, other: "TorusPoint") -> "TorusPoint":
        if len(self) != len(other):
            raise AmbientMismatch(f"points live in tori of rank {len(self)} and {len(other)}")
        return TorusPoint(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def inverse(self) -> "TorusPoint":
        return TorusPoint(tuple(-q for q in self.exponents))

    def __pow__(self, k: int) -> "TorusPoint":
        return TorusPoint(tuple(k * q for q in self.exponents))

    def order(self) -> int:
        return lcm(1, *(q.denominator for q in self.exponents))

    def is_identity(self) -> bool:
        return not any(self.exponents)

    def to_strings(self) -> list[str]:
        return [f"{q.numerator}/{q.denominator}" for q in self.exponents]

    def format_values(self) -> str:
        """Human form, e.g. ``(1,-1,-1,-1,1,1,1)``; other roots as ``e(p/q)``."""
        parts = [_VALUE_NAMES.get(q, f"e({q.numerator}/{q.denominator})") for q in self.exponents]
        return "(" + ",".join(parts) + ")"

    def __str__(self):
        return self.format_values()


def point_mul(p: TorusPoint, q: TorusPoint) -> TorusPoint:
    return p * q


def point_order(p: TorusPoint) -> int:
    return p.order()


def exp_point(v: Sequence[Rational]) -> TorusPoint:
    """Coordinate-wise ``t -> exp(2*pi*i*t)`` on a rational vector."""
    return TorusPoint(tuple(_fraction(x) for x in v))


@dataclass(frozen=True)
class SubtorusSpec:
    """The subtorus ``translation * exp(tangent tensor C)``."""

    tangent: Sublattice
    translation: Optional[TorusPoint] = None

    def __post_init__(self):
        n = self.tangent.ambient_rank
        if self.translation is None:
            object.__setattr__(self, "translation", TorusPoint.identity(n))
        elif not isinstance(self.translation, TorusPoint):
            raise InfiniteOrderTranslation(
                f"translation must be a torsion TorusPoint, got {type(self.translation).__name__}"
            )
        elif len(self.translation) != n:
            raise AmbientMismatch(f"translation has {len(self.translation)} coordinates, tangent lives in Z^{n}")

    @property
    def ambient_rank(self) -> int:
        return self.tangent.ambient_rank

    @property
    def translated(self) -> bool:
        return not self.translation.is_identity()


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Direct sum of cyclic groups ``Z/d`` with one torus generator per summand."""

    invariant_factors: tuple[int, ...]
    generators: tuple[TorusPoint, ...]
    ambient_rank: int

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    def elements(self) -> list[TorusPoint]:
        """All ``sum k_j * g_j`` with ``0 <= k_j < d_j``, sorted."""
        pts = set()
        ident = TorusPoint.identity(self.ambient_rank)
        for ks in itertools.product(*(range(d) for d in self.invariant_factors)):
            p = ident
            for k, g in zip(ks, self.generators):
                p = p * g**k
            pts.add(p)
        return sorted(pts)

    def describe(self) -> str:
        if not self.invariant_factors:
            return "trivial group"
        return " x ".join(f"Z/{d}" for d in self.invariant_factors)


# --- Intersection results ----------------------------------------------------


@dataclass(frozen=True)
class Finite:
    group: FiniteAbelianGroup
    kind = "finite"

    def points(self) -> list[TorusPoint]:
        return self.group.elements()


@dataclass(frozen=True)
class FiniteCoset:
    members: tuple[TorusPoint, ...]
    kind = "finite_coset"

    def points(self) -> list[TorusPoint]:
        return list(self.members)


@dataclass(frozen=True)
class Empty:
    kind = "empty"

    def points(self) -> list[TorusPoint]:
        return []


@dataclass(frozen=True)
class NonTransversal:
    overlap_rank: int
    kind = "non_transversal"

    def points(self) -> list[TorusPoint]:
        raise ValueError("a non-transversal intersection is positive dimensional")


IntersectionResult = Union[Finite, FiniteCoset, Empty, NonTransversal]


# --- Operations ----------------------------------------------------------------


def _check_ambient(A: Sublattice, B: Sublattice) -> None:
    if A.ambient_rank != B.ambient_rank:
        raise AmbientMismatch(f"ambient ranks differ: {A.ambient_rank} vs {B.ambient_rank}")


def overlap_rank(A: Sublattice, B: Sublattice) -> int:
    """``dim(V_A intersect V_B) = rank A + rank B - rank(A + B)``."""
    _check_ambient(A, B)
    return A.rank + B.rank - lattice_sum(A, B).rank


def transversal(A: Sublattice, B: Sublattice) -> bool:
    return overlap_rank(A, B) == 0


def membership(p: TorusPoint, S: Union[SubtorusSpec, Sublattice]) -> bool:
    """Decide ``p in translation * exp(V_A)`` exactly.

    With ``q`` the exponents of ``p / translation`` and ``D`` their common
    denominator, ``q`` lies in ``V_A + Z^n`` iff ``D*q = s @ F + D*z`` has an
    integer solution ``(s, z)``, where ``F`` is a basis of the saturation of
    ``A`` (saturation makes ``D*t`` integral for any rational witness ``t``).
    """
    if isinstance(S, Sublattice):
        S = SubtorusSpec(S)
    if len(p) != S.ambient_rank:
        raise AmbientMismatch(f"point has {len(p)} coordinates, subtorus lives in rank {S.ambient_rank}")
    q = (p * S.translation.inverse()).exponents
    n = len(q)
    den = lcm(1, *(x.denominator for x in q))
    target = [int(x * den) for x in q]
    F = saturate(S.tangent).basis
    system = F.stack(IntMatrix.from_rows([[den * int(i == j) for j in range(n)] for i in range(n)], cols=n))
    return solve_integer(system, target) is not None


def character_matrix(A: Sublattice) -> IntMatrix:
    """Integer matrix ``C`` (n x (n - rank A)) with ``exp(V_A) = {exp(q) : q @ C in Z}``.

    These are the defining characters of the subtorus, read off the Smith
    form of the generators. Used as a batched membership test.
    """
    sd = snf(A.generators)
    r = sd.rank
    V = sd.V.tolist()
    return IntMatrix.from_rows([row[r:] for row in V], cols=A.ambient_rank - r)


def _require_primitive(A: Sublattice, auto_saturate: bool, label: str) -> Sublattice:
    if is_primitive(A):
        return A
    if auto_saturate:
        return saturate(A)
    raise NotPrimitive(f"tangent lattice {label} is not primitive: {A!r}")


@dataclass(frozen=True)
class ThetaConstruction:
    """Intermediate data of the constructive isomorphism.

    ``divisors`` are ``d_1 | ... | d_b``; ``first_nontrivial`` is the 0-based
    index of the first ``d_j > 1`` (equal to ``b`` when all are 1).
    ``a_basis`` holds ``f_1..f_a``; ``lifts`` the normalized lifts ``e_j`` of
    the adapted basis of ``Z^n / A`` (all ``n - a`` of them); ``b_basis`` the
    basis ``g_1..g_b`` of ``B``; ``alpha[j]`` the coordinates of
    ``g_j - d_j e_j`` in ``f``, reduced into ``[0, d_j)``.
    """

    divisors: tuple[int, ...]
    first_nontrivial: int
    a_basis: IntMatrix
    lifts: IntMatrix
    b_basis: IntMatrix
    alpha: tuple[tuple[int, ...], ...]

    def generator(self, j: int) -> TorusPoint:
        """``theta`` of the j-th unit vector: ``exp(g_j / d_j) = exp(a_j / d_j)``."""
        d = self.divisors[j]
        F = self.a_basis
        vec = [
            Fraction(sum(self.alpha[j][i] * F[i, k] for i in range(F.rows)), d)
            for k in range(F.cols)
        ]
        return exp_point(vec)


def _normalize_lifts(lift: list[int], alpha: list[int], d: int, F: list[list[int]]):
    """Shift ``lift`` by an element of A so that ``0 <= alpha_i < d``."""
    lift = list(lift)
    reduced = []
    for i, a in enumerate(alpha):
        q, r = divmod(a, d)
        if q:
            lift = [x + q * f for x, f in zip(lift, F[i])]
        reduced.append(r)
    return lift, reduced


def theta_construction(A: Sublattice, B: Sublattice) -> ThetaConstruction:
    """Adapted bases for a transversal pair of primitive lattices.

    Steps: split ``Z^n = A + C`` with the Smith form of a basis of ``A``;
    project ``B`` to ``L' = Z^n / A`` in ``C``-coordinates; a Smith form of
    that projection gives the basis ``e'`` of ``L'`` and the basis ``g`` of
    ``B`` with ``g_j = d_j e'_j mod A``; lift and normalize.
    """
    _check_ambient(A, B)
    n = A.ambient_rank
    F = A.basis
    G = B.basis
    a, b = F.rows, G.rows

    split = snf(F)
    if split.factors != (1,) * a:
        raise NotPrimitive(f"A is not primitive: {A!r}")
    V = split.V.tolist()
    complement = split.V_inv.tolist()[a:]

    Gl = G.tolist()
    projected = [[sum(g[k] * V[k][j] for k in range(n)) for j in range(a, n)] for g in Gl]
    sp = snf(IntMatrix.from_rows(projected, cols=n - a))
    if sp.rank != b:
        raise ValueError("B meets the span of A; the pair is not transversal")
    d = sp.factors

    U2 = sp.U.tolist()
    g_rows = [[sum(U2[j][i] * Gl[i][k] for i in range(b)) for k in range(n)] for j in range(b)]
    e_prime = sp.V_inv.tolist()
    lifts = [
        [sum(ep[i] * complement[i][k] for i in range(n - a)) for k in range(n)] for ep in e_prime
    ]

    Fl = F.tolist()
    alpha = []
    for j in range(b):
        rest = [x - d[j] * y for x, y in zip(g_rows[j], lifts[j])]
        sol = solve_integer(F, rest)
        if sol is None:  # pragma: no cover - guaranteed by construction
            raise AssertionError("g_j - d_j e_j is not in A")
        lifts[j], coords = _normalize_lifts(lifts[j], sol[0], d[j], Fl)
        alpha.append(tuple(coords))

    m = next((j for j, x in enumerate(d) if x > 1), b)
    return ThetaConstruction(
        divisors=d,
        first_nontrivial=m,
        a_basis=F,
        lifts=IntMatrix.from_rows(lifts, cols=n),
        b_basis=IntMatrix.from_rows(g_rows, cols=n),
        alpha=tuple(alpha),
    )


def intersect_subtori(A: Sublattice, B: Sublattice, auto_saturate: bool = False) -> IntersectionResult:
    """Intersection of ``exp(V_A)`` and ``exp(V_B)``.

    For a transversal pair the result is the torsion of ``Z^n / (A + B)``
    realised inside the torus, with one generator of exact order ``d_j`` per
    invariant factor.
    """
    _check_ambient(A, B)
    A = _require_primitive(A, auto_saturate, "A")
    B = _require_primitive(B, auto_saturate, "B")
    overlap = overlap_rank(A, B)
    if overlap:
        return NonTransversal(overlap)
    th = theta_construction(A, B)
    m = th.first_nontrivial
    group = FiniteAbelianGroup(
        invariant_factors=th.divisors[m:],
        generators=tuple(th.generator(j) for j in range(m, len(th.divisors))),
        ambient_rank=A.ambient_rank,
    )
    return Finite(group)


def intersect_translated(S: SubtorusSpec, T: SubtorusSpec, auto_saturate: bool = False) -> IntersectionResult:
    """Intersection of two translated subtori, as an explicit list of points.

    A point ``x = rho_S exp(v_A) = rho_T exp(v_B)`` exists iff
    ``delta = q_T - q_S`` lies in ``V_A + V_B + Z^n``. With ``D`` the common
    denominator of ``delta`` and ``e`` the exponent of ``sat(A+B)/(A+B)``,
    that is the integer system ``e*D*delta = s_A F_A + s_B F_B + e*D*z``.
    All solutions form a coset of the untranslated intersection group.
    """
    _check_ambient(S.tangent, T.tangent)
    A = _require_primitive(S.tangent, auto_saturate, "S")
    B = _require_primitive(T.tangent, auto_saturate, "T")
    for spec in (S, T):
        if not isinstance(spec.translation, TorusPoint):
            raise InfiniteOrderTranslation("translation is not a torsion point")
    overlap = overlap_rank(A, B)
    if overlap:
        return NonTransversal(overlap)
    n = A.ambient_rank

    delta = (T.translation * S.translation.inverse()).exponents
    den = lcm(1, *(x.denominator for x in delta))
    FA, FB = A.basis, B.basis
    stacked = FA.stack(FB)
    e = max(snf(stacked).factors, default=1)
    scale = e * den
    system = stacked.stack(
        IntMatrix.from_rows([[scale * int(i == j) for j in range(n)] for i in range(n)], cols=n)
    )
    sol = solve_integer(system, [int(x * scale) for x in delta])
    if sol is None:
        return Empty()
    s_a = sol[0][: FA.rows]
    v_a = [Fraction(sum(s_a[i] * FA[i, k] for i in range(FA.rows)), scale) for k in range(n)]
    x0 = S.translation * exp_point(v_a)

    base = intersect_subtori(A, B)
    assert isinstance(base, Finite)
    points = tuple(sorted(x0 * h for h in base.group.elements()))
    return FiniteCoset(points)


def intersect(S: SubtorusSpec, T: SubtorusSpec, auto_saturate: bool = False) -> IntersectionResult:
    """Dispatch: group form for two untranslated subtori, coset form otherwise."""
    if S.translated or T.translated:
        return intersect_translated(S, T, auto_saturate)
    return intersect_subtori(S.tangent, T.tangent, auto_saturate)
