"""Exact integer matrix algebra over arbitrary-precision Python ints.

Row convention throughout: a matrix with ``k`` rows and ``n`` columns
describes ``k`` vectors of ``Z^n``, and the sublattice they generate is the
integer row span.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .errors import AmbientMismatch, MatrixParseError

__all__ = [
    "IntMatrix",
    "Sublattice",
    "SmithDecomposition",
    "QuotientInvariants",
    "hnf",
    "snf",
    "rank",
    "solve_integer",
    "saturate",
    "is_primitive",
    "lattice_sum",
    "quotient_invariants",
]


def _check_int(x) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise TypeError(f"matrix entries must be int, got {type(x).__name__}")
    return x


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix, entries stored row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        entries = tuple(_check_int(x) for x in self.entries)
        if len(entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, got {len(entries)}"
            )
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        """Build from a list of rows; ``cols`` is required when there are no rows."""
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise ValueError("cols must be given for a matrix without rows")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise ValueError(f"ragged matrix: expected {cols} columns, got {len(r)}")
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def parse_text(cls, text: str) -> "IntMatrix":
        """Parse the ``"rows cols"`` header format, one matrix row per line.

        Blank lines and ``#`` comments are ignored.
        """
        lines = []
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if line:
                lines.append(line)
        if not lines:
            raise MatrixParseError("empty matrix file")
        try:
            header = [int(tok) for tok in lines[0].split()]
        except ValueError as exc:
            raise MatrixParseError(f"bad header line {lines[0]!r}") from exc
        if len(header) != 2 or min(header) < 0:
            raise MatrixParseError(f"header must be 'rows cols', got {lines[0]!r}")
        nrows, ncols = header
        body = lines[1:]
        if len(body) != nrows:
            raise MatrixParseError(f"header declares {nrows} rows, found {len(body)}")
        data = []
        for line in body:
            try:
                row = [int(tok) for tok in line.split()]
            except ValueError as exc:
                raise MatrixParseError(f"non-integer entry in row {line!r}") from exc
            if len(row) != ncols:
                raise MatrixParseError(f"row {line!r} has {len(row)} entries, expected {ncols}")
            data.append(row)
        return cls.from_rows(data, cols=ncols)

    @classmethod
    def parse(cls, text: str) -> "IntMatrix":
        """Parse either the text format or a JSON matrix.

        JSON may be a non-empty list of integer rows, or an object with a
        ``"tangent"`` list plus ``"ambient_rank"`` (the component layout used
        by corpus files).
        """
        stripped = text.lstrip()
        if not stripped.startswith(("[", "{")):
            return cls.parse_text(text)
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MatrixParseError(f"invalid JSON: {exc}") from exc
        cols = None
        if isinstance(obj, dict):
            cols = obj.get("ambient_rank")
            obj = obj.get("tangent")
        if not isinstance(obj, list) or not all(isinstance(r, list) for r in obj):
            raise MatrixParseError("JSON matrix must be a list of integer rows")
        if not obj and cols is None:
            raise MatrixParseError("empty JSON matrix needs an ambient_rank")
        try:
            return cls.from_rows(obj, cols=cols)
        except (TypeError, ValueError) as exc:
            raise MatrixParseError(str(exc)) from exc

    def to_text(self) -> str:
        lines = [f"{self.rows} {self.cols}"]
        lines += [" ".join(str(x) for x in row) for row in self.tolist()]
        return "\n".join(lines) + "\n"

    def tolist(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows(
            [[self[i, j] for i in range(self.rows)] for j in range(self.cols)], cols=self.rows
        )

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        a, b = self.tolist(), other.tolist()
        bt = list(zip(*b)) if b else [()] * other.cols
        out = [[sum(x * y for x, y in zip(r, col)) for col in bt] for r in a]
        return IntMatrix.from_rows(out, cols=other.cols)

    def stack(self, other: "IntMatrix") -> "IntMatrix":
        """Rows of ``self`` followed by rows of ``other``."""
        if self.cols != other.cols:
            raise AmbientMismatch(f"cannot stack {self.cols}- and {other.cols}-column matrices")
        return IntMatrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        m = self.tolist()
        sign, prev = 1, 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k] != 0:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def is_zero(self) -> bool:
        return not any(self.entries)


def _as_matrix(M) -> IntMatrix:
    if isinstance(M, IntMatrix):
        return M
    return IntMatrix.from_rows(M)


def _eye(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


# --- Hermite normal form -----------------------------------------------------


def _hnf_lists(H: list[list[int]], ncols: int, track: bool = True):
    m = len(H)
    U = _eye(m) if track else None
    r = 0
    for c in range(ncols):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if H[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(H[i][c]))
            if p != r:
                H[p], H[r] = H[r], H[p]
                if track:
                    U[p], U[r] = U[r], U[p]
            piv = H[r][c]
            done = True
            for i in range(r + 1, m):
                if H[i][c]:
                    q = H[i][c] // piv
                    H[i] = [x - q * y for x, y in zip(H[i], H[r])]
                    if track:
                        U[i] = [x - q * y for x, y in zip(U[i], U[r])]
                    if H[i][c]:
                        done = False
            if done:
                break
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
            if track:
                U[r] = [-x for x in U[r]]
        piv = H[r][c]
        for i in range(r):
            q = H[i][c] // piv
            if q:
                H[i] = [x - q * y for x, y in zip(H[i], H[r])]
                if track:
                    U[i] = [x - q * y for x, y in zip(U[i], U[r])]
        r += 1
    return H, U, r


def hnf(M) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``U @ M == H``. Pivots of
    ``H`` are positive, entries above a pivot lie in ``[0, pivot)`` and zero
    rows come last, which makes ``H`` unique.
    """
    M = _as_matrix(M)
    H, U, _ = _hnf_lists(M.tolist(), M.cols)
    return IntMatrix.from_rows(H, cols=M.cols), IntMatrix.from_rows(U, cols=M.rows)


def rank(M) -> int:
    """Row rank over Q, counted as HNF pivots."""
    M = _as_matrix(M)
    return _hnf_lists(M.tolist(), M.cols, track=False)[2]


# --- Smith normal form -------------------------------------------------------


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ M @ V == D`` with ``D`` diagonal and ``factors`` its nonzero diagonal.

    ``V_inv`` is the exact inverse of ``V``; its rows form the adapted basis
    of ``Z^cols`` (the first ``len(factors)`` rows span the saturation of the
    row space of ``M``).
    """

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    V_inv: IntMatrix
    factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.factors)


def _snf_lists(M: list[list[int]], m: int, n: int):
    D = [list(r) for r in M]
    U = _eye(m)
    V = _eye(n)
    Vi = _eye(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(dst, src, q):  # row dst += q * row src
        D[dst] = [x + q * y for x, y in zip(D[dst], D[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col dst += q * col src
        for row in D:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]
        # inverse of the column operation acts on rows of V^{-1}
        Vi[src] = [x - q * y for x, y in zip(Vi[src], Vi[dst])]

    r = 0
    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                Di = D[i]
                for j in range(t, n):
                    x = Di[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                break
            _, pi, pj = best
            if pi != t:
                swap_rows(pi, t)
            if pj != t:
                swap_cols(pj, t)
            piv = D[t][t]
            clean = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // piv))
                    if D[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // piv))
                    if D[t][j]:
                        clean = False
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) if any(D[i][j] % piv for j in range(t + 1, n))),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if best is None:
            break
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        r += 1
    return D, U, V, Vi, r


def snf(M) -> SmithDecomposition:
    """Smith normal form with unimodular witnesses.

    Each round moves the smallest nonzero entry of the remaining block to the
    pivot position, so intermediate growth stays moderate; the invariant
    factors are unique regardless of pivot choice.
    """
    M = _as_matrix(M)
    D, U, V, Vi, r = _snf_lists(M.tolist(), M.rows, M.cols)
    return SmithDecomposition(
        U=IntMatrix.from_rows(U, cols=M.rows),
        D=IntMatrix.from_rows(D, cols=M.cols),
        V=IntMatrix.from_rows(V, cols=M.cols),
        V_inv=IntMatrix.from_rows(Vi, cols=M.cols),
        factors=tuple(D[i][i] for i in range(r)),
    )


# --- Solving -------------------------------------------------------------------


def solve_integer(M, b: Sequence[int]) -> Optional[tuple[list[int], IntMatrix]]:
    """Solve ``x @ M == b`` over the integers.

    ``b`` has one entry per column of ``M`` and ``x`` one per row. Returns
    ``(particular, kernel_basis)`` where the rows of ``kernel_basis`` are a
    Z-basis of ``{y : y @ M == 0}``, or ``None`` when no integer solution
    exists.
    """
    M = _as_matrix(M)
    b = [_check_int(x) for x in b]
    if len(b) != M.cols:
        raise ValueError(f"right-hand side has length {len(b)}, matrix has {M.cols} columns")
    sd = snf(M)
    Vl = sd.V.tolist()
    # x M = b  <=>  (x U^{-1}) D = b V
    c = [sum(b[k] * Vl[k][j] for k in range(M.cols)) for j in range(M.cols)]
    r = sd.rank
    if any(c[j] for j in range(r, M.cols)):
        return None
    y = []
    for j in range(r):
        q, rem = divmod(c[j], sd.factors[j])
        if rem:
            return None
        y.append(q)
    Ul = sd.U.tolist()
    x = [sum(y[j] * Ul[j][i] for j in range(r)) for i in range(M.rows)]
    kernel = IntMatrix.from_rows(Ul[r:], cols=M.rows)
    return x, kernel


# --- Sublattices ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Sublattice:
    """Sublattice of ``Z^ambient_rank`` spanned by the rows of ``generators``.

    Generators may be dependent. Equality compares the lattices themselves
    (via the Hermite basis), not the generator lists.
    """

    ambient_rank: int
    generators: IntMatrix
    rank: int = field(init=False)

    def __post_init__(self):
        if self.generators.cols != self.ambient_rank:
            raise AmbientMismatch(
                f"generators have {self.generators.cols} columns, ambient rank is {self.ambient_rank}"
            )
        object.__setattr__(self, "rank", rank(self.generators))

    @classmethod
    def span(cls, vectors: Iterable[Sequence[int]], ambient_rank: Optional[int] = None) -> "Sublattice":
        M = IntMatrix.from_rows(vectors, cols=ambient_rank)
        return cls(M.cols, M)

    @classmethod
    def zero(cls, n: int) -> "Sublattice":
        return cls(n, IntMatrix.zeros(0, n))

    @classmethod
    def full(cls, n: int) -> "Sublattice":
        return cls(n, IntMatrix.identity(n))

    @cached_property
    def basis(self) -> IntMatrix:
        """Canonical Z-basis: the nonzero rows of the Hermite form."""
        H, _, r = _hnf_lists(self.generators.tolist(), self.ambient_rank, track=False)
        return IntMatrix.from_rows(H[:r], cols=self.ambient_rank)

    def __contains__(self, v: Sequence[int]) -> bool:
        return solve_integer(self.basis, list(v)) is not None

    def __eq__(self, other):
        if not isinstance(other, Sublattice):
            return NotImplemented
        return self.ambient_rank == other.ambient_rank and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_rank, self.basis))

    def __repr__(self):
        return f"Sublattice(n={self.ambient_rank}, rank={self.rank}, basis={self.basis.tolist()})"


def saturate(S: Sublattice) -> Sublattice:
    """Primitive closure ``(S tensor Q) intersect Z^n``, returned in Hermite basis form."""
    sd = snf(S.generators)
    rows = sd.V_inv.tolist()[: sd.rank]
    return Sublattice(S.ambient_rank, Sublattice.span(rows, S.ambient_rank).basis)


def is_primitive(S: Sublattice) -> bool:
    return all(d == 1 for d in snf(S.generators).factors)


def lattice_sum(S: Sublattice, T: Sublattice) -> Sublattice:
    if S.ambient_rank != T.ambient_rank:
        raise AmbientMismatch(f"ambient ranks differ: {S.ambient_rank} vs {T.ambient_rank}")
    return Sublattice(S.ambient_rank, S.generators.stack(T.generators))


@dataclass(frozen=True)
class QuotientInvariants:
    free_rank: int
    torsion_factors: tuple[int, ...]

    @property
    def torsion_order(self) -> int:
        out = 1
        for d in self.torsion_factors:
            out *= d
        return out


def quotient_invariants(S: Sublattice) -> QuotientInvariants:
    """Structure of ``Z^n / S`` as free rank plus torsion invariant factors."""
    factors = snf(S.generators).factors
    return QuotientInvariants(
        free_rank=S.ambient_rank - len(factors),
        torsion_factors=tuple(d for d in factors if d > 1),
    )
