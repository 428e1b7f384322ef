"""Exact intersections of rational subtori of the algebraic torus (C*)^n."""

__version__ = "0.1.0"

from .errors import (
    AmbientMismatch,
    EnumerationTooLarge,
    InfiniteOrderTranslation,
    MatrixParseError,
    NotPrimitive,
    SubtorusError,
)
from .lattice import (
    IntMatrix,
    QuotientInvariants,
    SmithDecomposition,
    Sublattice,
    hnf,
    is_primitive,
    lattice_sum,
    quotient_invariants,
    rank,
    saturate,
    snf,
    solve_integer,
)
from .torus import (
    Empty,
    Finite,
    FiniteAbelianGroup,
    FiniteCoset,
    NonTransversal,
    SubtorusSpec,
    TorusPoint,
    exp_point,
    intersect,
    intersect_subtori,
    intersect_translated,
    membership,
    point_mul,
    point_order,
    transversal,
)
