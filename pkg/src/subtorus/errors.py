"""Exception types shared across the package."""


class SubtorusError(Exception):
    """Base class for computational errors (CLI exit code 1)."""


class AmbientMismatch(SubtorusError, ValueError):
    """Two objects live in integer lattices of different rank."""


class NotPrimitive(SubtorusError, ValueError):
    """A tangent lattice has torsion in its quotient and saturation was not requested."""


class InfiniteOrderTranslation(SubtorusError, ValueError):
    """A translation point is not a root of unity in every coordinate."""


class EnumerationTooLarge(SubtorusError, ValueError):
    """The brute-force candidate space exceeds the configured ceiling."""


class MatrixParseError(ValueError):
    """Malformed matrix text or JSON input (CLI exit code 2)."""
