"""Exception hierarchy for the sqso package."""


class SqsoError(Exception):
    """Base class for all package errors."""


class RationalParseError(SqsoError, ValueError):
    """Raised when a rational literal cannot be parsed."""


class DimensionError(SqsoError, ValueError):
    """Raised on incompatible matrix or vector shapes."""


class AdmissibilityError(SqsoError):
    """Raised when a pair's admissibility does not allow the requested operation."""


class InternalInconsistencyError(SqsoError):
    """A strict pair whose structure contradicts the determinant/identical-rows argument."""


class SimplexError(SqsoError, ValueError):
    """Raised when a point leaves the probability simplex."""


class NotVolterraError(SqsoError):
    """Raised when a tensor has a nonzero coefficient outside its parents' types."""


class UncertifiedError(SqsoError):
    """Raised when a Lyapunov certificate lacks the hypotheses that guarantee it."""


class InfeasibleLevelSetError(SqsoError):
    """The level-set system for an omega-limit estimate has no point on the simplex."""
