"""Exception types shared across the package."""


class GramisError(Exception):
    """Base class for errors raised by this package."""


class DimensionMismatch(GramisError, ValueError):
    """Operands disagree on dimension."""


class InvalidDimension(GramisError, ValueError):
    """A dimension argument is out of range."""


class InvalidParameter(GramisError, ValueError):
    """A scalar or array parameter violates its constraints."""


class NotPositiveDefinite(GramisError, ValueError):
    """A matrix required to be symmetric positive definite failed the pivot test."""


class AllNegInfinity(GramisError, ValueError):
    """A log-space reduction received no finite value."""


class NonSmoothAtMean(GramisError, ValueError):
    """Derivative of an unsmoothed generalized Gaussian requested exactly at its mean."""


class InvalidBox(GramisError, ValueError):
    """An initialization box has low > high in some coordinate."""


class NonFiniteGradient(GramisError, FloatingPointError):
    """A target gradient evaluated to a non-finite value."""


class DegenerateWeights(GramisError, ValueError):
    """Every importance weight in the set is zero."""


class DegenerateWeightsWarning(UserWarning):
    """A normalizing-constant estimate fell back to 0 because every weight was zero."""


class EmptyWindow(GramisError, ValueError):
    """Window selection produced no samples."""


class MissingTruth(GramisError, ValueError):
    """A ground-truth field needed for scoring is absent."""


class RequiresKnownZ(GramisError, ValueError):
    """The operation needs a target with a known normalizing constant."""
