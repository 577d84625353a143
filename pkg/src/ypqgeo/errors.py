"""Exception types shared across the package."""


class YpqError(Exception):
    """Base class for all package-specific errors."""


class SingularMetric(YpqError):
    """Metric matrix is numerically singular (reciprocal condition < 1e-10)."""


class DegreeMismatch(YpqError):
    """Operation received forms whose degrees are incompatible."""


class DegreeOverflow(YpqError):
    """Resulting form degree would exceed the chart dimension."""


class NotKilling(YpqError):
    """A fit assumed a Killing(-Yano) property that the input does not satisfy."""


class NotCoprime(YpqError):
    """Integer pair (p, q) is not coprime."""


class OutOfRange(YpqError):
    """Integer pair (p, q) violates p > q > 0."""


class OutOfChart(YpqError):
    """Point lies outside the open coordinate chart."""


class PoleSingularity(YpqError):
    """Quantity undefined where sin(theta) vanishes."""


class ToricDomainError(YpqError):
    """Moment point violates the positivity domain of the symplectic potential."""


class NewtonDivergence(YpqError):
    """Newton iteration failed to converge."""


class StepFailure(YpqError):
    """Adaptive integrator step size underflowed."""
