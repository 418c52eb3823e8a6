"""Exception hierarchy.

Validation problems derive from :class:`ValueError` so callers can catch them
generically; numerical failures derive from :class:`ArithmeticError`.
"""


class GaplineError(Exception):
    """Base class for all package errors."""


class ValidationError(GaplineError, ValueError):
    """Input violates a documented precondition."""


class NumericalError(GaplineError, ArithmeticError):
    """A numerical procedure failed to reach its target accuracy."""


class GapGeometryError(ValidationError):
    pass


class VanishingGapError(GapGeometryError):
    pass


class SpectrumViolationError(ValidationError):
    pass


class DimensionError(ValidationError):
    pass


class GapViolationError(ValidationError):
    """An eigenvalue sits on the splitting point, so the projector is undefined."""


class DomainError(ValidationError):
    pass


class ParameterError(ValidationError):
    pass


class ThresholdNotReachedError(NumericalError):
    """A curve never stays below the threshold on the sampled range."""


class ConvergenceError(NumericalError):
    pass


class QuadratureError(NumericalError):
    pass


class BoundViolationError(GaplineError):
    """Measured decay exceeded a rigorous bound."""
