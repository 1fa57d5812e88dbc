"""Exception hierarchy shared by every numerical module."""

from typing import Optional


class StrichartzError(Exception):
    """Base class for all errors raised by the toolkit."""


class DomainError(StrichartzError, ValueError):
    """A parameter lies outside the domain of a formula (Γ pole, bad order, ...)."""


class DivergenceError(StrichartzError, ArithmeticError):
    """Declared asymptotics make the requested integral infinite."""


class ConfigError(StrichartzError, ValueError):
    """Invalid configuration file entry or experiment parameter."""


class QuadratureAccuracyError(StrichartzError, ArithmeticError):
    """Quadrature or differentiation failed to reach the requested tolerance.

    Attributes:
        estimate: Best available estimate (scalar or array)
        error_bound: Estimated absolute error of that estimate
    """

    def __init__(self, message: str, estimate=None, error_bound: Optional[float] = None):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound
