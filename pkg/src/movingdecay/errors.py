"""Exception hierarchy shared by the library and the command line driver."""


class MovingDecayError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(MovingDecayError, ValueError):
    """An argument lies outside the domain of the operation."""


class ConfigError(MovingDecayError, ValueError):
    """A density, preparation or run configuration is invalid."""


class ConvergenceError(MovingDecayError, RuntimeError):
    """Adaptive quadrature exhausted its panel budget.

    The best available estimate and its error bound are kept on the
    exception so callers can decide whether to use them anyway.
    """

    def __init__(self, message, value=None, error_estimate=None, panels_used=None):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate
        self.panels_used = panels_used


class FitError(MovingDecayError, RuntimeError):
    """A lifetime fit or window scan could not be performed."""
