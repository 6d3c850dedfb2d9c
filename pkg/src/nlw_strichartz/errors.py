"""Exception hierarchy shared by every module of the package."""


class LabError(Exception):
    """Base class for all errors raised by :mod:`nlw_strichartz`."""


class DomainError(LabError, ValueError):
    """An argument lies outside the domain of the operation."""


class AccuracyError(LabError, ArithmeticError):
    """A quadrature or finite-difference estimate failed its accuracy check."""


class InvariantError(LabError, ValueError):
    """An input violates a structural invariant (e.g. swap-oddness)."""


class DivergenceError(LabError, ArithmeticError):
    """A fixed-point iteration stopped with growing updates."""


class NumericError(LabError, ArithmeticError):
    """Non-finite values appeared in a computation."""


class ConfigError(LabError, ValueError):
    """Invalid configuration of a sweep or solver."""
