"""Exception hierarchy shared by all udw modules."""


class UDWError(Exception):
    """Base class for every error raised by udw."""


class DomainError(UDWError, ValueError):
    """Input outside the domain of an operation (wrong wedge, a <= 0, ...)."""


class RigidityError(DomainError):
    """A rigid accelerating cavity whose rear wall would cross the Rindler horizon."""


class UsageError(UDWError, ValueError):
    """An operation was called with an incompatible configuration."""


class AccuracyError(UDWError, ArithmeticError):
    """A numerical routine could not reach its accuracy contract.

    Attributes
    ----------
    abs_err_est : float
        Best available estimate of the absolute error of the rejected value.
    value : float or complex or None
        The value that failed the check, if one was produced.
    """

    def __init__(self, message, abs_err_est=float("nan"), value=None):
        super().__init__(message)
        self.abs_err_est = abs_err_est
        self.value = value


class SpectrumError(UDWError):
    """Eigenvalue search missed or duplicated a root."""


class ConfigError(UDWError, ValueError):
    """Malformed or invalid configuration file; carries the offending line."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class PerturbativeWarning(UserWarning):
    """Leading-order probability is too large for perturbation theory to be trusted."""
