"""Exception types shared across the package."""


class PosmogramError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(PosmogramError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """Evaluation requested at (or numerically on top of) a pole."""


class ConvergenceError(PosmogramError, RuntimeError):
    """A series or iteration failed to reach the requested tolerance.

    Carries the achieved tolerance estimate in ``achieved`` and the
    requested one in ``target``.
    """

    def __init__(self, message, achieved=None, target=None):
        super().__init__(message)
        self.achieved = achieved
        self.target = target


class QuadratureError(ConvergenceError):
    """An oscillatory quadrature did not meet its error tolerances."""


def ensure_finite(value, what):
    """Raise DomainError if a scalar result contains NaN or Inf."""
    z = complex(value)
    if z.real != z.real or z.imag != z.imag or abs(z.real) == float("inf") or abs(z.imag) == float("inf"):
        raise DomainError(f"{what} produced a non-finite value: {value!r}")
    return value
