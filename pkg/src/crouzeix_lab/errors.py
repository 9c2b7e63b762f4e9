"""Exception types raised by the library."""


class LabError(Exception):
    """Base class for every error raised by crouzeix_lab."""


class InvalidParameter(LabError, ValueError):
    pass


class InvalidGrid(LabError, ValueError):
    pass


class InvalidProfile(LabError, ValueError):
    pass


class InvalidPolynomial(LabError, ValueError):
    pass


class NotOdd(LabError, ValueError):
    pass


class OutOfDomain(LabError, ValueError):
    pass


class HypothesisViolated(LabError, ValueError):
    pass


class DegenerateRange(LabError, ValueError):
    pass


class NoConvergence(LabError, ArithmeticError):
    """An iteration hit its cap. ``residual`` holds the last residual seen."""

    def __init__(self, message, residual=float("nan")):
        super().__init__(message)
        self.residual = residual


class InternalConsistency(LabError, AssertionError):
    """A computed result violates a guarantee the code is supposed to uphold."""
