"""Exception types raised by the package."""


class PelletError(Exception):
    """Base class for all errors raised here."""


class InvalidInputError(PelletError, ValueError):
    """Input violates a documented precondition."""


class InvalidStartError(InvalidInputError):
    """A starting point lies outside [r, R] (phi is positive there)."""


class SingularMatrixError(PelletError, ValueError):
    """A coefficient matrix that must be inverted is singular to working precision."""


class ConvergenceError(PelletError, RuntimeError):
    """An iteration hit its cap before meeting its stopping rule.

    ``bracket`` holds the last interval known to contain the target, when
    the iteration maintains one.
    """

    def __init__(self, message, bracket=None, iterations=None):
        super().__init__(message)
        self.bracket = bracket
        self.iterations = iterations
