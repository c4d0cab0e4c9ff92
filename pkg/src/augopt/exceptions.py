"""Exception hierarchy shared by every part of the package."""

from __future__ import annotations


class AugoptError(Exception):
    """Base class for all errors raised by augopt."""


class ValidationError(AugoptError, ValueError):
    """A parameter or input violates one of its invariants.

    The offending field name is kept in ``field`` so callers (and the CLI)
    can point at it.
    """

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class ParseError(AugoptError, ValueError):
    """A scenario document or CSV file could not be parsed."""


class LengthMismatchError(AugoptError, ValueError):
    """A control schedule does not have the length the horizon requires."""


class InfeasibleRegimeError(AugoptError, ArithmeticError):
    """Predation removed more than the whole prey stock (``delta1 * v > 1``).

    ``steps`` lists the offending time indices.
    """

    def __init__(self, steps, message: str | None = None):
        self.steps = tuple(steps)
        super().__init__(
            message or f"delta1 * v exceeds 1 at step(s) {list(self.steps)}"
        )


class NotConvergedError(AugoptError, RuntimeError):
    """An iterative solver hit its iteration cap.

    The last iterate is attached as ``result`` so nothing is lost.
    """

    def __init__(self, result, message: str | None = None):
        self.result = result
        super().__init__(
            message
            or f"solver did not converge after {result.iterations} iterations"
        )
