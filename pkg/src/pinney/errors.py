"""Exception types shared across the toolkit."""


class PinneyError(Exception):
    """Base class for every error raised by this package."""


class ZeroCError(PinneyError):
    """c = 0 degenerates the equation to its linear part; refuse to solve it here."""


class ZeroInitialValueError(PinneyError):
    """q = 0 makes the c/y^3 term undefined at the initial point."""


class NonFiniteError(PinneyError):
    """A NaN or infinity was passed where a finite number is required."""


class ExpressionSyntaxError(PinneyError):
    """Malformed coefficient expression.

    ``position`` is the 1-based character index of the offending token.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (position {position})")
        self.position = position


class UnknownIdentifierError(ExpressionSyntaxError):
    """Identifier other than ``x`` or the supported function names."""

    def __init__(self, name: str, position: int):
        super().__init__(f"unknown identifier {name!r}", position)
        self.name = name


class EvalDomainError(PinneyError):
    """Expression evaluation left the real domain (division by zero, sqrt of
    a negative, non-finite result)."""

    def __init__(self, message: str, x: float):
        super().__init__(f"{message} at x={x!r}")
        self.x = x


class CoefficientEvalFailedError(PinneyError):
    """The coefficient a(x) could not be evaluated during an integration."""

    def __init__(self, x: float, reason: str = ""):
        detail = f": {reason}" if reason else ""
        super().__init__(f"coefficient evaluation failed at x={x!r}{detail}")
        self.x = x


class StepSizeCollapseError(PinneyError):
    """The adaptive step fell below the resolvable floor; the coefficient is
    too wild for the requested tolerances."""

    def __init__(self, x: float):
        super().__init__(f"step size collapsed near x={x!r}")
        self.x = x


class OutOfRangeError(PinneyError):
    """Evaluation point outside the interval covered by a dense solution."""


class SingularOrInvalidError(PinneyError):
    """The superposition radicand u^2 - c v^2 is not positive at this point."""

    def __init__(self, x: float, discriminant: float):
        super().__init__(
            f"discriminant {discriminant!r} is not positive at x={x!r}"
        )
        self.x = x
        self.discriminant = discriminant


class MethodUnavailableError(PinneyError):
    """Requested solve method does not apply to this problem."""


class NotApplicableError(PinneyError):
    """Operation requires a constant coefficient (or c of the other sign)."""
