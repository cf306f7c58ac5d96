"""Problem definition, validation, and the shared sample/config types."""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

from .coeffs import CoefficientSpec, eval_coefficient, parse_coefficient
from .errors import NonFiniteError, ZeroCError, ZeroInitialValueError

#: Recognized solve methods.
METHODS = ("auto", "superposition", "closed_form", "direct")


@dataclass(frozen=True)
class PinneyProblem:
    """One instance of y'' + a(x) y + c/y^3 = 0 with y(x0) = q, y'(x0) = p.

    Construction validates the hypotheses the solution formula needs:
    c != 0, q != 0, and finite data. The sign branch of the solution is
    fixed globally by the sign of q.
    """

    coeff: CoefficientSpec
    c: float
    x0: float
    q: float
    p: float

    def __post_init__(self):
        for name in ("c", "x0", "q", "p"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise NonFiniteError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.coeff.a0 is not None and not math.isfinite(self.coeff.a0):
            raise NonFiniteError(f"a0 must be finite, got {self.coeff.a0!r}")
        if self.c == 0.0:
            raise ZeroCError("c = 0 reduces to the linear equation; not handled here")
        if self.q == 0.0:
            raise ZeroInitialValueError("q = 0 makes c/y^3 undefined at x0")

    @property
    def branch_sign(self) -> float:
        """+1 for q > 0, -1 for q < 0; applied uniformly to every sample."""
        return 1.0 if self.q > 0 else -1.0

    @property
    def is_constant(self) -> bool:
        return self.coeff.is_constant

    @property
    def a0(self) -> float | None:
        return self.coeff.a0

    def a(self, x: float) -> float:
        return eval_coefficient(self.coeff, x)


def validate_problem(coeff, c: float, x0: float, q: float, p: float) -> PinneyProblem:
    """Build a validated problem.

    ``coeff`` may be a CoefficientSpec, an expression string, or a plain
    number (taken as a constant coefficient).
    """
    if isinstance(coeff, str):
        coeff = parse_coefficient(coeff)
    elif isinstance(coeff, (int, float)):
        if not math.isfinite(coeff):
            raise NonFiniteError(f"a0 must be finite, got {coeff!r}")
        coeff = CoefficientSpec.constant(coeff)
    elif not isinstance(coeff, CoefficientSpec):
        raise TypeError(f"coeff must be a spec, string, or number: {coeff!r}")
    return PinneyProblem(coeff=coeff, c=c, x0=x0, q=q, p=p)


def equilibrium_solution(a0: float, c: float) -> float | None:
    """Positive stationary value y* with a0*y* + c/y*^3 = 0, if one exists.

    Exists iff a0 != 0 and -c/a0 > 0; then y* = (-c/a0)^(1/4) and the
    constant functions +/- y* solve the equation.
    """
    if not (math.isfinite(a0) and math.isfinite(c)):
        raise NonFiniteError("a0 and c must be finite")
    if a0 == 0.0 or c == 0.0:
        return None
    ratio = -c / a0
    if ratio <= 0.0:
        return None
    return ratio ** 0.25


@dataclass(frozen=True)
class SolutionSample:
    """A single (x, y, y') point plus the method that produced it.

    ``low_confidence`` flags samples composed from a discriminant below
    abs_tol^2, where the square root amplifies error.
    """

    x: float
    y: float
    dy: float
    method: str
    low_confidence: bool = False


@dataclass(frozen=True)
class SolverConfig:
    """Adaptive-integration knobs shared by the pair and direct integrators."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = 1.0
    initial_step: float = 0.01
    singularity_floor: float = 1e-8

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "max_step", "initial_step",
                     "singularity_floor"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value)
                    and value > 0):
                raise ValueError(f"{name} must be finite and > 0, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.rel_tol < 10 * sys.float_info.epsilon:
            raise ValueError(
                f"rel_tol must be >= 10*eps, got {self.rel_tol!r}"
            )


DEFAULT_CONFIG = SolverConfig()
