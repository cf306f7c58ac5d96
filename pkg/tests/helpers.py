"""Shared test utilities: an independent fixed-grid RK4 oracle, grids, and
the canonical problem/fixture tables used by both the unit and acceptance
suites."""

from __future__ import annotations

import math

from pinney import parse_coefficient, validate_problem
from pinney.errors import (
    EvalDomainError,
    ExpressionSyntaxError,
    UnknownIdentifierError,
)


def rk4_fixed(f, x0: float, y0, x1: float, n: int):
    """Classic fixed-step RK4 on a first-order system; the independent
    reference the adaptive integrator is checked against."""
    h = (x1 - x0) / n
    y = tuple(y0)
    for i in range(n):
        x = x0 + i * h
        k1 = f(x, y)
        k2 = f(x + 0.5 * h, tuple(a + 0.5 * h * b for a, b in zip(y, k1)))
        k3 = f(x + 0.5 * h, tuple(a + 0.5 * h * b for a, b in zip(y, k2)))
        k4 = f(x + h, tuple(a + h * b for a, b in zip(y, k3)))
        y = tuple(a + (h / 6.0) * (p + 2.0 * q + 2.0 * r + s)
                  for a, p, q, r, s in zip(y, k1, k2, k3, k4))
    return y


def pair_rhs(problem):
    """First-order RHS of the (u, du, v, dv) system for rk4_fixed."""

    def f(x, s):
        a = problem.a(x)
        return (s[1], -a * s[0], s[3], -a * s[2])

    return f


def midcell_grid(lo: float, hi: float, n: int) -> list[float]:
    """n points strictly inside (lo, hi), cell midpoints of a uniform split."""
    width = (hi - lo) / n
    return [lo + (i + 0.5) * width for i in range(n)]


def suite_problems():
    """The acceptance-suite problems, with the sampling range each uses for
    oracle comparisons (chosen inside the domain of validity and away from
    severe hyperbolic growth so absolute tolerances stay meaningful)."""
    rows = [
        ("trig_rest", 1.0, 1.0, 1.0, 0.0, (0.0, 0.7)),
        ("trig_moving", 1.0, 1.0, 1.0, 1.0, (-0.3, 1.4)),
        ("equilibrium", -1.0, 1.0, 1.0, 0.0, (0.0, 10.0)),
        ("flat", 0.0, -1.0, 1.0, 0.0, (0.0, 3.0)),
        ("sin_modulated", "1+0.5*sin(x)", -1.0, 1.0, 0.0, (0.0, 10.0)),
        ("airy", "x", -2.0, 2.0, -1.0, (0.0, 5.0)),
    ]
    return [
        (name, validate_problem(coeff, c=c, x0=0.0, q=q, p=p), rng)
        for name, coeff, c, q, p, rng in rows
    ]


# (text, kind, expected) where kind is one of:
#   'const'  -> folded constant, expected value
#   'eval'   -> (x, expected value) pairs
#   'error'  -> expected exception type at parse time
#   'eval_error' -> (x, expected exception type)
PARSER_FIXTURES = [
    ("1", "const", 1.0),
    ("-2.5", "const", -2.5),
    ("2^3^2", "const", 512.0),
    ("(2^3)^2", "const", 64.0),
    ("2*3+4", "const", 10.0),
    ("2+3*4", "const", 14.0),
    ("-2^2", "const", -4.0),
    ("(-2)^2", "const", 4.0),
    ("2^-1", "const", 0.5),
    ("1.5e-3", "const", 0.0015),
    ("2E+2", "const", 200.0),
    ("tanh(0)", "const", 0.0),
    ("abs(-3)", "const", 3.0),
    ("1 + 0.5*sin(x)", "eval", [(0.0, 1.0), (math.pi / 2.0, 1.5)]),
    ("x^2", "eval", [(3.0, 9.0), (-2.0, 4.0)]),
    (".5*x", "eval", [(2.0, 1.0)]),
    ("exp(x)*cos(x)", "eval", [(0.0, 1.0)]),
    ("sqrt(x)", "eval", [(4.0, 2.0)]),
    ("foo(x)", "error", UnknownIdentifierError),
    ("y+1", "error", UnknownIdentifierError),
    ("1+", "error", ExpressionSyntaxError),
    ("(1+2", "error", ExpressionSyntaxError),
    ("sin", "error", ExpressionSyntaxError),
    ("1 2", "error", ExpressionSyntaxError),
    ("(-2)^0.5", "error", EvalDomainError),
    ("1/(x-1)", "eval_error", (1.0, EvalDomainError)),
    ("sqrt(x)", "eval_error", (-1.0, EvalDomainError)),
]


def random_valid_problem(rng):
    """Draw one random valid problem; half constant, half expression."""
    c = float(rng.uniform(0.1, 3.0)) * (1 if rng.random() < 0.5 else -1)
    q = float(rng.uniform(0.1, 3.0)) * (1 if rng.random() < 0.5 else -1)
    p = float(rng.uniform(-3.0, 3.0))
    x0 = float(rng.uniform(-2.0, 2.0))
    if rng.random() < 0.5:
        coeff = parse_coefficient(repr(float(rng.uniform(-3.0, 3.0))))
    else:
        scale = float(rng.uniform(0.2, 1.5))
        coeff = parse_coefficient(f"{scale!r}*(1+0.5*sin(x))")
    return validate_problem(coeff, c=c, x0=x0, q=q, p=p)
