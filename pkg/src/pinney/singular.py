"""Singular-point location for c > 0.

For c > 0 the radicand factors as u^2 - c v^2 = (u - sqrt(c) v)(u + sqrt(c) v),
and each factor is itself a solution of the linear pair equation, so its
zeros are simple and isolated (the factors cannot vanish together while the
Wronskian is nonzero). Sign-change bracketing on the dense output followed
by bisection is therefore reliable; the scan grid puts 8 points inside every
accepted integrator step, which cannot under-resolve oscillations the step
controller already resolved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .linode import DensePairSolution, integrate_pair_span
from .problem import DEFAULT_CONFIG, PinneyProblem, SolverConfig

_SCAN_PER_STEP = 8


@dataclass(frozen=True)
class SingularPoint:
    x: float
    factor: str  # 'minus' for u - sqrt(c) v, 'plus' for u + sqrt(c) v


@dataclass(frozen=True)
class SingularityReport:
    points: tuple[SingularPoint, ...]
    x_lo: float
    x_hi: float
    domain_lo: float  # open interval of validity containing x0
    domain_hi: float
    applicable: bool  # False when c < 0 (no search happens)


def bisect_root(f: Callable[[float], float], lo: float, hi: float,
                f_lo: float, tol: float) -> float:
    """Refine a bracketed sign change to width <= tol by bisection."""
    for _ in range(256):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if (f_lo < 0.0) != (f_mid < 0.0):
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    return 0.5 * (lo + hi)


def scan_for_roots(f: Callable[[float], float], grid: list[float],
                   tol: float) -> list[float]:
    """All sign-change roots of f on an ascending grid, bisection-refined."""
    roots: list[float] = []
    prev_x = grid[0]
    prev_f = f(prev_x)
    if prev_f == 0.0:
        roots.append(prev_x)
    for x in grid[1:]:
        fx = f(x)
        if fx == 0.0:
            roots.append(x)
        elif prev_f != 0.0 and (prev_f < 0.0) != (fx < 0.0):
            roots.append(bisect_root(f, prev_x, x, prev_f, tol))
        prev_x, prev_f = x, fx
    deduped: list[float] = []
    for r in roots:
        if not deduped or r - deduped[-1] > 10.0 * tol:
            deduped.append(r)
    return deduped


def _scan_grid(dense: DensePairSolution) -> list[float]:
    """Ascending grid with _SCAN_PER_STEP points per accepted step."""
    nodes = sorted({state.x for state in dense.accepted_states()})
    if len(nodes) == 1:
        return nodes
    grid = [nodes[0]]
    for left, right in zip(nodes, nodes[1:]):
        width = right - left
        for j in range(1, _SCAN_PER_STEP):
            grid.append(left + width * j / _SCAN_PER_STEP)
        grid.append(right)
    return grid


def scan_pair_factors(dense: DensePairSolution, c: float,
                      refine_tol: float) -> list[SingularPoint]:
    """Zeros of both radicand factors over a dense pair solution, sorted."""
    root_c = math.sqrt(c)
    grid = _scan_grid(dense)

    def w_minus(x: float) -> float:
        st = dense.eval(x)
        return st.u - root_c * st.v

    def w_plus(x: float) -> float:
        st = dense.eval(x)
        return st.u + root_c * st.v

    points = [SingularPoint(x, "minus")
              for x in scan_for_roots(w_minus, grid, refine_tol)]
    points += [SingularPoint(x, "plus")
               for x in scan_for_roots(w_plus, grid, refine_tol)]
    points.sort(key=lambda pt: pt.x)
    return points


def domain_around(x0: float, points, x_lo: float,
                  x_hi: float) -> tuple[float, float]:
    """Open validity interval: nearest singular points bracketing x0, or the
    search bounds where none exist on that side."""
    lo, hi = x_lo, x_hi
    for pt in points:
        x = pt.x if isinstance(pt, SingularPoint) else pt
        if x < x0 and x > lo:
            lo = x
        elif x > x0 and x < hi:
            hi = x
    return lo, hi


def find_singularities(problem: PinneyProblem, x_lo: float, x_hi: float,
                       config: SolverConfig = DEFAULT_CONFIG,
                       refine_tol: float = 1e-10) -> SingularityReport:
    """Locate singular points of the composed solution on [x_lo, x_hi].

    For c < 0 no singularity can exist (the radicand is a positive sum);
    the report comes back empty and flagged not applicable.
    """
    if problem.c < 0:
        return SingularityReport(
            points=(), x_lo=x_lo, x_hi=x_hi,
            domain_lo=x_lo, domain_hi=x_hi, applicable=False,
        )
    if not (x_lo <= problem.x0 <= x_hi):
        raise ValueError(f"x0={problem.x0!r} must lie in [{x_lo!r}, {x_hi!r}]")
    dense = integrate_pair_span(problem, x_lo, x_hi, config)
    points = scan_pair_factors(dense, problem.c, refine_tol)
    domain_lo, domain_hi = domain_around(problem.x0, points, x_lo, x_hi)
    return SingularityReport(
        points=tuple(points), x_lo=x_lo, x_hi=x_hi,
        domain_lo=domain_lo, domain_hi=domain_hi, applicable=True,
    )
