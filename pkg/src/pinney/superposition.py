"""Composition of the nonlinear solution y = +/- sqrt(u^2 - c v^2).

The sign branch is the sign of q, fixed once per problem. The derivative
comes from the algebraic identity y y' = u u' - c v v' rather than any
numerical differentiation, and the second derivative needed by the
residual check follows from differentiating that identity once more and
substituting u'' = -a u, v'' = -a v:

    y'' = ((u'^2 - c v'^2) - a y^2 - y'^2) / y

so the defect r = y'' + a y + c/y^3 equals -c (W^2 - 1)/y^3 with
W = u' v - u v', and vanishes identically in exact arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constcoeff import ClosedFormPair, closed_form_pair, y_from_z, z_closed_form
from .errors import MethodUnavailableError, SingularOrInvalidError
from .linode import FundamentalPairState, integrate_pair_span
from .problem import (
    DEFAULT_CONFIG,
    METHODS,
    PinneyProblem,
    SolutionSample,
    SolverConfig,
)
from .singular import SingularPoint, domain_around, scan_for_roots, scan_pair_factors

#: Bisection width used when refining truncation points for reporting.
_TRUNC_REFINE = 1e-12


@dataclass(frozen=True)
class Discriminant:
    """The radicand u^2 - c v^2 at one point."""

    x: float
    value: float


def discriminant(state: FundamentalPairState, c: float) -> Discriminant:
    return Discriminant(state.x, state.u * state.u - c * state.v * state.v)


def compose_solution(state: FundamentalPairState, c: float,
                     branch_sign: float, *,
                     abs_tol: float = DEFAULT_CONFIG.abs_tol) -> SolutionSample:
    """Compose one sample from a pair state; branch_sign must be sign(q)."""
    disc = state.u * state.u - c * state.v * state.v
    if disc <= 0.0:
        raise SingularOrInvalidError(state.x, disc)
    y = branch_sign * math.sqrt(disc)
    dy = (state.u * state.du - c * state.v * state.dv) / y
    return SolutionSample(
        x=state.x, y=y, dy=dy, method="superposition",
        low_confidence=disc < abs_tol * abs_tol,
    )


def residual(state: FundamentalPairState, a_at_x: float, c: float,
             branch_sign: float) -> float:
    """Defect y'' + a y + c/y^3 of the composed solution at one state."""
    disc = state.u * state.u - c * state.v * state.v
    if disc <= 0.0:
        raise SingularOrInvalidError(state.x, disc)
    y = branch_sign * math.sqrt(disc)
    dy = (state.u * state.du - c * state.v * state.dv) / y
    ddy = ((state.du * state.du - c * state.dv * state.dv)
           - a_at_x * disc - dy * dy) / y
    return ddy + a_at_x * y + c / (y * y * y)


@dataclass(frozen=True)
class SolveResult:
    """Samples on a uniform grid, truncated at detected singular points.

    ``states`` is aligned with ``samples`` for the pair-based methods and
    None for direct integration. ``truncated_lo``/``truncated_hi`` give the
    singular point (or last reachable x for the direct method) where the
    grid was cut, None when the whole requested side was covered.
    """

    samples: tuple[SolutionSample, ...]
    states: tuple[FundamentalPairState, ...] | None
    method: str
    truncated_lo: float | None
    truncated_hi: float | None

    @property
    def truncated(self) -> bool:
        return self.truncated_lo is not None or self.truncated_hi is not None


def _uniform_grid(x_from: float, x_to: float, n: int) -> list[float]:
    step = (x_to - x_from) / (n - 1)
    grid = [x_from + i * step for i in range(n)]
    grid[-1] = x_to
    return grid


def _constant_factor_points(pair: ClosedFormPair, c: float, x_from: float,
                            x_to: float) -> list[SingularPoint]:
    """Zeros of the analytic radicand factors inside the window (c > 0)."""
    span = x_to - x_from
    if pair.kind == "oscillatory":
        # factor zeros are spaced pi/omega apart; 8 scan points per arch
        step = min(span / 64.0, math.pi / (8.0 * pair.omega))
    else:
        step = span / 128.0
    n = max(2, int(math.ceil(span / step)) + 1)
    grid = [x_from + span * i / (n - 1) for i in range(n)]
    points = [SingularPoint(x, "minus")
              for x in scan_for_roots(lambda x: pair.factors(x, c)[0], grid,
                                      _TRUNC_REFINE)]
    points += [SingularPoint(x, "plus")
               for x in scan_for_roots(lambda x: pair.factors(x, c)[1], grid,
                                       _TRUNC_REFINE)]
    points.sort(key=lambda pt: pt.x)
    return points


def _domain_and_truncation(x0, points, x_from, x_to):
    domain_lo, domain_hi = domain_around(x0, points, x_from, x_to)
    truncated_lo = domain_lo if domain_lo > x_from else None
    truncated_hi = domain_hi if domain_hi < x_to else None
    return domain_lo, domain_hi, truncated_lo, truncated_hi


def _make_domain_filter(x0, domain_lo, domain_hi, truncated_lo, truncated_hi):
    """Keep grid points inside the validity interval. The interval is open
    at singular points but closed at untruncated window edges."""

    def keep(x: float) -> bool:
        if x == x0:
            return True
        lo_ok = x > domain_lo if truncated_lo is not None else x >= domain_lo
        hi_ok = x < domain_hi if truncated_hi is not None else x <= domain_hi
        return lo_ok and hi_ok

    return keep


def solve(problem: PinneyProblem, x_from: float, x_to: float,
          n_samples: int, config: SolverConfig = DEFAULT_CONFIG,
          method: str = "auto") -> SolveResult:
    """Sample the solution on a uniform n-point grid over [x_from, x_to].

    ``method`` 'auto' picks the analytic closed form for constant
    coefficients and pair superposition otherwise. Samples beyond a
    detected singular point are omitted and the truncation is reported on
    the result.
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    if not x_from < x_to:
        raise ValueError(f"need x_from < x_to, got [{x_from!r}, {x_to!r}]")
    if not (x_from <= problem.x0 <= x_to):
        raise ValueError(
            f"x0={problem.x0!r} must lie in [{x_from!r}, {x_to!r}]"
        )
    if n_samples < 2:
        raise ValueError(f"n_samples must be >= 2, got {n_samples!r}")

    if method == "auto":
        method = "closed_form" if problem.is_constant else "superposition"
    if method == "closed_form" and not problem.is_constant:
        raise MethodUnavailableError(
            "closed_form requires a constant coefficient"
        )
    grid = _uniform_grid(x_from, x_to, n_samples)
    if method == "direct":
        return _solve_direct(problem, grid, x_from, x_to, config)
    if problem.is_constant:
        return _solve_constant(problem, grid, x_from, x_to, config, method)
    return _solve_pair(problem, grid, x_from, x_to, config)


def _solve_constant(problem, grid, x_from, x_to, config, method):
    pair = closed_form_pair(problem.a0, problem.q, problem.p, problem.x0)
    if problem.c > 0:
        points = _constant_factor_points(pair, problem.c, x_from, x_to)
    else:
        points = []
    domain_lo, domain_hi, truncated_lo, truncated_hi = _domain_and_truncation(
        problem.x0, points, x_from, x_to
    )
    keep = _make_domain_filter(problem.x0, domain_lo, domain_hi,
                               truncated_lo, truncated_hi)
    sign = problem.branch_sign
    samples = []
    states = []
    zf = z_closed_form(problem.a0, problem.c, problem.q, problem.p,
                       problem.x0) if method == "closed_form" else None
    for x in grid:
        if not keep(x):
            continue
        if method == "closed_form":
            try:
                sample = y_from_z(zf, sign, x)
            except SingularOrInvalidError:
                continue
        else:
            disc = pair.discriminant(x, problem.c)
            if disc <= 0.0:
                continue
            y = sign * math.sqrt(disc)
            st = pair.state(x)
            dy = (st.u * st.du - problem.c * st.v * st.dv) / y
            sample = SolutionSample(
                x=x, y=y, dy=dy, method="superposition",
                low_confidence=disc < config.abs_tol * config.abs_tol,
            )
        samples.append(sample)
        states.append(pair.state(x))
    return SolveResult(
        samples=tuple(samples), states=tuple(states), method=method,
        truncated_lo=truncated_lo, truncated_hi=truncated_hi,
    )


def _solve_pair(problem, grid, x_from, x_to, config):
    dense = integrate_pair_span(problem, x_from, x_to, config)
    if problem.c > 0:
        points = scan_pair_factors(dense, problem.c, _TRUNC_REFINE)
    else:
        points = []
    domain_lo, domain_hi, truncated_lo, truncated_hi = _domain_and_truncation(
        problem.x0, points, x_from, x_to
    )
    keep = _make_domain_filter(problem.x0, domain_lo, domain_hi,
                               truncated_lo, truncated_hi)
    sign = problem.branch_sign
    samples = []
    states = []
    for x in grid:
        if not keep(x):
            continue
        st = dense.eval(x)
        try:
            sample = compose_solution(st, problem.c, sign,
                                      abs_tol=config.abs_tol)
        except SingularOrInvalidError:
            continue
        samples.append(sample)
        states.append(st)
    return SolveResult(
        samples=tuple(samples), states=tuple(states), method="superposition",
        truncated_lo=truncated_lo, truncated_hi=truncated_hi,
    )


def _solve_direct(problem, grid, x_from, x_to, config):
    from .oracle import integrate_direct  # deferred: oracle imports solve

    legs = []
    if x_from < problem.x0:
        legs.append(integrate_direct(problem, x_from, config))
    legs.append(integrate_direct(problem, x_to, config))
    truncated_lo = None
    truncated_hi = None
    for leg in legs:
        if leg.terminated_reason != "reached_target":
            if leg.x_final < problem.x0:
                truncated_lo = leg.x_final
            else:
                truncated_hi = leg.x_final
    floor = config.singularity_floor
    samples = []
    for x in grid:
        for leg in legs:
            if leg.covers(x):
                sample = leg.eval(x)
                if abs(sample.y) >= floor:
                    samples.append(sample)
                break
    return SolveResult(
        samples=tuple(samples), states=None, method="direct",
        truncated_lo=truncated_lo, truncated_hi=truncated_hi,
    )
