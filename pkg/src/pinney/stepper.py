"""Adaptive Dormand-Prince 5(4) integration for second-order systems.

Both integrators in this package (the linear fundamental pair and the
direct nonlinear oracle) propagate position/velocity states for systems
y_i'' = g_i(x, y). The first-order form is advanced with the classic
Dormand-Prince embedded pair: the 5th-order solution is propagated while
the 4th/5th difference drives step control against the mixed error norm
max_i |e_i| / (abs_tol + rel_tol * |y_i|).

Dense output is a two-point quintic Hermite interpolant per position
component, built from position, velocity, and acceleration at both step
ends. Accelerations there are free (the first and FSAL stages evaluate g
exactly at the nodes), values reproduce the nodes exactly, and the
interpolant's analytic derivative supplies dense velocities one order
better than a cubic Hermite would, which the near-singularity residual
checks need.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .errors import OutOfRangeError
from .problem import SolverConfig

Accel = Callable[[float, tuple], tuple]

# Dormand-Prince 5(4) tableau.
_C = (0.2, 0.3, 0.8, 8.0 / 9.0, 1.0)
_A = (
    (0.2,),
    (3.0 / 40.0, 9.0 / 40.0),
    (44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0),
    (19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0),
    (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0,
     -5103.0 / 18656.0),
)
_B = (35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0,
      11.0 / 84.0)
# b - b_hat, applied to k1..k6 and the FSAL stage k7
_E = (71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0,
      -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0)

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0


def _hmin(x: float) -> float:
    return 16.0 * math.ulp(x if x != 0.0 else 1.0)


@dataclass(frozen=True)
class _StepRecord:
    x_from: float
    x_to: float
    h: float
    # one (c0..c5) quintic per position component, in theta = (x - x_from)/h
    poly: tuple
    state_from: tuple
    state_to: tuple


class DenseSecondOrderSolution:
    """Piecewise-quintic dense output over the integrated interval."""

    def __init__(self, n_pos: int, x_start: float, initial_state: tuple,
                 records: Sequence[_StepRecord], x_end: float):
        self.n_pos = n_pos
        self.x_start = x_start
        self.x_end = x_end
        self._initial = initial_state
        self._records = list(records)
        ascending = self._records if x_end >= x_start else self._records[::-1]
        self._asc = ascending
        self._lefts = [min(r.x_from, r.x_to) for r in ascending]

    @property
    def x_lo(self) -> float:
        return min(self.x_start, self.x_end)

    @property
    def x_hi(self) -> float:
        return max(self.x_start, self.x_end)

    @property
    def max_abs_step(self) -> float:
        return max((abs(r.h) for r in self._records), default=0.0)

    def accepted_nodes(self) -> list[tuple[float, tuple]]:
        """(x, state) at every accepted step endpoint, integration order."""
        nodes = [(self.x_start, self._initial)]
        nodes.extend((r.x_to, r.state_to) for r in self._records)
        return nodes

    def __contains__(self, x: float) -> bool:
        return self.x_lo <= x <= self.x_hi

    def eval(self, x: float) -> tuple[tuple, tuple]:
        """Positions and velocities at x; exact at accepted nodes."""
        if not self._records:
            if x == self.x_start:
                n = self.n_pos
                return self._initial[:n], self._initial[n:]
            raise OutOfRangeError(
                f"x={x!r} outside the covered point {self.x_start!r}"
            )
        if not (self.x_lo <= x <= self.x_hi):
            raise OutOfRangeError(
                f"x={x!r} outside [{self.x_lo!r}, {self.x_hi!r}]"
            )
        idx = bisect_right(self._lefts, x) - 1
        if idx < 0:
            idx = 0
        record = self._asc[idx]
        n = self.n_pos
        if x == record.x_from:
            return record.state_from[:n], record.state_from[n:]
        if x == record.x_to:
            return record.state_to[:n], record.state_to[n:]
        theta = (x - record.x_from) / record.h
        pos = []
        vel = []
        for c0, c1, c2, c3, c4, c5 in record.poly:
            pos.append(c0 + theta * (c1 + theta * (c2 + theta * (
                c3 + theta * (c4 + theta * c5)))))
            dp = c1 + theta * (2.0 * c2 + theta * (3.0 * c3 + theta * (
                4.0 * c4 + theta * 5.0 * c5)))
            vel.append(dp / record.h)
        return tuple(pos), tuple(vel)


@dataclass
class IntegrationResult:
    solution: DenseSecondOrderSolution
    status: str  # 'reached', 'stopped', or 'collapsed'
    x_final: float


def _rhs(accel: Accel, x: float, state: tuple, n: int) -> tuple:
    return state[n:] + tuple(accel(x, state[:n]))


def _attempt(accel, x, state, k1, h, n, rel_tol, abs_tol):
    """One trial step. Returns (err_norm, new_state, new_accel) with
    err_norm = inf when the step must be rejected outright."""
    inf = math.inf
    try:
        s2 = tuple(y + h * _A[0][0] * k for y, k in zip(state, k1))
        k2 = _rhs(accel, x + _C[0] * h, s2, n)
        a = _A[1]
        s3 = tuple(y + h * (a[0] * p + a[1] * q)
                   for y, p, q in zip(state, k1, k2))
        k3 = _rhs(accel, x + _C[1] * h, s3, n)
        a = _A[2]
        s4 = tuple(y + h * (a[0] * p + a[1] * q + a[2] * r)
                   for y, p, q, r in zip(state, k1, k2, k3))
        k4 = _rhs(accel, x + _C[2] * h, s4, n)
        a = _A[3]
        s5 = tuple(y + h * (a[0] * p + a[1] * q + a[2] * r + a[3] * s)
                   for y, p, q, r, s in zip(state, k1, k2, k3, k4))
        k5 = _rhs(accel, x + _C[3] * h, s5, n)
        a = _A[4]
        s6 = tuple(y + h * (a[0] * p + a[1] * q + a[2] * r + a[3] * s + a[4] * t)
                   for y, p, q, r, s, t in zip(state, k1, k2, k3, k4, k5))
        k6 = _rhs(accel, x + h, s6, n)
        b = _B
        new = tuple(y + h * (b[0] * p + b[2] * r + b[3] * s + b[4] * t + b[5] * u)
                    for y, p, r, s, t, u in zip(state, k1, k3, k4, k5, k6))
        k7 = _rhs(accel, x + h, new, n)
    except (ZeroDivisionError, OverflowError, ValueError):
        return inf, None, None
    e = _E
    err = 0.0
    for i in range(2 * n):
        err_i = h * (e[0] * k1[i] + e[2] * k3[i] + e[3] * k4[i]
                     + e[4] * k5[i] + e[5] * k6[i] + e[6] * k7[i])
        yi = new[i]
        if not math.isfinite(yi):
            return inf, None, None
        scale = abs_tol + rel_tol * max(abs(state[i]), abs(yi))
        ratio = abs(err_i) / scale
        if ratio > err:
            err = ratio
    if math.isnan(err):
        return inf, None, None
    return err, new, k7[n:]


def _make_record(x_from, x_to, h, state, acc, state_new, acc_new, n):
    poly = []
    for i in range(n):
        y0 = state[i]
        y1 = state_new[i]
        m0 = h * state[n + i]
        m1 = h * state_new[n + i]
        c0 = h * h * acc[i]
        c1 = h * h * acc_new[i]
        r0 = y1 - y0 - m0 - 0.5 * c0
        r1 = m1 - m0 - c0
        r2 = c1 - c0
        poly.append((
            y0,
            m0,
            0.5 * c0,
            10.0 * r0 - 4.0 * r1 + 0.5 * r2,
            -15.0 * r0 + 7.0 * r1 - r2,
            6.0 * r0 - 3.0 * r1 + 0.5 * r2,
        ))
    return _StepRecord(x_from, x_to, h, tuple(poly), state, state_new)


def integrate_second_order(
    accel: Accel,
    x0: float,
    pos0: Sequence[float],
    vel0: Sequence[float],
    x_target: float,
    config: SolverConfig,
    stop: Optional[Callable[[float, tuple, tuple], bool]] = None,
) -> IntegrationResult:
    """Integrate y'' = accel(x, y) from x0 to x_target (either direction).

    ``stop`` is checked at accepted step endpoints; returning True ends the
    integration with status 'stopped'. Exceptions raised by ``accel`` other
    than ZeroDivisionError/OverflowError/ValueError propagate; those three
    reject the trial step instead, so hard nonlinearities shrink the step
    until it collapses rather than aborting the run.
    """
    n = len(pos0)
    state = tuple(float(v) for v in pos0) + tuple(float(v) for v in vel0)
    acc = tuple(accel(x0, state[:n]))
    records: list[_StepRecord] = []

    def result(status, x):
        sol = DenseSecondOrderSolution(n, x0, state_initial, records, x)
        return IntegrationResult(sol, status, x)

    state_initial = state
    if x_target == x0:
        return result("reached", x0)

    direction = 1.0 if x_target > x0 else -1.0
    span = abs(x_target - x0)
    h = direction * min(config.initial_step, span / 10.0, config.max_step)
    x = x0
    rejected = False
    status = "reached"
    while True:
        remaining = x_target - x
        if remaining == 0.0 or remaining * direction <= 0.0:
            break
        if abs(h) > config.max_step:
            h = direction * config.max_step
        final = abs(remaining) <= abs(h)
        h_try = remaining if final else h
        if x + h_try == x:
            status = "collapsed"
            break
        if not final and abs(h_try) < _hmin(x):
            status = "collapsed"
            break
        k1 = state[n:] + acc
        err, state_new, acc_new = _attempt(
            accel, x, state, k1, h_try, n, config.rel_tol, config.abs_tol
        )
        if err > 1.0:
            factor = max(_MIN_FACTOR, _SAFETY * err ** -0.2) \
                if math.isfinite(err) else _MIN_FACTOR
            h = h_try * factor
            rejected = True
            if abs(h) < _hmin(x):
                status = "collapsed"
                break
            continue
        x_new = x_target if final else x + h_try
        records.append(
            _make_record(x, x_new, h_try, state, acc, state_new, acc_new, n)
        )
        x = x_new
        state = state_new
        acc = acc_new
        if stop is not None and stop(x, state[:n], state[n:]):
            status = "stopped"
            break
        if err == 0.0:
            factor = _MAX_FACTOR
        else:
            factor = min(_MAX_FACTOR, max(_MIN_FACTOR, _SAFETY * err ** -0.2))
        if rejected:
            factor = min(1.0, factor)
        rejected = False
        h = h_try * factor
    return result(status, x)
