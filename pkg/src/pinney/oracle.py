"""Direct adaptive integration of the full nonlinear equation.

This is the independent check on the superposition and closed-form paths:
it never touches the linear pair, integrating y'' = -a(x) y - c/y^3 head
on with the same stepper family. For constant coefficients the first
integral y'^2 + a0 y^2 - c/y^2 is monitored as a conserved quantity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .coeffs import eval_coefficient
from .errors import (
    CoefficientEvalFailedError,
    EvalDomainError,
    NotApplicableError,
    OutOfRangeError,
)
from .problem import DEFAULT_CONFIG, PinneyProblem, SolutionSample, SolverConfig
from .stepper import DenseSecondOrderSolution, integrate_second_order

_REASONS = {
    "reached": "reached_target",
    "stopped": "singularity_floor",
    "collapsed": "step_collapse",
}


def _direct_accel(problem: PinneyProblem):
    coeff = problem.coeff
    c = problem.c

    def accel(x, pos):
        try:
            a = eval_coefficient(coeff, x)
        except EvalDomainError as exc:
            raise CoefficientEvalFailedError(exc.x, str(exc)) from exc
        y = pos[0]
        return (-a * y - c / (y * y * y),)

    return accel


@dataclass
class DirectTrajectory:
    """Accepted-step samples of a direct integration plus dense output.

    Samples keep |y| >= singularity_floor; ``terminated_reason`` records
    whether the target was reached or why the run ended early.
    """

    problem: PinneyProblem
    config: SolverConfig
    samples: tuple[SolutionSample, ...]
    terminated_reason: str
    x_final: float
    dense: DenseSecondOrderSolution = field(repr=False)

    def covers(self, x: float) -> bool:
        return x in self.dense

    def eval(self, x: float) -> SolutionSample:
        if not self.covers(x):
            raise OutOfRangeError(
                f"x={x!r} outside [{self.dense.x_lo!r}, {self.dense.x_hi!r}]"
            )
        pos, vel = self.dense.eval(x)
        return SolutionSample(x=x, y=pos[0], dy=vel[0], method="direct")


def integrate_direct(problem: PinneyProblem, x_target: float,
                     config: SolverConfig = DEFAULT_CONFIG) -> DirectTrajectory:
    """Integrate the nonlinear equation from (q, p) at x0 toward x_target.

    Stops early when |y| drops below config.singularity_floor; a collapsing
    step near a pole is reported as a termination reason, not an error.
    """
    floor = config.singularity_floor

    def stop(x, pos, vel):
        return abs(pos[0]) < floor

    result = integrate_second_order(
        _direct_accel(problem),
        problem.x0,
        (problem.q,),
        (problem.p,),
        x_target,
        config,
        stop=stop,
    )
    samples = tuple(
        SolutionSample(x=x, y=s[0], dy=s[1], method="direct")
        for x, s in result.solution.accepted_nodes()
        if abs(s[0]) >= floor
    )
    return DirectTrajectory(
        problem=problem,
        config=config,
        samples=samples,
        terminated_reason=_REASONS[result.status],
        x_final=result.x_final,
        dense=result.solution,
    )


def energy_series(traj: DirectTrajectory, a0: float,
                  c: float) -> list[tuple[float, float]]:
    """(x, y'^2 + a0 y^2 - c/y^2) at every trajectory sample.

    Only meaningful for constant coefficients, where the value is the
    conserved first integral.
    """
    if not traj.problem.is_constant:
        raise NotApplicableError("energy is conserved only for constant a(x)")
    return [
        (s.x, s.dy * s.dy + a0 * s.y * s.y - c / (s.y * s.y))
        for s in traj.samples
    ]


@dataclass(frozen=True)
class CrossValidation:
    """Worst-case deviation between the formula path and direct integration."""

    max_delta_y: float
    max_delta_dy: float
    x_lo: float
    x_hi: float
    n_compared: int


def cross_validate(problem: PinneyProblem, x_from: float, x_to: float,
                   n: int, config: SolverConfig = DEFAULT_CONFIG) -> CrossValidation:
    """Run solve (auto method) and the direct oracle over a common grid.

    Points whose discriminant y^2 falls within 10x the singularity floor
    are excluded: both routes lose accuracy as y -> 0 and the comparison
    should certify the formula, not the guard behavior.
    """
    from .superposition import solve

    formula = solve(problem, x_from, x_to, n, config, method="auto")
    legs = []
    if x_from < problem.x0:
        legs.append(integrate_direct(problem, x_from, config))
    legs.append(integrate_direct(problem, x_to, config))
    guard = 10.0 * config.singularity_floor
    max_dy = 0.0
    max_ddy = 0.0
    count = 0
    lo = math.inf
    hi = -math.inf
    for sample in formula.samples:
        if sample.y * sample.y < guard:
            continue
        leg = next((leg for leg in legs if leg.covers(sample.x)), None)
        if leg is None:
            continue
        direct = leg.eval(sample.x)
        if abs(direct.y) < guard:
            continue
        max_dy = max(max_dy, abs(sample.y - direct.y))
        max_ddy = max(max_ddy, abs(sample.dy - direct.dy))
        count += 1
        lo = min(lo, sample.x)
        hi = max(hi, sample.x)
    if count == 0:
        lo = hi = problem.x0
    return CrossValidation(
        max_delta_y=max_dy, max_delta_dy=max_ddy,
        x_lo=lo, x_hi=hi, n_compared=count,
    )
