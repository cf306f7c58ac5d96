"""Numerical integration of the linear pair equation y'' + a(x) y = 0.

The fundamental pair (u, v) starts from u(x0) = q, u'(x0) = p and
v(x0) = 0, v'(x0) = 1/q, so their Wronskian u v' - u' v equals 1. Both
components are advanced as one 4-dimensional system: they share every
coefficient evaluation and every accepted step, which is what makes the
per-step Wronskian drift a meaningful diagnostic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .coeffs import eval_coefficient
from .errors import (
    CoefficientEvalFailedError,
    EvalDomainError,
    OutOfRangeError,
    StepSizeCollapseError,
)
from .problem import DEFAULT_CONFIG, PinneyProblem, SolverConfig
from .stepper import DenseSecondOrderSolution, integrate_second_order


@dataclass(frozen=True)
class FundamentalPairState:
    """Snapshot (x, u, u', v, v') of the fundamental pair."""

    x: float
    u: float
    du: float
    v: float
    dv: float


def wronskian(state: FundamentalPairState) -> float:
    """u v' - u' v; identically 1 along exact solutions of the pair."""
    return state.u * state.dv - state.du * state.v


def init_pair(problem: PinneyProblem) -> FundamentalPairState:
    """The pair state at x0 mandated by the solution formula."""
    return FundamentalPairState(
        x=problem.x0, u=problem.q, du=problem.p, v=0.0, dv=1.0 / problem.q
    )


def _pair_accel(problem: PinneyProblem):
    coeff = problem.coeff

    def accel(x, pos):
        try:
            a = eval_coefficient(coeff, x)
        except EvalDomainError as exc:
            raise CoefficientEvalFailedError(exc.x, str(exc)) from exc
        return (-a * pos[0], -a * pos[1])

    return accel


class DensePairSolution:
    """Dense pair trajectory over one or two one-sided integrations from x0.

    Evaluable anywhere on the covered interval; evaluation at accepted step
    endpoints returns the stepper's values exactly.
    """

    def __init__(self, problem: PinneyProblem, config: SolverConfig,
                 sides: tuple[DenseSecondOrderSolution, ...]):
        self.problem = problem
        self.config = config
        self._sides = sides

    @property
    def x_lo(self) -> float:
        return min(s.x_lo for s in self._sides)

    @property
    def x_hi(self) -> float:
        return max(s.x_hi for s in self._sides)

    @property
    def max_accepted_step(self) -> float:
        return max(s.max_abs_step for s in self._sides)

    def eval(self, x: float) -> FundamentalPairState:
        for side in self._sides:
            if x in side:
                pos, vel = side.eval(x)
                return FundamentalPairState(
                    x=x, u=pos[0], du=vel[0], v=pos[1], dv=vel[1]
                )
        raise OutOfRangeError(f"x={x!r} outside [{self.x_lo!r}, {self.x_hi!r}]")

    def accepted_states(self) -> list[FundamentalPairState]:
        states = []
        for side in self._sides:
            for x, s in side.accepted_nodes():
                states.append(FundamentalPairState(
                    x=x, u=s[0], du=s[2], v=s[1], dv=s[3]
                ))
        return states

    def wronskian_drift(self) -> float:
        """max |W - 1| over every accepted step endpoint."""
        return max(abs(wronskian(s) - 1.0) for s in self.accepted_states())


def integrate_pair(problem: PinneyProblem, x_target: float,
                   config: SolverConfig = DEFAULT_CONFIG) -> DensePairSolution:
    """Integrate the pair from x0 to x_target (either direction)."""
    init = init_pair(problem)
    result = integrate_second_order(
        _pair_accel(problem),
        problem.x0,
        (init.u, init.v),
        (init.du, init.dv),
        x_target,
        config,
    )
    if result.status == "collapsed":
        raise StepSizeCollapseError(result.x_final)
    return DensePairSolution(problem, config, (result.solution,))


def integrate_pair_span(problem: PinneyProblem, x_lo: float, x_hi: float,
                        config: SolverConfig = DEFAULT_CONFIG) -> DensePairSolution:
    """Cover [x_lo, x_hi] (which must contain x0) with one dense solution."""
    if not (x_lo <= problem.x0 <= x_hi):
        raise ValueError(
            f"x0={problem.x0!r} must lie in [{x_lo!r}, {x_hi!r}]"
        )
    sides = []
    for target in (x_lo, x_hi):
        if target != problem.x0 or not sides:
            sides.append(integrate_pair(problem, target, config)._sides[0])
    return DensePairSolution(problem, config, tuple(sides))


def eval_pair(sol: DensePairSolution, x: float) -> FundamentalPairState:
    """Dense-output interpolation of all four components at x."""
    return sol.eval(x)
