"""Acceptance criteria, one test per criterion.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one pass/fail
line per criterion (per problem where a criterion spans the suite).

Criterion 2 contains one sub-case that is unattainable in IEEE doubles and
is marked as a strict expected failure rather than weakened: for the
a0 = -1 equilibrium problem, any interval of length 20 containing x0
reaches cosh(10)-scale pair values, and |u v' - u' v - 1| cannot be
resolved below the rounding of the products (ulp(cosh(10)^2) ~ 1.6e-8,
already 16x the required 1e-9; at the far end the floor is ~8). The check
passes for every problem whose pair stays at bounded magnitude.
"""

import math

import numpy as np
import pytest

from helpers import PARSER_FIXTURES, midcell_grid, random_valid_problem, suite_problems
from pinney import (
    DEFAULT_CONFIG,
    SolverConfig,
    closed_form_pair,
    compose_solution,
    cross_validate,
    energy_constant,
    energy_series,
    eval_coefficient,
    find_singularities,
    init_pair,
    integrate_direct,
    integrate_pair,
    parse_coefficient,
    residual,
    solve,
    validate_problem,
    y_from_z,
    z_closed_form,
)
from pinney.errors import PinneyError
from pinney.linode import integrate_pair_span

SUITE = suite_problems()


def _report(criterion, label, passed, detail):
    status = "PASS" if passed else "FAIL"
    print(f"[criterion {criterion:>2}] {status} {label}: {detail}")


def _validity_window(problem, half_width=5.0):
    lo = problem.x0 - half_width
    hi = problem.x0 + half_width
    if problem.c > 0:
        report = find_singularities(problem, lo, hi)
        return report.domain_lo, report.domain_hi
    return lo, hi


def _states_on(problem, xs, lo, hi):
    if problem.is_constant:
        pair = closed_form_pair(problem.a0, problem.q, problem.p, problem.x0)
        return [pair.state(x) for x in xs]
    dense = integrate_pair_span(problem, lo, hi)
    return [dense.eval(x) for x in xs]


def test_criterion_1_residual_identity():
    """max |y'' + a y + c/y^3| <= 1e-7 over 500 samples of the validity
    domain intersected with [x0 - 5, x0 + 5], default tolerances."""
    worst_overall = 0.0
    for name, problem, _ in SUITE:
        lo, hi = _validity_window(problem)
        xs = midcell_grid(lo, hi, 500)
        states = _states_on(problem, xs, lo, hi)
        worst = max(
            abs(residual(st, problem.a(st.x), problem.c, problem.branch_sign))
            for st in states
        )
        worst_overall = max(worst_overall, worst)
        _report(1, name, worst <= 1e-7, f"max residual {worst:.3e} (<= 1e-7)")
        assert worst <= 1e-7
    _report(1, "suite", True, f"worst over suite {worst_overall:.3e}")


EQUILIBRIUM_XFAIL = pytest.mark.xfail(
    strict=True,
    reason="IEEE-754 floor: with u, v at cosh(10..20) scale the Wronskian "
           "deviation cannot be resolved below ulp(u*dv) >> 1e-9",
)


@pytest.mark.parametrize(
    "name,problem",
    [pytest.param(name, problem, id=name,
                  marks=(EQUILIBRIUM_XFAIL,) if name == "equilibrium" else ())
     for name, problem, _ in SUITE],
)
def test_criterion_2_wronskian_conservation(name, problem):
    """|u v' - u' v - 1| <= 1e-9 at every accepted step over a length-20
    interval ([x0, x0 + 20]; forward keeps the Airy problem oscillatory)."""
    sol = integrate_pair(problem, problem.x0 + 20.0)
    drift = sol.wronskian_drift()
    _report(2, name, drift <= 1e-9, f"max |W - 1| {drift:.3e} (<= 1e-9)")
    assert drift <= 1e-9


def test_criterion_3_constant_cross_check():
    """Superposition vs z closed form agree to 1e-9 wherever the
    discriminant exceeds 1e-4, for the constant-a0 suite problems."""
    for name, problem, _ in SUITE:
        if not problem.is_constant:
            continue
        lo, hi = _validity_window(problem)
        shrink = 0.005 * (hi - lo)
        lo, hi = lo + shrink, hi - shrink
        sup = solve(problem, lo, hi, 400, method="superposition")
        cf = solve(problem, lo, hi, 400, method="closed_form")
        assert len(sup.samples) == len(cf.samples)
        worst = 0.0
        for sa, sb in zip(sup.samples, cf.samples):
            assert sa.x == sb.x
            if sa.y * sa.y > 1e-4:
                worst = max(worst, abs(sa.y - sb.y))
        _report(3, name, worst <= 1e-9, f"max |dy| {worst:.3e} (<= 1e-9)")
        assert worst <= 1e-9


def test_criterion_4_oracle_equivalence():
    """cross_validate max |delta y| <= 1e-7 on each problem's stated range."""
    for name, problem, (lo, hi) in SUITE:
        report = cross_validate(problem, lo, hi, 300)
        ok = report.max_delta_y <= 1e-7 and report.n_compared > 250
        _report(4, name, ok,
                f"max |dy| {report.max_delta_y:.3e} over "
                f"[{report.x_lo:g}, {report.x_hi:g}], n={report.n_compared}")
        assert ok


def test_criterion_5_energy_invariant():
    """Direct-integration energy drift <= 1e-8 (1 + |E|) for the
    constant-a0 problems, away from singularities."""
    for name, problem, (lo, hi) in SUITE:
        if not problem.is_constant:
            continue
        energy = energy_constant(problem.a0, problem.c, problem.q, problem.p)
        drift = 0.0
        for target in (lo, hi):
            if target == problem.x0:
                continue
            traj = integrate_direct(problem, target)
            assert traj.terminated_reason == "reached_target"
            for _, value in energy_series(traj, problem.a0, problem.c):
                drift = max(drift, abs(value - energy))
        bound = 1e-8 * (1.0 + abs(energy))
        _report(5, name, drift <= bound,
                f"E={energy:g}, drift {drift:.3e} (<= {bound:.1e})")
        assert drift <= bound


def test_criterion_6_singularity_location():
    prob = validate_problem(1.0, c=1.0, x0=0.0, q=1.0, p=0.0)
    report = find_singularities(prob, 0.0, 2.5)
    ok = (len(report.points) == 2
          and abs(report.points[0].x - math.pi / 4.0) <= 1e-9
          and report.points[0].factor == "minus"
          and abs(report.points[1].x - 3.0 * math.pi / 4.0) <= 1e-9
          and report.points[1].factor == "plus")
    _report(6, "trig [0,2.5]", ok,
            f"points at {[pt.x for pt in report.points]}")
    assert ok

    prob = validate_problem(0.0, c=1.0, x0=0.0, q=1.0, p=0.0)
    report = find_singularities(prob, -2.0, 2.0, refine_tol=1e-13)
    ok = (len(report.points) == 2
          and abs(report.points[0].x + 1.0) <= 1e-12
          and abs(report.points[1].x - 1.0) <= 1e-12
          and [pt.factor for pt in report.points] == ["plus", "minus"])
    _report(6, "flat [-2,2]", ok,
            f"points at {[pt.x for pt in report.points]}")
    assert ok


def test_criterion_7_negative_c_global_validity():
    """c < 0: no truncation on [x0 - 20, x0 + 20], discriminants positive."""
    for coeff in (1.0, "1+0.5*sin(x)"):
        problem = validate_problem(coeff, c=-1.0, x0=0.0, q=1.0, p=0.0)
        result = solve(problem, -20.0, 20.0, 400)
        min_disc = min(s.y * s.y for s in result.samples)
        ok = (not result.truncated and len(result.samples) == 400
              and min_disc > 0.0)
        _report(7, f"a={coeff!r}", ok,
                f"n={len(result.samples)}, min disc {min_disc:.3e}")
        assert ok


def test_criterion_8_equilibrium_all_methods():
    problem = validate_problem(-1.0, c=1.0, x0=0.0, q=1.0, p=0.0)
    for method in ("superposition", "closed_form", "direct"):
        result = solve(problem, 0.0, 10.0, 201, method=method)
        worst = max(abs(s.y - 1.0) for s in result.samples)
        _report(8, method, worst <= 1e-10,
                f"max |y - 1| {worst:.3e} (<= 1e-10)")
        assert worst <= 1e-10


def test_criterion_9_initial_data_reproduction():
    """Every method reproduces y(x0) = q, y'(x0) = p within 1e-12 for 50
    random valid problems."""
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(50):
        problem = random_valid_problem(rng)
        observed = []
        sample = compose_solution(init_pair(problem), problem.c,
                                  problem.branch_sign)
        observed.append((sample.y, sample.dy))
        if problem.is_constant:
            zf = z_closed_form(problem.a0, problem.c, problem.q, problem.p,
                               problem.x0)
            sample = y_from_z(zf, problem.branch_sign, problem.x0)
            observed.append((sample.y, sample.dy))
        traj = integrate_direct(problem, problem.x0)
        observed.append((traj.samples[0].y, traj.samples[0].dy))
        for y, dy in observed:
            worst = max(worst, abs(y - problem.q), abs(dy - problem.p))
    _report(9, "50 random problems", worst <= 1e-12,
            f"max deviation {worst:.3e} (<= 1e-12)")
    assert worst <= 1e-12


def test_criterion_10_integrator_order():
    """Tightening tolerances by a decade cuts the trig-reference endpoint
    error by at least 8x, across three decades."""
    problem = validate_problem(1.0, c=1.0, x0=0.0, q=1.0, p=0.0)
    errors = []
    for k in range(4):
        rel = 1e-5 * 10.0 ** -k
        cfg = SolverConfig(rel_tol=rel, abs_tol=rel * 1e-3)
        st = integrate_pair(problem, 10.0, cfg).eval(10.0)
        errors.append(max(abs(st.u - math.cos(10.0)),
                          abs(st.v - math.sin(10.0))))
    ratios = [loose / tight for loose, tight in zip(errors, errors[1:])]
    ok = all(r >= 8.0 for r in ratios)
    _report(10, "tolerance decades", ok,
            "ratios " + ", ".join(f"{r:.1f}" for r in ratios) + " (>= 8)")
    assert ok


def test_criterion_11_parser_fixture_suite():
    failures = []
    for text, kind, expected in PARSER_FIXTURES:
        try:
            if kind == "const":
                spec = parse_coefficient(text)
                assert spec.is_constant and spec.a0 == expected
            elif kind == "eval":
                spec = parse_coefficient(text)
                assert not spec.is_constant
                for x, value in expected:
                    assert math.isclose(eval_coefficient(spec, x), value,
                                        rel_tol=1e-15, abs_tol=1e-15)
            elif kind == "error":
                try:
                    parse_coefficient(text)
                    assert False, "expected a parse error"
                except expected:
                    pass
            else:
                x, exc = expected
                spec = parse_coefficient(text)
                try:
                    eval_coefficient(spec, x)
                    assert False, "expected an eval error"
                except exc:
                    pass
        except (AssertionError, PinneyError) as failure:
            failures.append((text, failure))
    # constant folding must route x-free coefficients to the analytic path
    problem = validate_problem("2^3^2 - 511", c=1.0, x0=0.0, q=1.0, p=0.0)
    auto = solve(problem, -0.5, 0.5, 16, method="auto")
    folded_ok = problem.is_constant and auto.method == "closed_form"
    ok = not failures and folded_ok
    _report(11, "grammar fixtures", ok,
            f"{len(PARSER_FIXTURES)} fixtures, failures={failures}, "
            f"constant folding -> {auto.method}")
    assert ok
