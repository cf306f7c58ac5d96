"""Command-line front end: solve, singularities, validate, parse-check.

Exit codes: 0 success, 2 argument or expression errors, 3 numeric failure.
Numeric fields are emitted with repr, which round-trips IEEE doubles
bit-exactly and is locale independent.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .coeffs import CoefficientSpec, parse_coefficient, pretty
from .constcoeff import energy_constant
from .errors import (
    EvalDomainError,
    ExpressionSyntaxError,
    MethodUnavailableError,
    NonFiniteError,
    PinneyError,
    ZeroCError,
    ZeroInitialValueError,
)
from .linode import integrate_pair_span
from .oracle import cross_validate, energy_series, integrate_direct
from .problem import PinneyProblem, SolverConfig, validate_problem
from .singular import find_singularities
from .superposition import residual, solve

_ARGUMENT_ERRORS = (
    ZeroCError,
    ZeroInitialValueError,
    NonFiniteError,
    ExpressionSyntaxError,
    MethodUnavailableError,
    ValueError,
)

_COLUMNS = ("x", "y", "dy", "u", "v", "discriminant", "residual")


def _fmt(value) -> str:
    if value is None:
        return ""
    return repr(float(value))


def _add_problem_flags(sub: argparse.ArgumentParser, with_p: bool = True):
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--a", metavar="EXPR", help="coefficient a(x) expression")
    group.add_argument("--a0", type=float, metavar="REAL",
                       help="constant coefficient value")
    sub.add_argument("--c", type=float, required=True, help="constant c != 0")
    sub.add_argument("--x0", type=float, default=0.0, help="initial abscissa")
    sub.add_argument("--q", type=float, required=True, help="y(x0), nonzero")
    if with_p:
        sub.add_argument("--p", type=float, default=0.0, help="y'(x0)")


def _add_range_flags(sub: argparse.ArgumentParser):
    sub.add_argument("--from", dest="x_from", type=float, required=True,
                     help="left end of the sampling range")
    sub.add_argument("--to", dest="x_to", type=float, required=True,
                     help="right end of the sampling range")


def _add_tol_flags(sub: argparse.ArgumentParser):
    sub.add_argument("--rel-tol", type=float, default=1e-10)
    sub.add_argument("--abs-tol", type=float, default=1e-12)


def _add_output_flags(sub: argparse.ArgumentParser):
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--out", metavar="PATH", default=None,
                     help="output file (default stdout)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pinney",
        description="Solve y'' + a(x) y + c/y^3 = 0 via linear superposition, "
                    "the z = y^2 closed form, or direct integration.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("solve", help="sample the solution on a grid")
    _add_problem_flags(sub)
    _add_range_flags(sub)
    sub.add_argument("--samples", type=int, default=200)
    sub.add_argument("--method", default="auto",
                     choices=("auto", "superposition", "closed-form", "direct"))
    _add_tol_flags(sub)
    _add_output_flags(sub)

    sub = subs.add_parser("singularities",
                          help="locate singular points (c > 0)")
    _add_problem_flags(sub)
    _add_range_flags(sub)
    sub.add_argument("--refine-tol", type=float, default=1e-10)
    _add_tol_flags(sub)
    _add_output_flags(sub)

    sub = subs.add_parser("validate",
                          help="run the invariant battery over a range")
    _add_problem_flags(sub)
    _add_range_flags(sub)
    sub.add_argument("--samples", type=int, default=400)
    _add_tol_flags(sub)
    _add_output_flags(sub)

    sub = subs.add_parser("parse-check",
                          help="parse a coefficient expression")
    sub.add_argument("--a", metavar="EXPR", required=True)
    sub.add_argument("--at", type=float, default=None,
                     help="also evaluate at this x")
    return parser


def _coeff_from_args(args) -> CoefficientSpec:
    if getattr(args, "a", None) is not None:
        return parse_coefficient(args.a)
    return CoefficientSpec.constant(args.a0)


def _problem_from_args(args) -> PinneyProblem:
    return validate_problem(_coeff_from_args(args), args.c, args.x0,
                            args.q, args.p)


def _config_from_args(args) -> SolverConfig:
    return SolverConfig(rel_tol=args.rel_tol, abs_tol=args.abs_tol)


def _problem_blob(problem: PinneyProblem) -> dict:
    return {
        "a": problem.coeff.text,
        "c": problem.c,
        "x0": problem.x0,
        "q": problem.q,
        "p": problem.p,
    }


def _truncation_blob(result):
    if not result.truncated:
        return None
    return {"left": result.truncated_lo, "right": result.truncated_hi}


class _Output:
    def __init__(self, path):
        self.path = path
        self.lines = []

    def line(self, text):
        self.lines.append(text)

    def flush(self):
        text = "\n".join(self.lines) + "\n"
        if self.path is None:
            sys.stdout.write(text)
        else:
            with open(self.path, "w", encoding="utf-8") as fh:
                fh.write(text)


def _cmd_solve(args) -> int:
    problem = _problem_from_args(args)
    config = _config_from_args(args)
    method = args.method.replace("-", "_")
    result = solve(problem, args.x_from, args.x_to, args.samples,
                   config, method)
    rows = []
    for i, sample in enumerate(result.samples):
        if result.states is not None:
            st = result.states[i]
            disc = st.u * st.u - problem.c * st.v * st.v
            res = residual(st, problem.a(sample.x), problem.c,
                           problem.branch_sign)
            rows.append((sample.x, sample.y, sample.dy, st.u, st.v, disc, res))
        else:
            rows.append((sample.x, sample.y, sample.dy,
                         None, None, None, None))
    out = _Output(args.out)
    if args.format == "csv":
        out.line(",".join(_COLUMNS))
        for row in rows:
            out.line(",".join(_fmt(v) for v in row))
        for trunc in (result.truncated_lo, result.truncated_hi):
            if trunc is not None:
                out.line(f"# truncated at x={_fmt(trunc)} (singularity)")
    else:
        out.line(json.dumps({
            "problem": _problem_blob(problem),
            "samples": [dict(zip(_COLUMNS, row)) for row in rows],
            "truncated_at": _truncation_blob(result),
            "diagnostics": {
                "method": result.method,
                "n_samples": len(rows),
                "rel_tol": config.rel_tol,
                "abs_tol": config.abs_tol,
            },
        }))
    out.flush()
    return 0


def _cmd_singularities(args) -> int:
    problem = _problem_from_args(args)
    config = _config_from_args(args)
    out = _Output(args.out)
    if problem.c < 0:
        if args.format == "csv":
            out.line("x,factor")
            out.line("# no singularities: c<0")
        else:
            out.line(json.dumps({
                "problem": _problem_blob(problem),
                "points": [],
                "note": "no singularities: c<0",
                "diagnostics": {"refine_tol": args.refine_tol},
            }))
        out.flush()
        return 0
    report = find_singularities(problem, args.x_from, args.x_to, config,
                                args.refine_tol)
    if args.format == "csv":
        out.line("x,factor")
        for pt in report.points:
            out.line(f"{_fmt(pt.x)},{pt.factor}")
    else:
        out.line(json.dumps({
            "problem": _problem_blob(problem),
            "points": [{"x": pt.x, "factor": pt.factor}
                       for pt in report.points],
            "domain": {"lo": report.domain_lo, "hi": report.domain_hi},
            "diagnostics": {"refine_tol": args.refine_tol},
        }))
    out.flush()
    return 0


@dataclass
class _Check:
    name: str
    measured: float
    threshold: float
    skipped: bool = False

    @property
    def passed(self) -> bool:
        return self.skipped or self.measured <= self.threshold


def _validate_checks(problem, config, x_from, x_to, n_samples):
    checks = []
    span = x_to - x_from
    pair = integrate_pair_span(problem, min(x_from, problem.x0),
                               max(x_to, problem.x0), config)
    checks.append(_Check("wronskian_drift", pair.wronskian_drift(),
                         100.0 * config.rel_tol * (1.0 + span)))
    result = solve(problem, x_from, x_to, n_samples, config, "auto")
    worst = 0.0
    for sample, st in zip(result.samples, result.states):
        worst = max(worst, abs(residual(st, problem.a(sample.x), problem.c,
                                        problem.branch_sign)))
    checks.append(_Check("residual_max", worst, 1e-7))
    if problem.is_constant:
        sup = solve(problem, x_from, x_to, n_samples, config, "superposition")
        cf = solve(problem, x_from, x_to, n_samples, config, "closed_form")
        agree = 0.0
        for sa, sb in zip(sup.samples, cf.samples):
            if sa.y * sa.y > 1e-4:
                agree = max(agree, abs(sa.y - sb.y))
        checks.append(_Check("method_agreement", agree, 1e-9))
    else:
        checks.append(_Check("method_agreement", 0.0, 1e-9, skipped=True))
    cv = cross_validate(problem, x_from, x_to, n_samples, config)
    checks.append(_Check("cross_validate", cv.max_delta_y, 1e-7))
    if problem.is_constant:
        energy = energy_constant(problem.a0, problem.c, problem.q, problem.p)
        drift = 0.0
        for target in (x_from, x_to):
            if target == problem.x0:
                continue
            traj = integrate_direct(problem, target, config)
            for _, value in energy_series(traj, problem.a0, problem.c):
                drift = max(drift, abs(value - energy))
        checks.append(_Check("energy_drift", drift,
                             1e-8 * (1.0 + abs(energy))))
    else:
        checks.append(_Check("energy_drift", 0.0, 0.0, skipped=True))
    return checks


def _cmd_validate(args) -> int:
    problem = _problem_from_args(args)
    config = _config_from_args(args)
    checks = _validate_checks(problem, config, args.x_from, args.x_to,
                              args.samples)
    out = _Output(args.out)
    if args.format == "json":
        out.line(json.dumps({
            "problem": _problem_blob(problem),
            "checks": [
                {"name": c.name, "measured": c.measured,
                 "threshold": c.threshold,
                 "status": "skipped" if c.skipped else
                           ("pass" if c.passed else "FAIL")}
                for c in checks
            ],
            "passed": all(c.passed for c in checks),
        }))
    else:
        out.line(f"{'check':<18} {'measured':>14} {'threshold':>14} status")
        for c in checks:
            status = "skipped" if c.skipped else \
                ("pass" if c.passed else "FAIL")
            out.line(f"{c.name:<18} {c.measured:>14.4e} "
                     f"{c.threshold:>14.4e} {status}")
    out.flush()
    return 0 if all(c.passed for c in checks) else 1


def _cmd_parse_check(args) -> int:
    spec = parse_coefficient(args.a)
    if spec.is_constant:
        print(f"constant: {pretty(spec)}")
    else:
        print(f"a(x) = {pretty(spec)}")
    if args.at is not None:
        value = spec(args.at)
        print(f"a({_fmt(args.at)}) = {_fmt(value)}")
    return 0


_HANDLERS = {
    "solve": _cmd_solve,
    "singularities": _cmd_singularities,
    "validate": _cmd_validate,
    "parse-check": _cmd_parse_check,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _HANDLERS[args.command](args)
    except _ARGUMENT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PinneyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
