"""Coefficient expression parsing, evaluation, and printing."""

import math

import numpy as np
import pytest

from helpers import PARSER_FIXTURES
from pinney import eval_coefficient, parse_coefficient, pretty
from pinney.coeffs import Binary, CoefficientSpec, Number
from pinney.errors import (
    EvalDomainError,
    ExpressionSyntaxError,
    UnknownIdentifierError,
)


@pytest.mark.parametrize("text,kind,expected", PARSER_FIXTURES,
                         ids=[row[0] for row in PARSER_FIXTURES])
def test_fixture_table(text, kind, expected):
    if kind == "const":
        spec = parse_coefficient(text)
        assert spec.is_constant
        assert spec.a0 == expected
    elif kind == "eval":
        spec = parse_coefficient(text)
        assert not spec.is_constant
        for x, value in expected:
            assert eval_coefficient(spec, x) == pytest.approx(value, rel=1e-15)
    elif kind == "error":
        with pytest.raises(expected):
            parse_coefficient(text)
    else:  # eval_error
        x, exc = expected
        spec = parse_coefficient(text)
        with pytest.raises(exc):
            eval_coefficient(spec, x)


def test_right_associativity_oracle():
    # both parse orders evaluated by hand: 2^(3^2) = 512, (2^3)^2 = 64
    assert parse_coefficient("2^3^2").a0 == 512.0
    assert parse_coefficient("2^3^2").a0 != parse_coefficient("(2^3)^2").a0


def test_constant_ignores_x():
    spec = CoefficientSpec.constant(-1.0)
    assert eval_coefficient(spec, 7.0) == -1.0
    folded = parse_coefficient("2 + tanh(0.3)")
    assert folded.is_constant
    assert eval_coefficient(folded, -100.0) == eval_coefficient(folded, 100.0)


def test_error_positions():
    with pytest.raises(UnknownIdentifierError) as info:
        parse_coefficient("y+1")
    assert info.value.position == 1
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_coefficient("1 + @")
    assert info.value.position == 5
    with pytest.raises(ExpressionSyntaxError):
        parse_coefficient("   ")


def test_eval_domain_carries_x():
    spec = parse_coefficient("1/(x-1)")
    with pytest.raises(EvalDomainError) as info:
        eval_coefficient(spec, 1.0)
    assert info.value.x == 1.0


def test_unary_binds_below_power():
    assert parse_coefficient("-2^2").a0 == -4.0
    spec = parse_coefficient("-x^2")
    assert eval_coefficient(spec, 3.0) == -9.0


def test_negative_base_fractional_power_is_domain_error():
    spec = parse_coefficient("(0-x)^0.5")
    assert eval_coefficient(spec, -4.0) == 2.0
    with pytest.raises(EvalDomainError):
        eval_coefficient(spec, 4.0)


def _random_expr(rng, depth):
    if depth == 0 or rng.random() < 0.3:
        if rng.random() < 0.4:
            return "x"
        return repr(float(rng.integers(0, 9)) + 0.5 * float(rng.random() < 0.5))
    roll = rng.random()
    if roll < 0.15:
        return f"-{_random_expr(rng, depth - 1)}"
    if roll < 0.35:
        fn = rng.choice(["sin", "cos", "exp", "tanh", "abs"])
        return f"{fn}({_random_expr(rng, depth - 1)})"
    op = rng.choice(["+", "-", "*", "/", "^"])
    left = _random_expr(rng, depth - 1)
    right = _random_expr(rng, depth - 1)
    if op == "^":
        # keep exponents tame and bases positive via abs() wrapping
        return f"abs({left}) ^ 2"
    return f"({left}) {op} ({right})"


def test_pretty_roundtrip_structural():
    rng = np.random.default_rng(42)
    texts = ["1 + 0.5*sin(x)", "-x^2", "2^3^2", "x*(x-1)/(x+2)",
             "sin(cos(x)) - tanh(x/3)", "abs(x)^2", "2 ^ -3",
             "x - (1 - x)", "(x+1)*(x+2)"]
    texts += [_random_expr(rng, 4) for _ in range(40)]
    for text in texts:
        try:
            spec = parse_coefficient(text)
        except EvalDomainError:
            continue  # x-free draw that folds onto a pole; irrelevant here
        printed = pretty(spec)
        again = parse_coefficient(printed)
        assert again.a0 == spec.a0
        assert again.ast == spec.ast, f"{text!r} -> {printed!r}"
        assert pretty(again) == printed


def test_eval_matches_host_library_to_one_ulp():
    spec = parse_coefficient("1 + 0.5*sin(x)")
    for x in np.linspace(-10.0, 10.0, 10_000):
        x = float(x)
        mine = eval_coefficient(spec, x)
        direct = 1.0 + 0.5 * math.sin(x)
        assert abs(mine - direct) <= math.ulp(direct)


def test_scientific_literals():
    assert parse_coefficient("1e3").a0 == 1000.0
    assert parse_coefficient("2.5E-2").a0 == 0.025
    assert parse_coefficient("1.e1").a0 == 10.0
    with pytest.raises(ExpressionSyntaxError):
        parse_coefficient("1e999")  # overflows a double


def test_pretty_of_expr_keeps_structure_not_value():
    spec = parse_coefficient("x + 2*3")
    # subtrees are not folded, only whole x-free expressions are
    assert isinstance(spec.ast, Binary)
    assert isinstance(spec.ast.right, Binary)
    assert spec.ast.right == Binary("*", Number(2.0), Number(3.0))
