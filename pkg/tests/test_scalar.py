from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from hallshuffle.scalar import (
    ModeMismatch,
    QuadScalar,
    ScalarMode,
    VScalar,
    format_scalar,
    parse_scalar,
    scalar_eval,
)

rats = st.fractions(min_value=-20, max_value=20, max_denominator=12)
qs = st.sampled_from([2, 3, 4, 5, 9])


def quad(q):
    return st.builds(lambda a, b: QuadScalar(a, b, q), rats, rats)


def to_sympy(x: QuadScalar):
    return sympy.Rational(x.a.numerator, x.a.denominator) + sympy.Rational(x.b.numerator, x.b.denominator) * sympy.sqrt(x.q)


@given(qs.flatmap(lambda q: st.tuples(quad(q), quad(q))))
def test_quad_arithmetic_matches_sympy(pair):
    x, y = pair
    for ours, theirs in [(x + y, to_sympy(x) + to_sympy(y)),
                         (x - y, to_sympy(x) - to_sympy(y)),
                         (x * y, to_sympy(x) * to_sympy(y))]:
        assert sympy.simplify(to_sympy(ours) - theirs) == 0
    if y != 0:
        assert sympy.simplify(to_sympy(x / y) - to_sympy(x) / to_sympy(y)) == 0


@given(qs.flatmap(quad))
def test_quad_format_parse_round_trip(x):
    assert parse_scalar(format_scalar(x), ScalarMode.numeric(x.q)) == x


@given(st.lists(rats, min_size=1, max_size=4), st.lists(rats, min_size=1, max_size=3))
def test_vscalar_round_trip_and_inverse(num, den):
    if not any(den):
        den = [Fraction(1)]
    x = VScalar(num, den)
    mode = ScalarMode.symbolic()
    assert parse_scalar(format_scalar(x), mode) == x
    if x != 0:
        assert x * x.inverse() == 1


def test_grammar_examples():
    sym = ScalarMode.symbolic()
    assert format_scalar(parse_scalar("3*v^2-1/2", sym)) == "3*v^2-1/2"
    assert format_scalar(parse_scalar("-v", sym)) == "-v"
    assert parse_scalar("7") == 7
    # numeric mode folds v^2 = q
    assert parse_scalar("3*v^2-1/2", ScalarMode.numeric(2)) == Fraction(11, 2)


def test_v_squared_is_q_in_both_modes():
    for q in (2, 3, 4):
        v = ScalarMode.numeric(q).v()
        assert v * v == q
    v = ScalarMode.symbolic().v()
    assert scalar_eval(v * v, 5) == 5


def test_square_q_collapses_to_rational():
    x = QuadScalar(1, 1, 4)
    assert x.b == 0 and x == 3


def test_mixing_modes_is_rejected():
    with pytest.raises(ModeMismatch):
        QuadScalar(1, 1, 2) + QuadScalar(1, 1, 3)
    with pytest.raises(ModeMismatch):
        QuadScalar(1, 1, 2) + VScalar.v()


def test_zero_division():
    with pytest.raises(ZeroDivisionError):
        QuadScalar(0, 0, 2).inverse()
