import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from hallshuffle.polyrat import (
    DegreeWindow,
    LaurentPoly,
    RationalFunction,
    RegionError,
    expand_region,
    mono,
    parse_laurent,
    parse_ratfun,
    symmetrize,
    var,
)

NAMES = ("t1", "t2", "t3")
S = {n: sympy.Symbol(n) for n in NAMES}

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
monos = st.tuples(*[st.integers(-3, 3) for _ in NAMES])
polys = st.dictionaries(monos, coeffs, max_size=5)


def build(d) -> LaurentPoly:
    out = LaurentPoly()
    for exps, c in d.items():
        out = out + LaurentPoly.monomial(mono(**dict(zip(NAMES, exps))), c)
    return out


def sym(d):
    return sum((sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[S[n] ** e for n, e in zip(NAMES, exps)])
                for exps, c in d.items()), sympy.Integer(0))


def back(p: LaurentPoly):
    return sum((sympy.Rational(Fraction(c).numerator, Fraction(c).denominator) * sympy.Mul(*[S[n] ** e for n, e in m])
                for m, c in p.items()), sympy.Integer(0))


@given(polys, polys)
def test_laurent_ring_ops_match_sympy(a, b):
    A, B = build(a), build(b)
    assert sympy.expand(back(A + B) - sym(a) - sym(b)) == 0
    assert sympy.expand(back(A - B) - sym(a) + sym(b)) == 0
    assert sympy.expand(back(A * B) - sym(a) * sym(b)) == 0


@given(polys)
def test_laurent_string_round_trip(a):
    A = build(a)
    assert parse_laurent(A.to_string()) == A


@given(polys, polys.filter(bool))
def test_ratfun_round_trip_and_cancellation(a, b):
    A, B = build(a), build(b)
    if not B:
        return
    f = RationalFunction(A) / B
    assert parse_ratfun(f.to_string()) == f
    assert f * B == A


@given(polys, polys)
def test_divexact_inverts_multiplication(a, b):
    A, B = build(a), build(b)
    if not A or not B:
        return
    assert (A * B).divexact(B) == A


def test_equality_is_mathematical_not_syntactic():
    t1, t2 = var("t1"), var("t2")
    lhs = RationalFunction((t1 + t2) * (t1 - t2)) / (t1 - t2)
    assert lhs == t1 + t2
    assert lhs.is_laurent()
    assert lhs.laurent() == t1 + t2


def test_substitution_scales_and_renames():
    t1, t2 = var("t1"), var("t2")
    f = RationalFunction(LaurentPoly.const(1), [(1 - t2 * t1 ** -1, 1), (1 - 3 * t1, 1)])
    g = f.substitute({"t1": (2, "t2", 1)})
    assert g == RationalFunction(LaurentPoly.const(2), [(1 - 6 * t2, 1)])


def _geometric_oracle(factors, window_names, lo, hi):
    """Coefficients of prod 1/(1 - c_i m_i) by summing over exponent vectors directly."""
    out = {}
    for ks in itertools.product(range(0, 8), repeat=len(factors)):
        exps = {}
        coeff = Fraction(1)
        for k, (c, m) in zip(ks, factors):
            coeff *= Fraction(c) ** k
            for n, e in m.items():
                exps[n] = exps.get(n, 0) + k * e
        if all(lo <= exps.get(n, 0) <= hi for n in window_names):
            key = mono(**exps)
            out[key] = out.get(key, 0) + coeff
    return {k: v for k, v in out.items() if v}


@pytest.mark.parametrize("factors", [
    [(1, {"t1": -1, "t2": 1}), (3, {"t1": 1})],
    [(Fraction(1, 2), {"t1": -1, "t2": 1}), (2, {"t2": -1, "t3": 1})],
    [(2, {"t1": -1, "t2": 1}), (-1, {"t1": -2, "t3": 2}), (5, {"t3": 1})],
])
def test_region_expansion_against_direct_geometric_sums(factors):
    names = sorted({n for _, m in factors for n in m})
    den = []
    for c, m in factors:
        den.append((1 - LaurentPoly.monomial(mono(**m), c), 1))
    f = RationalFunction(LaurentPoly.const(1), den)
    got = expand_region(f, names, DegreeWindow.box(names, -3, 3))
    assert got == _geometric_oracle(factors, names, -3, 3)


def test_region_expansion_swaps_a_large_factor():
    # 1/(1 - t1/t2) with t1 >> t2 is -t2/t1 * 1/(1 - t2/t1)
    t1, t2 = var("t1"), var("t2")
    f = RationalFunction(LaurentPoly.const(1), [(1 - t1 * t2 ** -1, 1)])
    got = expand_region(f, ["t1", "t2"], DegreeWindow.box(["t1", "t2"], -3, 3))
    assert got == {mono(t1=-k, t2=k): -1 for k in range(1, 4)}


def test_region_rejects_factor_without_dominant_term():
    # ``a`` is a coefficient symbol, so 1 - a has no dominant unit in the region
    t1, a = var("t1"), var("a")
    f = RationalFunction(t1, [(1 - a, 1)])
    with pytest.raises(RegionError):
        expand_region(f, ["t1"], DegreeWindow.box(["t1"], -2, 2))


def test_symmetrize_two_variables():
    t1, t2 = var("t1"), var("t2")
    assert symmetrize(t1 ** 2, ["t1", "t2"]) == t1 ** 2 + t2 ** 2
