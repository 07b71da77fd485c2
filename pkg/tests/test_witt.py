from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from hallshuffle import witt
from hallshuffle.polyrat import RationalFunction, var
from hallshuffle.witt import CurveData, GlobalCharacter, WittVector, boxplus, boxtimes, star

N = 6
nonzero = st.fractions(min_value=-6, max_value=6, max_denominator=5).filter(bool)
roots = st.lists(nonzero, min_size=0, max_size=3)


def split(rs, trunc=N):
    """prod (1 - a t) as a Witt vector of rank len(rs)."""
    s = [Fraction(1)] + [Fraction(0)] * trunc
    for a in rs:
        for n in range(trunc, 0, -1):
            s[n] -= a * s[n - 1]
    return WittVector.from_series(s, trunc, rank=len(rs) if len(rs) <= trunc else None)


def generic(bs):
    return WittVector([Fraction(b) for b in bs], N)


vectors = st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=3), min_size=N, max_size=N).map(generic)


@given(roots, roots)
def test_sum_and_product_on_split_vectors(a, b):
    # sum concatenates roots, product multiplies them pairwise
    assert boxplus(split(a), split(b)) == split(a + b)
    assert boxtimes(split(a), split(b)) == split([x * y for x in a for y in b])


@given(nonzero, nonzero)
def test_teichmuller_is_multiplicative(a, b):
    assert boxtimes(WittVector.teichmuller(a, N), WittVector.teichmuller(b, N)) == WittVector.teichmuller(a * b, N)


@given(vectors, vectors, vectors)
def test_ring_axioms(u, v, w):
    assert boxtimes(u, boxplus(v, w)) == boxplus(boxtimes(u, v), boxtimes(u, w))
    assert boxtimes(boxtimes(u, v), w) == boxtimes(u, boxtimes(v, w))
    assert boxtimes(u, WittVector.one(N)) == u
    assert boxplus(u, WittVector.zero(N)) == u


@given(roots)
def test_star_inverts_roots(a):
    assert star(split(a)) == split([1 / x for x in a])


def test_star_needs_rank():
    with pytest.raises(ValueError):
        star(WittVector([1, 2], 4))


def test_power_sums_round_trip():
    u = generic([1, -2, 3, 0, 5, Fraction(1, 2)])
    assert WittVector.from_power_sums(u.power_sums(), N) == u


def test_teichmuller_product_example():
    # [[2]] * [[3]] = [[6]]: 1 - 6t
    out = boxtimes(WittVector.teichmuller(2, 4), WittVector.teichmuller(3, 4))
    assert out.to_json() == {"trunc": 4, "b": ["-6", "0", "0", "0"]}


def _irreducible_count(p, d):
    x = sympy.Symbol("x")
    count = 0
    for tail in range(p ** d):
        cs = [(tail // p ** i) % p for i in range(d)]
        poly = sympy.Poly(x ** d + sum(c * x ** i for i, c in enumerate(cs)), x, modulus=p)
        if poly.is_irreducible:
            count += 1
    return count


@pytest.mark.parametrize("p", [2, 3])
def test_place_counts_match_sympy_irreducibles(p):
    # places of P^1 of degree d: monic irreducibles of degree d, plus infinity when d = 1
    counts = CurveData.p1(p).place_counts(4)
    for d in range(1, 5):
        assert counts[d] == _irreducible_count(p, d) + (d == 1)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_zeta_euler_product_matches_rational_form(q):
    curve = CurveData.p1(q)
    s = witt.zeta(curve, "truncated", N=10)
    expected = [Fraction(q ** (n + 1) - 1, q - 1) for n in range(11)]
    assert s == expected
    assert witt.series_from_ratfun(witt.zeta(curve), "t", 10) == expected


def test_zeta_rational_string():
    assert witt.zeta(CurveData.p1(2)).to_string() == "1 | (1-t)*(1-2*t)"


def test_elliptic_point_counts():
    # y^2 = x^3 + ... over F_3 with trace 1: #E(F_3) = 3, #E(F_9) = 15
    e = CurveData(3, 1, (1, -1, 3))
    assert e.point_counts(2)[1:] == [3, 15]


def test_curve_validation():
    with pytest.raises(ValueError):
        CurveData(2, 1, (1,))


def test_local_kappa_series():
    # (1+t)/(1+2t) = 1 - t + 2t^2 - 4t^3 + ...
    k = witt.kappa(CurveData.p1(2), "local", 1, 4)
    assert k.b == [-1, 2, -4, 8]


def test_global_kappa_is_zeta_ratio():
    # zeta(-t)/zeta(-qt) on P^1 = (1+qt)(1+q^2 t) / ((1+t)(1+qt)) = (1+q^2 t)/(1+t)
    q = 3
    k = witt.kappa(CurveData.p1(q), "global", 1, 5)
    t = var("t")
    expected = witt.series_from_ratfun(RationalFunction(1 + q * q * t, [(1 + t, 1)]), "t", 5)
    assert k.series() == expected


@pytest.mark.parametrize("q", [2, 3])
def test_lhom_closed_equals_euler_product(q):
    curve = CurveData.p1(q)
    a, b = GlobalCharacter(curve, twist=Fraction(2)), GlobalCharacter(curve, twist=Fraction(5, 3))
    trunc = witt.lhom(a, b, "truncated", 6)
    closed = witt.series_from_ratfun(witt.lhom(a, b, "closed"), "t", 6)
    assert trunc == closed


def test_lhom_functional_equation_symbolic():
    curve = CurveData.p1(2)
    a, b = GlobalCharacter(curve, twist=var("l")), GlobalCharacter(curve, twist=var("m"))
    ok, eps, _ = witt.feq_check(a, b)
    assert ok
    assert eps == RationalFunction(var("l", -2) * var("m", 2))
    assert not witt.feq_check(a, b, eps=1)[0]


@pytest.mark.parametrize("q", [2, 3, 4])
def test_rs_kernel_is_a_coboundary(q):
    c, lam, lamt = witt.rs_kernel(CurveData.p1(q))
    swap = {"s": (1, "t", 1), "t": (1, "s", 1)}
    assert c * lam.substitute(swap) == lam
    assert c * lamt.substitute(swap) == lamt
    assert c * c.substitute(swap) == 1


@pytest.mark.parametrize("q", [2, 3, 4])
def test_rs_kernel_closed_form(q):
    # q zeta(x)/zeta(x/q) = (q - x)/(1 - q x) with x = t/s
    c, _, _ = witt.rs_kernel(CurveData.p1(q))
    x = var("t") * var("s", -1)
    assert c == RationalFunction(q - x, [(1 - q * x, 1)])
