import itertools
from fractions import Fraction

import pytest
import sympy

from hallshuffle import cohp1
from hallshuffle.cohp1 import Coherent, HallElement, bundle, hom_ext, place_by_name, torsion
from hallshuffle.finmod import FeasibilityError
from hallshuffle.scalar import ScalarMode


def e(*degs, q=2):
    return HallElement.basis(bundle(*degs), q)


def v(q=2):
    return ScalarMode.numeric(q).v()


# ------------------------------------------------------------ places


@pytest.mark.parametrize("p", [2, 3])
def test_finite_places_are_sympy_irreducibles(p):
    x = sympy.Symbol("x")
    names = {pl.name for pl in cohp1.places(p, 3) if not pl.is_inf}
    for d in range(1, 4):
        want = 0
        for tail in itertools.product(range(p), repeat=d):
            poly = sympy.Poly(x ** d + sum(c * x ** i for i, c in enumerate(tail)), x, modulus=p)
            want += poly.is_irreducible
        assert sum(1 for pl in cohp1.places(p, 3) if pl.degree == d and not pl.is_inf) == want
    assert "x" in names


@pytest.mark.parametrize("q", [2, 3, 4])
def test_place_count_identity(q):
    a = cohp1.place_counts(q, 6)
    for n in range(1, 7):
        assert sum(d * a[d] for d in range(1, n + 1) if n % d == 0) == q ** n + 1


# ------------------------------------------------------------ Hom / Ext


@pytest.mark.parametrize("a,b", [(a, b) for a in range(-2, 3) for b in range(-2, 3)])
def test_line_bundle_cohomology(a, b):
    # Hom(O(a), O(b)) = H^0(O(b-a)), Ext^1 = H^1(O(b-a)) = H^0(O(a-b-2))^dual
    assert hom_ext(bundle(a), bundle(b)) == (max(b - a + 1, 0), max(a - b - 1, 0))


@pytest.mark.parametrize("E,F", [
    (bundle(1), bundle(-1)),
    (bundle(0, 1), bundle(0)),
    (bundle(0), bundle(2, -1)),
])
def test_hom_ext_against_form_enumeration(E, F):
    h, x = hom_ext(E, F)
    assert cohp1.hom_ext_bruteforce(E, F, 2) == (2 ** h, 2 ** x)


def test_torsion_hom_ext():
    T = torsion((place_by_name(2, "x"), (1,)))
    assert hom_ext(T, bundle(0)) == (0, 1)
    assert hom_ext(bundle(0), T) == (1, 0)


@pytest.mark.parametrize("r1,d1,r2,d2", [(1, 0, 1, 3), (2, 1, 1, -2), (1, 4, 2, 0), (2, -3, 2, 5)])
def test_euler_exponent_is_hom_minus_ext(r1, d1, r2, d2):
    E = bundle(*([d1] + [0] * (r1 - 1)))
    F = bundle(*([d2] + [0] * (r2 - 1)))
    h, x = hom_ext(E, F)
    assert cohp1.euler_exponent((r1, E.degree), (r2, F.degree)) == h - x


@pytest.mark.parametrize("V", [(0, 0), (1, 0), (2, 0), (1, 1, 0)])
def test_aut_bundle_against_enumeration(V):
    assert cohp1.aut_bundle(V, 2) == cohp1.aut_bundle_bruteforce(V, 2)


# ------------------------------------------------------------ Hall products (hand computed)


def test_product_of_trivial_bundles():
    # q + 1 saturated lines O in O + O, twisted by <O, O> = v
    assert e(0) * e(0) == HallElement.basis(bundle(0, 0), 2, 3 * v())


def test_products_of_o_and_o1():
    # sub O in O + O(1): q^2 choices; sub O(1): one choice, twist <O, O(1)> = v^2 = q
    assert e(0) * e(1) == HallElement.basis(bundle(1, 0), 2, 4)
    assert e(1) * e(0) == HallElement.basis(bundle(1, 0), 2, 2)


def test_nonsplit_extension_appears():
    # O(-1) by O(1): sub O(-1) in O + O has (q^2-1)q choices, in O(1) + O(-1) q^3; twist v^-1
    got = e(-1) * e(1)
    assert got.get(bundle(0, 0)) == 6 / v()
    assert got.get(bundle(1, -1)) == 8 / v()
    assert e(1) * e(-1) == HallElement.basis(bundle(1, -1), 2, v() ** 3)


@pytest.mark.parametrize("triple", [(0, 0, 0), (-1, 0, 1), (1, -1, 0), (0, 1, -1)])
def test_associativity_rank_three(triple):
    a, b, c = (e(d) for d in triple)
    assert (a * b) * c == a * (b * c)


def test_torsion_product_at_one_place():
    x = place_by_name(2, "x")
    Tx = HallElement.basis(torsion((x, (1,))), 2)
    prod = Tx * Tx
    assert prod.get(torsion((x, (1, 1)))) == 3
    assert prod.get(torsion((x, (2,)))) == 1


def test_torsion_at_distinct_places_commutes():
    x, y = place_by_name(2, "x"), place_by_name(2, "inf")
    a, b = HallElement.basis(torsion((x, (1,))), 2), HallElement.basis(torsion((y, (1,))), 2)
    assert a * b == b * a


# ------------------------------------------------------------ coproduct, Hecke, Psi


def test_line_coproduct_with_torsion():
    out = cohp1.comult_line_coh(0, 2, 1)
    assert out[(Coherent(), bundle(0))] == 1 and out[(bundle(0), Coherent())] == 1
    deg1 = [k for k in out if k[1].is_torsion and not k[1].is_zero]
    assert len(deg1) == 3  # one per rational point of P^1(F_2)
    assert all(out[k] == v() / 2 for k in deg1)


def test_windowed_coproduct_of_split_rank_two():
    # |Aut(O(1)+O)| = 4; sub O: g = 4, <O(1),O> = 1; sub O(1): g = 1, <O,O(1)> = q
    out = cohp1.comult_window(e(1, 0), (1, 1), (-1, 1))
    assert out == {(bundle(0), bundle(1)): 1, (bundle(1), bundle(0)): Fraction(1, 2)}


def test_hecke_raises_degree():
    T = torsion((place_by_name(2, "inf"), (1,)))
    assert cohp1.hecke(T, e(0), "T") == HallElement.basis(bundle(1), 2, 1 / v())
    assert cohp1.hecke(T, e(0), "T*").terms.keys() == {bundle(-1)}


def test_hecke_on_rank_two_is_guarded():
    T = torsion((place_by_name(2, "x"), (1,)))
    with pytest.raises(FeasibilityError):
        cohp1.hecke(T, e(0, 0), "T")


def test_psi_series_degree_one():
    psi = cohp1.psi_series(2, 1)
    assert len(psi[1].terms) == 3
    assert all(c == v() / 2 for c in psi[1].terms.values())


# ------------------------------------------------------------ labels


def test_coherent_json_round_trip():
    E = Coherent((2, -1), ((place_by_name(3, "x^2+1"), (2, 1)), (place_by_name(3, "inf"), (1,))))
    assert Coherent.from_json(E.to_json(), 3) == E
    f = HallElement({E: 5, bundle(0): 1}, 3)
    assert HallElement.from_json(f.to_json(), 3) == f


def test_coherent_json_rejects_unknown_fields():
    with pytest.raises(ValueError):
        Coherent.from_json({"bundle": [0], "rank": 1}, 2)


def test_guard_on_large_fields():
    with pytest.raises(FeasibilityError):
        e(0, q=16) * e(0, q=16)


def test_symbolic_mode_keeps_v_formal():
    m = ScalarMode.symbolic()
    a, b = HallElement.basis(bundle(-1), 2, 1, m), HallElement.basis(bundle(1), 2, 1, m)
    got = a * b
    assert got.get(bundle(0, 0)) == 6 * m.v().inverse()
    assert got.get(bundle(1, -1)) == 8 * m.v().inverse()


def test_hecke_on_unit_is_counit():
    x = place_by_name(2, "x")
    one = HallElement.unit(2)
    for direction in ("T", "T*"):
        assert cohp1.hecke(torsion((x, (1,))), one, direction) == HallElement({}, 2)
        assert cohp1.hecke(Coherent(), one, direction) == one
