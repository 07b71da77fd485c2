import pytest
import sympy
from hypothesis import given, strategies as st

from hallshuffle import shuffle, witt
from hallshuffle.polyrat import LaurentPoly, RationalFunction, var
from hallshuffle.shuffle import Kernel, ShuffleElement, shuffle_mul, shuffle_product, sym_shuffle_mul

G = ShuffleElement.generator
s, t = var("s"), var("t")
t1, t2 = var("t1"), var("t2")


def p1(q=2):
    return shuffle.curve_kernels(witt.CurveData.p1(q))


def kernel_at(K, x, y):
    return K.at(1, 1, x, y)


# ------------------------------------------------------------ products


@pytest.mark.parametrize("a,b", [(0, 1), (2, -1), (-3, -3)])
def test_degree_one_product_has_two_shuffles(a, b):
    K = p1(3)
    got = shuffle_mul(G(1, a), G(1, b), K).function((1, 1))
    c = kernel_at(K, "t1", "t2")
    assert got == t1 ** a * t2 ** b + c * t1 ** b * t2 ** a


def test_trivial_kernel_gives_symmetric_algebra():
    K = Kernel.trivial()
    got = shuffle_mul(G(1, 2), G(1, 5), K).function()
    assert got == t1 ** 2 * t2 ** 5 + t1 ** 5 * t2 ** 2


exps = st.integers(-2, 2)


@given(exps, exps, exps)
def test_associativity_with_p1_kernel(a, b, c):
    K = p1(2)
    x, y, z = G(1, a), G(1, b), G(1, c)
    assert shuffle_mul(shuffle_mul(x, y, K), z, K) == shuffle_mul(x, shuffle_mul(y, z, K), K)


@given(exps, exps)
def test_twisted_symmetry_of_products(a, b):
    # F(t1, t2) = c(t1, t2) F(t2, t1) for an antisymmetric kernel
    K = p1(2)
    F = shuffle_mul(G(1, a), G(1, b), K).function()
    swapped = F.substitute({"t1": (1, "t2", 1), "t2": (1, "t1", 1)})
    assert F == kernel_at(K, "t1", "t2") * swapped


def test_unit_is_neutral():
    K = p1(2)
    x = G(1, 3)
    assert shuffle_mul(ShuffleElement.unit(), x, K) == x
    assert shuffle_mul(x, ShuffleElement.unit(), K) == x


def test_missing_kernel_entry():
    K = Kernel({(1, 1): RationalFunction(1)})
    with pytest.raises(shuffle.ShuffleError):
        shuffle_mul(G(1, 0), G(2, 0), K)


# ------------------------------------------------------------ symmetric representation


def test_symmetric_product_degree_one():
    K = p1(2)
    got = sym_shuffle_mul(G(1, 1), G(1, 0), K, "lam").function()
    lam = K.at(1, 1, "t1", "t2", "lam")
    lam_sw = K.at(1, 1, "t2", "t1", "lam")
    assert got == t1 * lam + t2 * lam_sw


def test_symmetric_product_with_unit_datum_is_symmetrization():
    K = Kernel.trivial()
    assert sym_shuffle_mul(G(1, 2), G(1, 0), K, "lam").function() == t1 ** 2 + t2 ** 2


@pytest.mark.parametrize("which", ["lam", "lamt"])
@pytest.mark.parametrize("degs", [(1, -1), (0, 2), (1, -1, 0)])
def test_psi_intertwines_products(which, degs):
    K = p1(2)
    gens = [G(1, d) for d in degs]
    lhs = shuffle.psi_map(shuffle_product(gens, K), K, which)
    acc = shuffle.psi_map(gens[0], K, which)
    for g in gens[1:]:
        acc = sym_shuffle_mul(acc, shuffle.psi_map(g, K, which), K, which)
    assert lhs == acc


def test_coboundary_flags():
    K = p1(3)
    assert K.antisymmetric
    assert K.coboundary_ok("lam") and K.coboundary_ok("lamt")
    # t/s keeps c(s,t)c(t,s) = 1 but breaks the coboundary; a constant breaks both
    assert K.scaled(t * s ** -1).antisymmetric
    assert not K.scaled(t * s ** -1).coboundary_ok("lam")
    assert not K.scaled(2).antisymmetric


# ------------------------------------------------------------ relations


def test_commutativity_relation_for_trivial_kernel():
    K = Kernel.trivial()
    prods = [shuffle_mul(G(1, 0), G(1, 1), K), shuffle_mul(G(1, 1), G(1, 0), K)]
    assert shuffle.shuffle_relations(prods) == [[1, -1]]


def test_generic_two_component_kernel_one_relation_per_bidegree():
    c12 = RationalFunction(s - 2 * t, [(s - 3 * t, 1)])
    c21 = RationalFunction(t - 3 * s, [(t - 2 * s, 1)])
    one = RationalFunction(1)
    K = Kernel({(1, 2): c12, (2, 1): c21, (1, 1): one, (2, 2): one})
    assert K.antisymmetric
    lo, hi = -2, 2
    for k in range(2 * lo, 2 * hi + 1):
        prods = []
        for a in range(lo, hi + 1):
            b = k - a
            if lo <= b <= hi:
                prods += [shuffle_mul(G(1, a), G(2, b), K), shuffle_mul(G(2, b), G(1, a), K)]
        # one cleared quadratic relation for each (a, b) with a + b = k - 1 and both shifts in range
        expected = sum(1 for a in range(lo, hi) if lo <= k - 1 - a < hi)
        assert len(shuffle.shuffle_relations(prods)) == expected


@pytest.mark.parametrize("q", [2, 4])
def test_quadratic_relations_p1(q):
    ok, witness = shuffle.quadratic_check(p1(q), (-3, 3))
    assert ok, witness


def test_quadratic_check_trivial_kernel():
    assert shuffle.quadratic_check(Kernel.trivial(), (-2, 2), P=LaurentPoly.const(1), Q=LaurentPoly.const(1))[0]


rat = st.fractions(min_value=-3, max_value=3, max_denominator=3)


@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(rat, min_size=n, max_size=n), min_size=1, max_size=4)))
def test_nullspace_matches_sympy(rows):
    ncols = len(rows[0])
    ours = shuffle.nullspace(rows, ncols)
    M = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in rows])
    assert len(ours) == len(M.nullspace())
    assert shuffle.rank(rows) == M.rank()
    for v in ours:
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)


# ------------------------------------------------------------ regularity


def test_regular_products_are_laurent():
    K = p1(2)
    prod = sym_shuffle_mul(G(1, 1), G(1, -1), K, "lamt")
    assert shuffle.regularity_check(prod, K)[0]


def test_single_generator_is_regular():
    assert shuffle.regularity_check(G(1, 2), p1(2))[0]


def test_second_order_pole_fails():
    K = p1(2)
    bad_lamt = {k: v / (1 - t * s ** -1) for k, v in K.lamt.items()}
    Kb = Kernel(K.c, K.lam, bad_lamt)
    assert not shuffle.regularity_check(G(1, 0), Kb)[0]


# ------------------------------------------------------------ curve kernels


def test_elliptic_literal_r1_is_zeta_ratio():
    E = shuffle.curve_kernels(None, "elliptic", 1, "literal", a="a", q=3)
    z = shuffle.elliptic_zeta(3, "a", "u")
    # c_{X,1}(t, s) = zeta(t/s)/zeta(q t/s)
    assert E.at(1, 1, "t", "s") == z.evaluate({"u": t * s ** -1}) / z.evaluate({"u": 3 * t * s ** -1})


def test_elliptic_rs_r2_is_antisymmetric_with_symbolic_trace():
    assert shuffle.curve_kernels(None, "elliptic", 2, "rs", a="a", q=3).antisymmetric


def test_elliptic_literal_is_not_antisymmetric():
    assert not shuffle.curve_kernels(None, "elliptic", 2, "literal", a="a", q=3).antisymmetric


def test_elliptic_from_curve_data():
    curve = witt.CurveData(3, 1, (1, -2, 3))
    K = shuffle.curve_kernels(curve, "elliptic", 1)
    assert K.antisymmetric


def test_graeffe_squares_roots():
    # 1 - a w + q w^2 with roots x, y: (1 - x^2 u)(1 - y^2 u) = 1 - (a^2 - 2q) u + q^2 u^2
    a, q = 2, 3
    assert shuffle.graeffe([1, -a, q], 2) == [1, -(a * a - 2 * q), q * q]
    assert shuffle.graeffe([1, -a, q], 1) == [1, -a, q]


# ------------------------------------------------------------ serialization


def test_kernel_json_round_trip():
    K = p1(2)
    assert Kernel.from_json(K.to_json()).c == K.c


def test_element_json_round_trip():
    x = shuffle_mul(G(1, 1), G(1, -2), p1(2))
    assert ShuffleElement.from_json(x.to_json()) == x


def test_bad_word_label():
    with pytest.raises(shuffle.ShuffleError):
        ShuffleElement.from_json({"1,1": "t1"})
