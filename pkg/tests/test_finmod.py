import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from hallshuffle import finmod
from hallshuffle.finmod import FeasibilityError, Guard, LocalHallElement, get_field, partitions


# ------------------------------------------------------------ oracle: abelian p-groups


def _span(gens, lam, p):
    mods = [p ** k for k in lam]
    seen = {tuple(0 for _ in lam)}
    frontier = list(seen)
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = tuple((a + b) % m for a, b, m in zip(x, g, mods))
                if y not in seen:
                    seen.add(y)
                    new.append(y)
        frontier = new
    return frozenset(seen)


def _type_from_torsion_counts(sizes, p):
    # sizes[k] = |{x : p^k x = 0}|; parts >= k counted by log_p(sizes[k]/sizes[k-1])
    ge = []
    for k in range(1, len(sizes)):
        r, n = sizes[k] // sizes[k - 1], 0
        while r > 1:
            r //= p
            n += 1
        ge.append(n)
    parts = []
    for k, n in enumerate(ge, start=1):
        nxt = ge[k] if k < len(ge) else 0
        parts += [k] * (n - nxt)
    return tuple(sorted(parts, reverse=True))


def oracle_census(lam, p):
    """{(sub type, quotient type): count} by enumerating subgroups of prod Z/p^lam_i."""
    mods = [p ** k for k in lam]
    G = list(itertools.product(*[range(m) for m in mods]))
    top = max(lam)
    subs = set()
    for gens in itertools.combinations_with_replacement(G, len(lam)):
        subs.add(_span(gens, lam, p))

    def kill(x, k):
        return all((a * p ** k) % m == 0 for a, m in zip(x, mods))

    def mult(x, k):
        return tuple((a * p ** k) % m for a, m in zip(x, mods))

    out = {}
    for H in subs:
        hs = [sum(1 for x in H if kill(x, k)) for k in range(top + 1)]
        qs = [sum(1 for x in G if mult(x, k) in H) // len(H) for k in range(top + 1)]
        key = (_type_from_torsion_counts(hs, p), _type_from_torsion_counts(qs, p))
        out[key] = out.get(key, 0) + 1
    return out


CASES = [(lam, 2) for n in range(1, 5) for lam in partitions(n)] + \
        [(lam, 3) for n in range(1, 4) for lam in partitions(n)]


@pytest.mark.parametrize("lam,p", CASES, ids=[f"{list(l)}-q{p}" for l, p in CASES])
def test_submodule_census_matches_subgroup_enumeration(lam, p):
    assert finmod.submodule_census(lam, p) == oracle_census(lam, p)


# ------------------------------------------------------------ Hall numbers and automorphisms


@pytest.mark.parametrize("q", [2, 3, 4])
def test_base_hall_numbers(q):
    assert finmod.hall_number((1, 1), (1,), (1,), q) == q + 1
    assert finmod.hall_number((2,), (1,), (1,), q) == 1


def _aut_macdonald(lam, q):
    # q^{|lam| + 2 n(lam)} prod_i prod_{j=1}^{m_i} (1 - q^{-j})
    conj = finmod.conjugate(lam)
    n_lam = sum(c * (c - 1) // 2 for c in conj)
    out = Fraction(q) ** (sum(lam) + 2 * n_lam)
    for part in set(lam):
        for j in range(1, lam.count(part) + 1):
            out *= 1 - Fraction(1, q ** j)
    return out


@pytest.mark.parametrize("q", [2, 3, 4])
def test_aut_count_matches_product_formula(q):
    for n in range(1, 5):
        for lam in partitions(n):
            assert finmod.aut_count(lam, q) == _aut_macdonald(lam, q)


def test_aut_bruteforce_small():
    assert finmod.aut_count_bruteforce((1, 1), 2) == 6  # |GL_2(F_2)|
    assert finmod.aut_count_bruteforce((2, 1), 2) == 8


def test_hall_product_of_points():
    x = LocalHallElement.basis((1,), 2)
    assert finmod.hallx_mul(x, x).terms == {(1, 1): 3, (2,): 1}


partitions_upto3 = st.sampled_from([lam for n in range(0, 4) for lam in partitions(n)])


@given(partitions_upto3, partitions_upto3, partitions_upto3)
def test_local_hall_product_is_associative(a, b, c):
    A, B, C = (LocalHallElement.basis(x, 2) for x in (a, b, c))
    if sum(a) + sum(b) + sum(c) > 5:
        return
    assert (A * B) * C == A * (B * C)


@given(partitions_upto3, partitions_upto3)
def test_local_hall_product_is_commutative(a, b):
    # the local Hall algebra is commutative (Hall polynomials are symmetric)
    if sum(a) + sum(b) > 5:
        return
    A, B = LocalHallElement.basis(a, 3), LocalHallElement.basis(b, 3)
    assert A * B == B * A


@pytest.mark.parametrize("q", [2, 3])
def test_hecke_generators_are_grouplike_sums(q):
    # Delta(b_r) = sum_i b_i (x) b_{r-i}
    for r in range(1, 4):
        got = finmod.hallx_comul(finmod.hecke_generator(r, q))
        want = {}
        for i in range(r + 1):
            bi, bj = finmod.hecke_generator(i, q), finmod.hecke_generator(r - i, q)
            (ki, ci), = bi.terms.items()
            (kj, cj), = bj.terms.items()
            want[(ki, kj)] = ci * cj
        assert got == want


def test_character_values_rank_one():
    # a rank-1 character kills 1_(1,1) and sends 1_(n) to b^n
    vals = finmod.character_values([5], 2, 3)
    assert vals[(3,)] == 125
    assert vals.get((1, 1), 0) == 0


# ------------------------------------------------------------ fields and guards


@pytest.mark.parametrize("q", [2, 3, 4, 5, 8, 9])
def test_finite_field_tables_form_a_field(q):
    f = get_field(q)
    els = list(f.elements())
    assert len(els) == q
    for a in els:
        assert f.add(a, f.neg(a)) == 0
        if a:
            assert f.mul(a, f.inv(a)) == 1
    for a, b, c in itertools.product(els, repeat=3):
        assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))


def test_unsupported_field_size():
    with pytest.raises(ValueError):
        get_field(6)


def test_guard_rejects_large_modules():
    with pytest.raises(FeasibilityError) as exc:
        finmod.submodule_census((3, 3), 2, Guard(max_size=5))
    assert exc.value.guard == "max_size"
