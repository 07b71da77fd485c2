"""Finite fields, finite modules over F_q[[pi]], Hall numbers and the local Hall algebra.

A module of type ``lam`` is ``M_lam = (+)_i F_q[pi]/pi^{lam_i}``, modelled as the
F_q-vector space with basis ``e_{i,k} = pi^k g_i`` (``0 <= k < lam_i``).
Submodules are the pi-stable subspaces; they are enumerated exhaustively by
the census kernel, and each one is classified by the dimensions of
``pi^i N`` and ``pi^i (M/N)`` (a conjugate-partition read-off).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from . import _kernels

__all__ = [
    "FeasibilityError",
    "Guard",
    "FiniteField",
    "get_field",
    "partitions",
    "conjugate",
    "normalize_partition",
    "FinModule",
    "submodule_census",
    "elementary_census",
    "aut_count",
    "aut_count_bruteforce",
    "aut_formula_certified",
    "LocalHallElement",
    "hallx_mul",
    "hallx_comul",
    "tensor_mul",
    "hecke_generator",
    "character_values",
    "torsion_census_global",
]


class FeasibilityError(RuntimeError):
    """A brute-force enumeration would exceed its configured guard."""

    def __init__(self, message: str, guard: str = "", value=None):
        super().__init__(message)
        self.guard = guard
        self.value = value


@dataclass(frozen=True)
class Guard:
    max_size: int = 5
    max_q: int = 4


DEFAULT_GUARD = Guard()


# ---------------------------------------------------------------- finite fields

_MODULI = {
    # low-degree-first coefficient lists of monic irreducible polynomials over F_p
    4: (2, (1, 1, 1)),
    8: (2, (1, 1, 0, 1)),
    9: (3, (1, 0, 1)),
    16: (2, (1, 1, 0, 0, 1)),
    25: (5, (2, 0, 1)),
    27: (3, (1, 2, 0, 1)),
}


def _prime_power(q: int):
    if q < 2:
        return None
    for p in range(2, q + 1):
        if q % p == 0:
            k, r = 0, q
            while r % p == 0:
                r //= p
                k += 1
            return (p, k) if r == 1 else None
    return None


def _poly_has_root(coeffs, p):
    return any(sum(c * pow(x, i, p) for i, c in enumerate(coeffs)) % p == 0 for x in range(p))


def _is_irreducible_mod_p(coeffs, p):
    """Irreducibility over F_p by trial division with all monic polynomials of degree <= deg/2."""
    n = len(coeffs) - 1
    for d in range(1, n // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            div = list(tail) + [1]
            r = list(coeffs)
            for shift in range(n - d, -1, -1):
                c = r[shift + d] % p
                if c:
                    for i, b in enumerate(div):
                        r[shift + i] = (r[shift + i] - c * b) % p
            if not any(x % p for x in r[:d]):
                return False
    return True


class FiniteField:
    """F_q with q = p^k.  Elements are integer codes ``sum c_i p^i`` (polynomial basis)."""

    def __init__(self, q: int):
        pk = _prime_power(q)
        if pk is None:
            raise ValueError(f"{q} is not a prime power")
        p, k = pk
        self.q, self.p, self.k = q, p, k
        if k == 1:
            modulus = (0, 1)
        elif q in _MODULI:
            modulus = _MODULI[q][1]
        else:
            modulus = None
            for tail in itertools.product(range(p), repeat=k):
                cand = tuple(tail) + (1,)
                if cand[0] and _is_irreducible_mod_p(cand, p):
                    modulus = cand
                    break
        if k > 1 and not _is_irreducible_mod_p(modulus, p):
            raise ValueError(f"modulus {modulus} is reducible over F_{p}")
        self.modulus = modulus
        self._build_tables()

    def _vec(self, a):
        v = []
        for _ in range(self.k):
            v.append(a % self.p)
            a //= self.p
        return v

    def _code(self, v):
        return sum(c * self.p ** i for i, c in enumerate(v))

    def _mul_vec(self, u, w):
        p, k = self.p, self.k
        prod = [0] * (2 * k - 1)
        for i, a in enumerate(u):
            if a:
                for j, b in enumerate(w):
                    prod[i + j] = (prod[i + j] + a * b) % p
        mod = self.modulus
        for d in range(len(prod) - 1, k - 1, -1):
            c = prod[d]
            if c:
                for i in range(k + 1):
                    prod[d - k + i] = (prod[d - k + i] - c * mod[i]) % p
        return prod[:k]

    def _build_tables(self):
        q = self.q
        vecs = [self._vec(a) for a in range(q)]
        self.add_table = [self._code([(x + y) % self.p for x, y in zip(vecs[a], vecs[b])]) for a in range(q) for b in range(q)]
        if self.k == 1:
            self.mul_table = [(a * b) % q for a in range(q) for b in range(q)]
        else:
            self.mul_table = [self._code(self._mul_vec(vecs[a], vecs[b])) for a in range(q) for b in range(q)]
        self.neg_table = [next(b for b in range(q) if self.add_table[a * q + b] == 0) for a in range(q)]
        inv = [0] * q
        for a in range(1, q):
            inv[a] = next(b for b in range(1, q) if self.mul_table[a * q + b] == 1)
        self.inv_table = inv
        # field axioms on the full tables
        for a in range(q):
            if self.mul_table[a * q + 1] != a or self.add_table[a * q] != a:
                raise AssertionError("identity laws fail")

    def add(self, a, b):
        return self.add_table[a * self.q + b]

    def sub(self, a, b):
        return self.add_table[a * self.q + self.neg_table[b]]

    def mul(self, a, b):
        return self.mul_table[a * self.q + b]

    def neg(self, a):
        return self.neg_table[a]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in a finite field")
        return self.inv_table[a]

    def elements(self):
        return range(self.q)

    def tables(self):
        return self.add_table, self.mul_table, self.inv_table

    def rank(self, matrix) -> int:
        return _kernels.gf_rank(self.q, self.add_table, self.mul_table, self.inv_table, matrix)

    def __repr__(self):
        return f"FiniteField({self.q})"


@lru_cache(maxsize=None)
def get_field(q: int) -> FiniteField:
    return FiniteField(q)


# ---------------------------------------------------------------- partitions


def normalize_partition(parts: Iterable[int]) -> tuple:
    out = tuple(sorted((int(p) for p in parts if p), reverse=True))
    if any(p < 0 for p in out):
        raise ValueError(f"negative part in {out}")
    return out


def partitions(n: int, max_part: int | None = None):
    """Partitions of n in reverse lexicographic order, as descending tuples."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def conjugate(lam: tuple) -> tuple:
    if not lam:
        return ()
    return tuple(sum(1 for p in lam if p > i) for i in range(lam[0]))


def _partition_from_dims(dims) -> tuple:
    # dims[i] = dim pi^i X ; conjugate parts are the successive drops
    conj = [dims[i] - dims[i + 1] for i in range(len(dims) - 1) if dims[i] - dims[i + 1] > 0]
    return conjugate(tuple(conj))


# ---------------------------------------------------------------- modules


class FinModule:
    """``M_lam`` over F_q[[pi]] as an F_q-vector space with a nilpotent pi."""

    def __init__(self, lam, q: int):
        self.lam = normalize_partition(lam)
        self.q = q
        self.field = get_field(q)
        basis = []
        for i, part in enumerate(self.lam):
            for k in range(part):
                basis.append((i, k))
        self.basis = basis
        index = {b: j for j, b in enumerate(basis)}
        self.pi_next = [index.get((i, k + 1), -1) for i, k in basis]
        self.depth = [k for _, k in basis]
        self.dim = len(basis)

    @property
    def size(self) -> int:
        return self.q ** self.dim

    def elements(self):
        """All elements as tuples of truncated pi-adic expansions, one per summand."""
        per = [list(itertools.product(range(self.q), repeat=p)) for p in self.lam]
        return itertools.product(*per)

    def __repr__(self):
        return f"FinModule({list(self.lam)}, q={self.q})"


def _check_guard(lam, q, guard: Guard | None):
    if guard is None:
        return
    n = sum(lam)
    if n > guard.max_size:
        raise FeasibilityError(f"|lambda| = {n} exceeds guard {guard.max_size}", "max_size", guard.max_size)
    if q > guard.max_q:
        raise FeasibilityError(f"q_x = {q} exceeds guard {guard.max_q}", "max_q", guard.max_q)


@lru_cache(maxsize=None)
def _census_cached(lam: tuple, q: int) -> dict:
    mod = FinModule(lam, q)
    f = mod.field
    raw = _kernels.subspace_census(q, f.add_table, f.mul_table, f.inv_table, mod.dim, mod.pi_next, mod.depth)
    out: dict = {}
    for (sub, quot), cnt in raw.items():
        key = (_partition_from_dims(sub), _partition_from_dims(quot))
        out[key] = out.get(key, 0) + cnt
    return out


def submodule_census(lam, q: int, guard: Guard | None = DEFAULT_GUARD) -> dict:
    """``{(mu, nu): #{N <= M_lam : N ~ M_mu, M_lam/N ~ M_nu}}`` by exhaustive enumeration."""
    lam = normalize_partition(lam)
    _check_guard(lam, q, guard)
    return dict(_census_cached(lam, q))


@lru_cache(maxsize=None)
def elementary_census(lam: tuple, L: int, q: int) -> dict:
    """``{nu: #{N <= socle(M_lam), dim N = L, M_lam/N ~ M_nu}}``.

    Subobjects isomorphic to ``M_(1^L)`` are exactly the L-dimensional subspaces
    of the socle, so this only enumerates subspaces of an l(lam)-dimensional space.
    """
    lam = normalize_partition(lam)
    mod = FinModule(lam, q)
    f = mod.field
    socle = [j for j, (i, k) in enumerate(mod.basis) if k == lam[i] - 1]
    s = len(socle)
    out: dict = {}
    if L > s:
        return out
    n = mod.dim
    for pivots in itertools.combinations(range(s), L):
        pset = set(pivots)
        free = [(r, c) for r, p in enumerate(pivots) for c in range(p + 1, s) if c not in pset]
        for vals in itertools.product(range(q), repeat=len(free)):
            small = [[0] * s for _ in range(L)]
            for r, p in enumerate(pivots):
                small[r][p] = 1
            for (r, c), x in zip(free, vals):
                small[r][c] = x
            rows = [[0] * n for _ in range(L)]
            for r in range(L):
                for c in range(s):
                    rows[r][socle[c]] = small[r][c]
            quot = []
            for i in range(n + 1):
                keep = [c for c in range(n) if mod.depth[c] < i]
                if keep and L:
                    rk = f.rank([[row[c] for c in keep] for row in rows])
                else:
                    rk = 0
                quot.append(n - len(keep) + rk - L)
            nu = _partition_from_dims(quot)
            out[nu] = out.get(nu, 0) + 1
    return out


# ---------------------------------------------------------------- automorphisms


def _aut_closed_form(lam: tuple, q: int) -> int:
    conj = conjugate(lam)
    val = Fraction(q) ** sum(c * c for c in conj)
    mult: dict = {}
    for p in lam:
        mult[p] = mult.get(p, 0) + 1
    for m in mult.values():
        for k in range(1, m + 1):
            val *= 1 - Fraction(1, q ** k)
    assert val.denominator == 1
    return int(val)


def _end_dim(lam) -> int:
    return sum(min(a, b) for a in lam for b in lam)


def aut_count_bruteforce(lam, q: int, limit: int = 300_000) -> int:
    """Exhaustive count of invertible endomorphisms of M_lam.

    An endomorphism sends generator g_i to any m_i with pi^{lam_i} m_i = 0; its
    matrix on the F_q-basis is assembled and tested for full rank.
    """
    lam = normalize_partition(lam)
    if not lam:
        return 1
    if q ** _end_dim(lam) > limit:
        raise FeasibilityError(f"|End M_{list(lam)}| = {q}^{_end_dim(lam)} exceeds {limit}", "aut_limit", limit)
    mod = FinModule(lam, q)
    f = mod.field
    n = mod.dim
    index = {b: j for j, b in enumerate(mod.basis)}
    # ker pi^{lam_i}: basis vectors e_{j,k} with k >= lam_j - lam_i
    kers = [[index[(j, k)] for j, pj in enumerate(lam) for k in range(pj) if k >= pj - pi] for pi in lam]
    count = 0
    for choice in itertools.product(*[itertools.product(range(q), repeat=len(kb)) for kb in kers]):
        cols = []
        for i, (kb, coeffs) in enumerate(zip(kers, choice)):
            img = [0] * n
            for j, c in zip(kb, coeffs):
                img[j] = c
            for _ in range(lam[i]):
                cols.append(list(img))
                nxt = [0] * n
                for j, c in enumerate(img):
                    if c and mod.pi_next[j] >= 0:
                        nxt[mod.pi_next[j]] = c
                img = nxt
        if f.rank(cols) == n:
            count += 1
    return count


@lru_cache(maxsize=None)
def aut_formula_certified(q: int, max_size: int = 4, limit: int = 70_000) -> tuple:
    """Compare the closed form with exhaustive counts for every feasible |lam| <= max_size.

    Returns the tuple of certified partitions; raises AssertionError on any mismatch.
    """
    checked = []
    for n in range(1, max_size + 1):
        for lam in partitions(n):
            if q ** _end_dim(lam) > limit:
                continue
            brute = aut_count_bruteforce(lam, q, limit)
            if brute != _aut_closed_form(lam, q):
                raise AssertionError(f"|Aut M_{list(lam)}| closed form disagrees at q={q}")
            checked.append(lam)
    return tuple(checked)


def aut_count(lam, q: int, fast: bool = True) -> int:
    """|Aut M_lam|.  The closed form is used only after certification at this q."""
    lam = normalize_partition(lam)
    if not lam:
        return 1
    if not fast:
        return aut_count_bruteforce(lam, q)
    aut_formula_certified(q)
    return _aut_closed_form(lam, q)


# ---------------------------------------------------------------- local Hall algebra


class LocalHallElement:
    """Finitely supported function on partitions (iso classes of torsion modules)."""

    __slots__ = ("terms", "q")

    def __init__(self, terms: Mapping, q: int):
        self.terms = {normalize_partition(k): v for k, v in terms.items() if v}
        self.q = q

    @classmethod
    def basis(cls, lam, q: int, coeff=1) -> "LocalHallElement":
        return cls({normalize_partition(lam): coeff}, q)

    def __add__(self, other):
        d = dict(self.terms)
        for k, v in other.terms.items():
            d[k] = d.get(k, 0) + v
        return LocalHallElement(d, self.q)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "LocalHallElement":
        return LocalHallElement({k: v * c for k, v in self.terms.items()}, self.q)

    def __mul__(self, other):
        if isinstance(other, LocalHallElement):
            return hallx_mul(self, other)
        return self.scale(other)

    __rmul__ = scale

    def __eq__(self, other):
        return isinstance(other, LocalHallElement) and self.q == other.q and self.terms == other.terms

    def __repr__(self):
        return f"LocalHallElement({ {list(k).__repr__(): v for k, v in self.terms.items()} }, q={self.q})"


def hall_number(lam, mu, nu, q: int, guard: Guard | None = DEFAULT_GUARD) -> int:
    """g^lam_{mu,nu}: submodules of type mu with quotient of type nu."""
    lam, mu, nu = normalize_partition(lam), normalize_partition(mu), normalize_partition(nu)
    if sum(lam) != sum(mu) + sum(nu):
        return 0
    return submodule_census(lam, q, guard).get((mu, nu), 0)


def hallx_mul(f: LocalHallElement, g: LocalHallElement, guard: Guard | None = DEFAULT_GUARD) -> LocalHallElement:
    """1_mu * 1_nu = sum_lam g^lam_{mu nu} 1_lam (torsion Euler form is trivial)."""
    if f.q != g.q:
        raise ValueError("local Hall elements over different fields")
    q = f.q
    out: dict = {}
    for mu, a in f.terms.items():
        for nu, b in g.terms.items():
            n = sum(mu) + sum(nu)
            for lam in partitions(n):
                c = submodule_census(lam, q, guard).get((mu, nu), 0)
                if c:
                    out[lam] = out.get(lam, 0) + a * b * c
    return LocalHallElement(out, q)


def hallx_comul(f: LocalHallElement, guard: Guard | None = DEFAULT_GUARD) -> dict:
    """Delta(1_lam) = sum g^lam_{mu nu} |Aut mu||Aut nu|/|Aut lam| 1_mu (x) 1_nu (sub first)."""
    q = f.q
    out: dict = {}
    for lam, a in f.terms.items():
        alam = aut_count(lam, q)
        for (mu, nu), cnt in submodule_census(lam, q, guard).items():
            coeff = Fraction(cnt * aut_count(mu, q) * aut_count(nu, q), alam) * a
            key = (mu, nu)
            out[key] = out.get(key, 0) + coeff
    return {k: v for k, v in out.items() if v}


def tensor_mul(x: dict, y: dict, q: int, guard: Guard | None = DEFAULT_GUARD) -> dict:
    """Componentwise product on A (x) A (no twist on torsion)."""
    out: dict = {}
    for (a1, b1), c1 in x.items():
        for (a2, b2), c2 in y.items():
            left = hallx_mul(LocalHallElement.basis(a1, q), LocalHallElement.basis(a2, q), guard)
            right = hallx_mul(LocalHallElement.basis(b1, q), LocalHallElement.basis(b2, q), guard)
            for l, lc in left.terms.items():
                for r, rc in right.terms.items():
                    out[(l, r)] = out.get((l, r), 0) + c1 * c2 * lc * rc
    return {k: v for k, v in out.items() if v}


def hecke_generator(r: int, q: int) -> LocalHallElement:
    """b_r = q^{r(r-1)/2} 1_{(1^r)}; b_0 is the unit."""
    if r == 0:
        return LocalHallElement.basis((), q)
    return LocalHallElement.basis((1,) * r, q, Fraction(q) ** (r * (r - 1) // 2))


@lru_cache(maxsize=None)
def _elementary_cached(lam: tuple, L: int, q: int) -> dict:
    return elementary_census(lam, L, q)


def character_values(b: Iterable, q: int, N: int) -> dict:
    """{lam: chi(1_lam)} for |lam| <= N, where chi(b_r) = b[r-1] and chi(b_r) = 0 past len(b).

    Values come from chi(1_{(1^L)}) chi(1_nu) = sum_lam g^lam_{(1^L), nu} chi(1_lam)
    with nu = lam minus its first column.  Every other lam in that sum is
    strictly smaller in lexicographic order, so one pass in lex order solves
    the system.  Partitions longer than the rank get value 0.
    """
    b = list(b)
    rank = len(b)
    while rank and not b[rank - 1]:
        rank -= 1
    vals: dict = {(): Fraction(1)}
    for n in range(1, N + 1):
        shapes = sorted(lam for lam in partitions(n) if len(lam) <= rank)
        for lam in shapes:
            L = len(lam)
            nu = normalize_partition(x - 1 for x in lam)
            elem = b[L - 1] / Fraction(q) ** (L * (L - 1) // 2)
            rhs = elem * vals.get(nu, 0)
            lead = None
            for other in shapes:
                if other > lam:
                    break
                g = _elementary_cached(other, L, q).get(nu, 0)
                if not g:
                    continue
                if other == lam:
                    lead = g
                else:
                    rhs = rhs - g * vals[other]
            vals[lam] = rhs / lead
    return vals


# ---------------------------------------------------------------- global torsion classes


def torsion_census_global(q: int, n: int, places) -> list:
    """Iso classes of torsion sheaves of degree n.

    ``places`` is a list of ``(label, degree)`` covering all places of degree <= n.
    Returns ``[(assignment, aut)]`` where ``assignment`` is a tuple of
    ``(label, partition)`` pairs and ``aut`` is the product of local Aut counts at
    ``q_x = q^deg``.
    """
    places = [(lab, d) for lab, d in places if d <= n]
    out = []

    def rec(i, remaining, acc):
        if remaining == 0:
            aut = 1
            for lab, lam, d in acc:
                aut *= aut_count(lam, q ** d)
            out.append((tuple((lab, lam) for lab, lam, _ in acc), aut))
            return
        if i == len(places):
            return
        lab, d = places[i]
        rec(i + 1, remaining, acc)
        for size in range(1, remaining // d + 1):
            for lam in partitions(size):
                rec(i + 1, remaining - size * d, acc + [(lab, lam, d)])

    rec(0, n, [])
    return out
