"""Coherent sheaves on P^1 over F_q: iso classes, counts, Hall products and friends.

Iso classes are canonical data: a splitting type ``(d_1 >= ... >= d_r)`` for
the bundle part and a tuple of ``(Place, partition)`` pairs for the torsion
part.  Structure constants come from two censuses:

* bundle by bundle: extension classes ``e in Ext^1(B, A)`` are enumerated and
  the middle term is read off from ``h^0(C(k)) = h^0(A(k)) + nullity(delta_k)``
  where ``delta_k: H^0(B(k)) -> H^1(A(k))`` is cup product with ``e``;
* line bundle by torsion: ``Ext^1(T, L)`` splits over places into
  ``Hom(T_x, K_x/O_x)`` and the middle term is ``L(sum m_x x) + ker(phi)``.

Counts of subobjects then follow from Riedtmann's formula
``g^C_{A,B} = |Ext^1(B,A)_C| |Aut C| / (|Aut A| |Aut B| |Hom(B,A)|)``.

Hall product convention: ``1_A * 1_B = <B,A> sum_C g^C_{AB} 1_C`` where
``g^C_{AB}`` counts subobjects ``A' ~ A`` of ``C`` with ``C/A' ~ B``.
Comultiplication (sub first): ``Delta(1_C) = sum <B,A> g^C_{AB} a_A a_B / a_C 1_A (x) 1_B``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from . import _kernels
from .finmod import (
    FeasibilityError,
    Guard,
    aut_count,
    get_field,
    normalize_partition,
    partitions,
    submodule_census,
    torsion_census_global,
)
from .scalar import ScalarMode, format_scalar, parse_scalar

__all__ = [
    "Place",
    "Coherent",
    "HallElement",
    "CohGuard",
    "places",
    "place_by_name",
    "place_counts",
    "scalar_product",
    "bundle",
    "torsion",
    "hom_ext",
    "hom_ext_bruteforce",
    "euler_form",
    "euler_exponent",
    "aut_bundle",
    "aut_bundle_bruteforce",
    "aut_count_coh",
    "count_subsheaves",
    "extension_census",
    "hall_mul",
    "hall_mul_basis",
    "hecke",
    "comult_window",
    "comult_line_coh",
    "eisenstein",
    "eisenstein_product",
    "psi_series",
    "m_operator",
    "torsion_classes",
]


@dataclass(frozen=True)
class CohGuard:
    max_q: int = 4
    max_rank: int = 3
    max_ext_vectors: int = 1 << 22
    max_torsion_degree: int = 4


DEFAULT_COH_GUARD = CohGuard()
_LOCAL_GUARD = Guard(max_size=5, max_q=256)


# ---------------------------------------------------------------- places


@dataclass(frozen=True, order=True)
class Place:
    """A closed point: ``inf`` or a monic irreducible polynomial (coefficient codes, low first)."""

    degree: int
    code: int  # -1 for inf, else sum c_i q^i including the leading 1
    name: str

    @property
    def is_inf(self) -> bool:
        return self.code < 0

    def __repr__(self):
        return f"Place({self.name})"


def _poly_name(code: int, q: int) -> str:
    coeffs = []
    while code:
        coeffs.append(code % q)
        code //= q
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        if i == 0:
            terms.append(str(c))
            continue
        xs = "x" if i == 1 else f"x^{i}"
        terms.append(xs if c == 1 else f"{c}*{xs}")
    return "+".join(terms)


@lru_cache(maxsize=None)
def _places_cached(q: int, D: int) -> tuple:
    f = get_field(q)
    irr = _kernels.irreducible_sieve(q, f.add_table, f.mul_table, D)
    out = [Place(1, -1, "inf")]
    for d in range(1, D + 1):
        for code in sorted(int(c) for c in irr[d]):
            out.append(Place(d, code, _poly_name(code, q)))
    return tuple(out)


def places(q: int, D: int) -> list:
    """``inf`` plus all monic irreducibles of degree <= D."""
    if q > 9:
        raise FeasibilityError(f"q = {q} has no field table", "max_q", 9)
    return list(_places_cached(q, D))


def place_counts(q: int, D: int) -> list:
    """a_d for d = 0..D from the sieve (index 0 unused)."""
    out = [0] * (D + 1)
    for p in places(q, D):
        out[p.degree] += 1
    return out


def place_by_name(q: int, name: str, D: int = 4) -> Place:
    name = name.replace(" ", "")
    for p in places(q, D):
        if p.name == name:
            return p
    raise ValueError(f"{name!r} is not a place of degree <= {D} over F_{q}")


# ---------------------------------------------------------------- iso classes


def _norm_torsion(items) -> tuple:
    acc: dict = {}
    for p, lam in items:
        lam = normalize_partition(lam)
        if not lam:
            continue
        if p in acc:
            raise ValueError(f"place {p.name} listed twice")
        acc[p] = lam
    return tuple(sorted(acc.items()))


@dataclass(frozen=True)
class Coherent:
    """Bundle part (splitting type) plus torsion part (place -> partition)."""

    bundle: tuple = ()
    torsion: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "bundle", tuple(sorted((int(d) for d in self.bundle), reverse=True)))
        object.__setattr__(self, "torsion", _norm_torsion(self.torsion))

    @property
    def rank(self) -> int:
        return len(self.bundle)

    @property
    def torsion_degree(self) -> int:
        return sum(p.degree * sum(lam) for p, lam in self.torsion)

    @property
    def degree(self) -> int:
        return sum(self.bundle) + self.torsion_degree

    @property
    def is_bundle(self) -> bool:
        return not self.torsion

    @property
    def is_torsion(self) -> bool:
        return not self.bundle

    @property
    def is_zero(self) -> bool:
        return not self.bundle and not self.torsion

    def bundle_part(self) -> "Coherent":
        return Coherent(self.bundle)

    def torsion_part(self) -> "Coherent":
        return Coherent((), self.torsion)

    def torsion_map(self) -> dict:
        return dict(self.torsion)

    def __add__(self, other: "Coherent") -> "Coherent":
        tor = dict(self.torsion)
        for p, lam in other.torsion:
            if p in tor:
                tor[p] = normalize_partition(tor[p] + lam)
            else:
                tor[p] = lam
        return Coherent(self.bundle + other.bundle, tuple(tor.items()))

    def sort_key(self):
        return (self.rank, self.degree, tuple(-d for d in self.bundle),
                tuple((p.degree, p.code, lam) for p, lam in self.torsion))

    def to_json(self) -> dict:
        return {"bundle": list(self.bundle), "torsion": {p.name: list(lam) for p, lam in self.torsion}}

    def label(self) -> str:
        parts = []
        if self.bundle:
            parts.append("+".join(f"O({d})" for d in self.bundle))
        for p, lam in self.torsion:
            parts.append(f"T[{p.name}:{','.join(map(str, lam))}]")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return self.label()

    @classmethod
    def from_json(cls, d, q: int) -> "Coherent":
        if not isinstance(d, Mapping):
            raise ValueError("coherent label must be an object with 'bundle' and 'torsion'")
        unknown = set(d) - {"bundle", "torsion"}
        if unknown:
            raise ValueError(f"unknown field(s) {sorted(unknown)} in coherent label")
        tor = d.get("torsion", {}) or {}
        items = []
        for name, lam in tor.items():
            deg_hint = max(4, len(name))
            items.append((place_by_name(q, name, min(deg_hint, 6)), tuple(int(x) for x in lam)))
        return cls(tuple(int(x) for x in d.get("bundle", [])), tuple(items))


def bundle(*degrees) -> Coherent:
    if len(degrees) == 1 and isinstance(degrees[0], (tuple, list)):
        degrees = tuple(degrees[0])
    return Coherent(tuple(degrees))


def torsion(*items) -> Coherent:
    """``torsion((place, partition), ...)``."""
    return Coherent((), tuple(items))


ZERO = Coherent()


# ---------------------------------------------------------------- Hom / Ext / Euler form


def _h0(m: int) -> int:
    return max(m + 1, 0)


def _h1(m: int) -> int:
    return max(-m - 1, 0)


def _torsion_hom_dim(A: Coherent, B: Coherent) -> int:
    ta, tb = A.torsion_map(), B.torsion_map()
    dim = 0
    for p, lam in ta.items():
        mu = tb.get(p)
        if mu:
            dim += p.degree * sum(min(a, b) for a in lam for b in mu)
    return dim


def hom_ext(E: Coherent, F: Coherent) -> tuple:
    """(dim Hom(E, F), dim Ext^1(E, F)) over F_q."""
    hom = ext = 0
    for a in E.bundle:
        for b in F.bundle:
            hom += _h0(b - a)
            ext += _h1(b - a)
    hom += E.rank * F.torsion_degree
    ext += F.rank * E.torsion_degree
    t = _torsion_hom_dim(E, F)
    hom += t
    ext += t
    return hom, ext


def hom_ext_bruteforce(E: Coherent, F: Coherent, q: int) -> tuple:
    """|Hom| and |Ext^1| by direct enumeration on small inputs.

    Bundle maps are tuples of homogeneous forms (all coefficient vectors are
    listed); Ext^1 between line bundles is Serre-dual to forms of degree
    a-b-2; torsion homs at a place are counted as generator images killed by
    pi^{lam_i}.  Only torsion supported at degree-1 places is accepted.
    """
    if any(p.degree != 1 for p, _ in E.torsion + F.torsion):
        raise FeasibilityError("brute-force Hom only at degree-1 places", "place_degree", 1)

    def forms(m):
        return sum(1 for _ in itertools.product(range(q), repeat=_h0(m))) if m >= 0 else 1

    hom = ext = 1
    for a in E.bundle:
        for b in F.bundle:
            hom *= forms(b - a)
            ext *= forms(a - b - 2)
    # bundle -> torsion: images of the local generator, one per summand
    for _a in E.bundle:
        for _p, mu in F.torsion:
            hom *= _count_killed(mu, 10 ** 6, q)
    # torsion -> bundle: Ext^1(T, V) ~ Hom(V, T)^dual
    for _b in F.bundle:
        for _p, lam in E.torsion:
            ext *= _count_killed(lam, 10 ** 6, q)
    tf = F.torsion_map()
    for p, lam in E.torsion:
        mu = tf.get(p)
        if mu:
            c = 1
            for part in lam:
                c *= _count_killed(mu, part, q)
            hom *= c
            ext *= c
    return hom, ext


def _count_killed(mu, k: int, q: int) -> int:
    """#{m in M_mu : pi^k m = 0}, counted element by element."""
    from .finmod import FinModule

    mod = FinModule(mu, q)
    cnt = 0
    for elt in mod.elements():
        ok = True
        for comp, part in zip(elt, mod.lam):
            # pi^k kills the expansion iff its valuation is >= part - k
            for pos, c in enumerate(comp):
                if c and pos < part - k:
                    ok = False
                    break
            if not ok:
                break
        cnt += ok
    return cnt


def euler_exponent(rd1: tuple, rd2: tuple, g: int = 0) -> int:
    """Exponent of v in <(r,d),(r',d')> = v^{r d' - r' d + (1-g) r r'}."""
    (r, d), (r2, d2) = rd1, rd2
    return r * d2 - r2 * d + (1 - g) * r * r2


def euler_form(rd1: tuple, rd2: tuple, g: int = 0, mode: ScalarMode | None = None):
    mode = mode or ScalarMode.symbolic()
    return mode.vpow(euler_exponent(rd1, rd2, g))


def _ef(A: Coherent, B: Coherent, mode: ScalarMode):
    return mode.vpow(euler_exponent((A.rank, A.degree), (B.rank, B.degree)))


def _cartan(A: Coherent, B: Coherent, mode: ScalarMode):
    e = euler_exponent((A.rank, A.degree), (B.rank, B.degree)) + euler_exponent((B.rank, B.degree), (A.rank, A.degree))
    return mode.vpow(e)


# ---------------------------------------------------------------- automorphisms


def _gl_order(m: int, q: int) -> int:
    out = 1
    for i in range(m):
        out *= q ** m - q ** i
    return out


def aut_bundle(V: tuple, q: int) -> int:
    """|Aut(+O(d_i))| = prod |GL_{m_j}| * q^{dim End - sum m_j^2}."""
    mult: dict = {}
    for d in V:
        mult[d] = mult.get(d, 0) + 1
    end = sum(_h0(b - a) for a in V for b in V)
    out = q ** (end - sum(m * m for m in mult.values()))
    for m in mult.values():
        out *= _gl_order(m, q)
    return out


def aut_bundle_bruteforce(V: tuple, q: int, limit: int = 200_000) -> int:
    """Count invertible endomorphisms of +O(d_i) as matrices of forms.

    An endomorphism is invertible iff its determinant (a form of degree 0) is
    a nonzero constant; equivalently its value at every point is invertible,
    which for the graded block-triangular shape reduces to the diagonal blocks
    of equal degree.  The count enumerates all form matrices and tests the
    equal-degree blocks for full rank over F_q.
    """
    V = tuple(sorted(V, reverse=True))
    n = len(V)
    f = get_field(q)
    slots = [(i, j, _h0(V[i] - V[j])) for i in range(n) for j in range(n)]
    total = 1
    for *_, k in slots:
        total *= q ** k
    if total > limit:
        raise FeasibilityError(f"|End| = {total} exceeds {limit}", "aut_limit", limit)
    count = 0
    for choice in itertools.product(*[itertools.product(range(q), repeat=k) for *_, k in slots]):
        mat = {}
        for (i, j, k), coeffs in zip(slots, choice):
            mat[(i, j)] = coeffs
        ok = True
        for d in sorted(set(V)):
            idx = [i for i in range(n) if V[i] == d]
            block = [[mat[(i, j)][0] for j in idx] for i in idx]
            if f.rank(block) != len(idx):
                ok = False
                break
        count += ok
    return count


def aut_torsion(T: Coherent, q: int) -> int:
    out = 1
    for p, lam in T.torsion:
        out *= aut_count(lam, q ** p.degree)
    return out


def aut_count_coh(E: Coherent, q: int) -> int:
    """|Aut(V + T)| = |Aut V| |Aut T| q^{dim Hom(V, T)}."""
    return aut_bundle(E.bundle, q) * aut_torsion(E, q) * q ** (E.rank * E.torsion_degree)


# ---------------------------------------------------------------- extension censuses


def _ext_layout(A: tuple, B: tuple):
    """Coordinates of Ext^1(B, A) and the cup-product blocks delta_k."""
    coords = {}
    for i, a in enumerate(A):
        for j, b in enumerate(B):
            for u in range(1, b - a):
                coords[(i, j, u)] = len(coords)
    degs = list(A) + list(B)
    lo, hi = min(degs), max(degs)
    ks = list(range(-hi - 1, -lo + 1))
    blocks = []
    for k in ks:
        rows = [(i, u2) for i, a in enumerate(A) for u2 in range(1, _h1(a + k) + 1)]
        cols = [(j, al) for j, b in enumerate(B) for al in range(_h0(b + k))]
        idx = []
        for i, u2 in rows:
            for j, al in cols:
                idx.append(coords.get((i, j, u2 + al), -1))
        blocks.append((len(rows), len(cols), idx))
    return coords, ks, blocks


def _splitting_from_h0(h0: dict, ks: list, rank: int) -> tuple:
    # h0[k] - h0[k-1] = #{c_i >= -k}
    ge = {}
    for k in ks[1:]:
        ge[-k] = h0[k] - h0[k - 1]
    levels = sorted(ge)
    if ge[levels[0]] != rank:
        raise AssertionError("splitting type below the expected range")
    out = []
    for s in levels:
        n_eq = ge[s] - ge.get(s + 1, 0)
        out.extend([s] * n_eq)
    return tuple(sorted(out, reverse=True))


@lru_cache(maxsize=None)
def _bundle_ext_census(A: tuple, B: tuple, q: int, max_vectors: int) -> dict:
    coords, ks, blocks = _ext_layout(A, B)
    n = len(coords)
    if q ** n > max_vectors:
        raise FeasibilityError(f"|Ext^1| = {q}^{n} exceeds guard {max_vectors}", "max_ext_vectors", max_vectors)
    f = get_field(q)
    raw = _kernels.ext_census(q, f.add_table, f.mul_table, f.inv_table, n, blocks, True)
    out: dict = {}
    for prof, cnt in raw.items():
        h0 = {k: sum(_h0(a + k) for a in A) + int(nul) for k, nul in zip(ks, prof)}
        C = _splitting_from_h0(h0, ks, len(A) + len(B))
        out[C] = out.get(C, 0) + cnt
    return out


def _local_kernel_census(lam: tuple, qx: int) -> dict:
    """{(ker type, image length m): #{phi: M_lam -> K/O}}."""
    out: dict = {}
    cen = submodule_census(lam, qx, _LOCAL_GUARD)
    for (mu, nu), cnt in cen.items():
        if len(nu) > 1:
            continue
        m = sum(nu)
        inj = 1 if m == 0 else qx ** m - qx ** (m - 1)
        out[(mu, m)] = out.get((mu, m), 0) + cnt * inj
    return out


def _line_torsion_census(d: int, T: Coherent, q: int) -> dict:
    """{C: |Ext^1(T, O(d))_C|} with C = O(d + sum deg(x) m_x) + ker(phi)."""
    per_place = []
    for p, lam in T.torsion:
        opts = [(p, mu, m, cnt) for (mu, m), cnt in _local_kernel_census(lam, q ** p.degree).items()]
        per_place.append(opts)
    out: dict = {}
    for combo in itertools.product(*per_place):
        shift = sum(p.degree * m for p, _, m, _ in combo)
        cnt = 1
        for *_, c in combo:
            cnt *= c
        C = Coherent((d + shift,), tuple((p, mu) for p, mu, _, _ in combo))
        out[C] = out.get(C, 0) + cnt
    return out


def extension_census(A: Coherent, B: Coherent, q: int, guard: CohGuard = DEFAULT_COH_GUARD) -> dict:
    """{C: |Ext^1(B, A)_C|} for the supported pairs (A, B)."""
    _check_q(q, guard)
    if A.is_bundle and B.is_bundle:
        if A.rank + B.rank > guard.max_rank:
            raise FeasibilityError(f"rank {A.rank + B.rank} exceeds guard {guard.max_rank}", "max_rank", guard.max_rank)
        if not A.bundle or not B.bundle:
            return {A + B: 1}
        raw = _bundle_ext_census(A.bundle, B.bundle, q, guard.max_ext_vectors)
        return {Coherent(C): cnt for C, cnt in raw.items()}
    if A.is_bundle and A.rank == 1 and B.is_torsion:
        _check_tdeg(B, guard)
        return _line_torsion_census(A.bundle[0], B, q)
    raise FeasibilityError(f"extension census of {B} by {A} is not supported", "shape", (A.label(), B.label()))


def _check_q(q, guard):
    if q > guard.max_q:
        raise FeasibilityError(f"q = {q} exceeds guard {guard.max_q}", "max_q", guard.max_q)


def _check_tdeg(T, guard):
    if T.torsion_degree > guard.max_torsion_degree:
        raise FeasibilityError(
            f"torsion degree {T.torsion_degree} exceeds guard {guard.max_torsion_degree}",
            "max_torsion_degree", guard.max_torsion_degree)


def _local_product(A: Coherent, B: Coherent, q: int) -> dict:
    """Torsion * torsion: product of local Hall products, {C: g^C_{AB}}."""
    ta, tb = A.torsion_map(), B.torsion_map()
    per_place = []
    for p in sorted(set(ta) | set(tb)):
        mu, nu = ta.get(p, ()), tb.get(p, ())
        qx = q ** p.degree
        n = sum(mu) + sum(nu)
        opts = []
        for lam in partitions(n):
            c = submodule_census(lam, qx, _LOCAL_GUARD).get((mu, nu), 0)
            if c:
                opts.append((p, lam, c))
        per_place.append(opts)
    out = {}
    for combo in itertools.product(*per_place):
        cnt = 1
        for *_, c in combo:
            cnt *= c
        out[Coherent((), tuple((p, lam) for p, lam, _ in combo))] = cnt
    return out


@lru_cache(maxsize=None)
def _structure_constants(A: Coherent, B: Coherent, q: int, guard: CohGuard) -> tuple:
    """((C, g^C_{AB}), ...) for every C with a nonzero count."""
    if A.is_zero:
        return ((B, 1),)
    if B.is_zero:
        return ((A, 1),)
    if A.is_torsion and B.is_torsion:
        _check_tdeg(A + B, guard)
        return tuple(_local_product(A, B, q).items())
    if A.is_torsion:
        # the torsion subsheaf of C is unique, so C = B_bundle + (A * B_torsion)
        out = []
        for T, c in _local_product(A, B.torsion_part(), q).items():
            out.append((B.bundle_part() + T, c))
        return tuple(out)
    hom_ba = hom_ext(B, A)[0]
    census = extension_census(A, B, q, guard)
    denom = aut_count_coh(A, q) * aut_count_coh(B, q) * q ** hom_ba
    out = []
    for C, cnt in census.items():
        num = cnt * aut_count_coh(C, q)
        if num % denom:
            raise AssertionError(f"non-integral Hall number for {C} from {A}, {B}")
        out.append((C, num // denom))
    return tuple(sorted(out, key=lambda cg: cg[0].sort_key()))


def count_subsheaves(C: Coherent, A: Coherent, B: Coherent, q: int, guard: CohGuard = DEFAULT_COH_GUARD) -> int:
    """g^C_{A,B} = #{A' <= C : A' ~ A, C/A' ~ B}."""
    if (C.rank, C.degree) != (A.rank + B.rank, A.degree + B.degree):
        return 0
    return dict(_structure_constants(A, B, q, guard)).get(C, 0)


# ---------------------------------------------------------------- Hall elements


class HallElement:
    """Finitely supported function on iso classes of coherent sheaves."""

    __slots__ = ("terms", "q", "mode")

    def __init__(self, terms: Mapping | None = None, q: int = 2, mode: ScalarMode | None = None):
        self.q = q
        self.mode = mode or ScalarMode.numeric(q)
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def basis(cls, E: Coherent, q: int, coeff=1, mode=None) -> "HallElement":
        return cls({E: coeff}, q, mode)

    @classmethod
    def unit(cls, q: int, mode=None) -> "HallElement":
        return cls({ZERO: 1}, q, mode)

    def _same(self, other):
        if self.q != other.q:
            raise ValueError("Hall elements over different fields")

    def __add__(self, other):
        self._same(other)
        d = dict(self.terms)
        for k, v in other.terms.items():
            d[k] = d.get(k, 0) + v
        return HallElement(d, self.q, self.mode)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "HallElement":
        return HallElement({k: v * c for k, v in self.terms.items()}, self.q, self.mode)

    def __mul__(self, other):
        if isinstance(other, HallElement):
            return hall_mul(self, other)
        return self.scale(other)

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, HallElement):
            return NotImplemented
        keys = set(self.terms) | set(other.terms)
        return self.q == other.q and all(self.terms.get(k, 0) == other.terms.get(k, 0) for k in keys)

    def __iter__(self):
        return iter(sorted(self.terms.items(), key=lambda kv: kv[0].sort_key()))

    def bundle_projection(self) -> "HallElement":
        return HallElement({k: v for k, v in self.terms.items() if k.is_bundle}, self.q, self.mode)

    def get(self, E: Coherent):
        return self.terms.get(E, 0)

    def dual(self) -> "HallElement":
        """f*(V) = f(V^dual) on bundles."""
        out = {}
        for k, v in self.terms.items():
            if not k.is_bundle:
                raise ValueError("duality is implemented on bundles only")
            out[Coherent(tuple(-d for d in k.bundle))] = v
        return HallElement(out, self.q, self.mode)

    def to_json(self) -> list:
        return [[k.to_json(), _fmt(v)] for k, v in self]

    @classmethod
    def from_json(cls, data, q: int, mode=None) -> "HallElement":
        mode = mode or ScalarMode.numeric(q)
        terms = {}
        for item in data:
            if not (isinstance(item, (list, tuple)) and len(item) == 2):
                raise ValueError("Hall element JSON must be a list of [label, scalar] pairs")
            E = Coherent.from_json(item[0], q)
            terms[E] = terms.get(E, 0) + parse_scalar(str(item[1]), mode)
        return cls(terms, q, mode)

    def __repr__(self):
        return "HallElement(" + ", ".join(f"{k.label()}: {_fmt(v)}" for k, v in self) + ")"


def _fmt(v) -> str:
    if hasattr(v, "to_string"):
        return v.to_string()
    return format_scalar(v)


def hall_mul_basis(A: Coherent, B: Coherent, q: int, mode: ScalarMode | None = None,
                   guard: CohGuard = DEFAULT_COH_GUARD) -> dict:
    mode = mode or ScalarMode.numeric(q)
    tw = _ef(B, A, mode)
    return {C: tw * g for C, g in _structure_constants(A, B, q, guard)}


def hall_mul(f: HallElement, g: HallElement, guard: CohGuard = DEFAULT_COH_GUARD) -> HallElement:
    f._same(g)
    out: dict = {}
    for A, a in f.terms.items():
        for B, b in g.terms.items():
            for C, c in hall_mul_basis(A, B, f.q, f.mode, guard).items():
                out[C] = out.get(C, 0) + a * b * c
    return HallElement(out, f.q, f.mode)


# ---------------------------------------------------------------- Hecke operators


def _is_cyclic(T: Coherent) -> bool:
    return all(len(lam) == 1 for _, lam in T.torsion)


def hecke(F: Coherent, f: HallElement, direction: str = "T") -> HallElement:
    """T_F or T*_F on a bundle-supported function, realized for rank-1 bundles.

    ``(T_F f)(V) = sum_{V' <= V, V/V' ~ F} <F, V'> f(V')`` and
    ``(T*_F f)(V) = sum_{U >= V, U/V ~ F} <F, V> f(U)``.  A line bundle has a
    unique subsheaf (resp. overbundle) with quotient F when every local part of
    F is cyclic, and none otherwise.  On the zero sheaf both operators act by
    the counit, so ``T_F(1) = T*_F(1) = 0`` unless F = 0.
    """
    if not F.is_torsion:
        raise ValueError("Hecke operators are indexed by torsion sheaves")
    n = F.torsion_degree
    out: dict = {}
    if not _is_cyclic(F):
        return HallElement({}, f.q, f.mode)
    for V, val in f.terms.items():
        if not V.is_bundle:
            raise ValueError("Hecke operators act on bundle-supported functions")
        if direction not in ("T", "T*", "Tstar", "dual"):
            raise ValueError(f"unknown Hecke direction {direction!r}")
        if V.rank == 0:
            if n == 0:
                out[V] = out.get(V, 0) + val
            continue
        if V.rank != 1:
            raise FeasibilityError("Hecke operators are realized on rank-1 bundles only", "max_rank", 1)
        d = V.bundle[0]
        # value at W is f(W -+ n); write the result as a function of W
        if direction == "T":
            W = Coherent((d + n,))
            tw = f.mode.vpow(euler_exponent((0, n), (1, d)))
        elif direction in ("T*", "Tstar", "dual"):
            W = Coherent((d - n,))
            tw = f.mode.vpow(euler_exponent((0, n), (1, d - n)))
        out[W] = out.get(W, 0) + tw * val
    return HallElement(out, f.q, f.mode)


def scalar_product(f: HallElement, g: HallElement):
    """(1_A, 1_B) = delta_{AB} / |Aut A|."""
    tot = 0
    for k, v in f.terms.items():
        w = g.terms.get(k)
        if w:
            tot = tot + v * w * Fraction(1, aut_count_coh(k, f.q))
    return tot


# ---------------------------------------------------------------- comultiplication


def _splitting_types(rank: int, degree: int, hi: int, lo: int):
    """Splitting types of given rank/degree with all parts in [lo, hi]."""
    if rank == 0:
        if degree == 0:
            yield ()
        return

    def rec(r, d, top):
        if r == 0:
            if d == 0:
                yield ()
            return
        for first in range(min(top, d - (r - 1) * lo), lo - 1, -1):
            if d - first > (r - 1) * first:
                break
            for rest in rec(r - 1, d - first, first):
                yield (first,) + rest

    yield from rec(rank, degree, hi)


def comult_window(f: HallElement, split: tuple, window: tuple, guard: CohGuard = DEFAULT_COH_GUARD) -> dict:
    """Bundle (x) bundle part of Delta_{r',r''}(f) with deg A, deg B in ``window``.

    ``window`` is one (lo, hi) pair for both factors or a pair of pairs.

    Returns ``{(A, B): coefficient}``.
    """
    r1, r2 = split
    if isinstance(window[0], tuple):
        (lo, hi), (lo2, hi2) = window
    else:
        (lo, hi), (lo2, hi2) = window, window
    q, mode = f.q, f.mode
    out: dict = {}
    for C, val in f.terms.items():
        if not C.is_bundle:
            raise ValueError("comult_window expects a bundle-supported element")
        if C.rank != r1 + r2:
            continue
        if r1 == 0 or r2 == 0:
            key = (ZERO, C) if r1 == 0 else (C, ZERO)
            wl, wh = (lo2, hi2) if r1 == 0 else (lo, hi)
            if wl <= C.degree <= wh or C.rank == 0:
                out[key] = out.get(key, 0) + val
            continue
        cmax, cmin = max(C.bundle), min(C.bundle)
        aC = aut_count_coh(C, q)
        for dA in range(lo, hi + 1):
            dB = C.degree - dA
            if not lo2 <= dB <= hi2:
                continue
            for Ab in _splitting_types(r1, dA, cmax, dA - (r1 - 1) * cmax):
                A = Coherent(Ab)
                for Bb in _splitting_types(r2, dB, dB - (r2 - 1) * cmin, cmin):
                    B = Coherent(Bb)
                    g = count_subsheaves(C, A, B, q, guard)
                    if not g:
                        continue
                    coeff = _ef(B, A, mode) * Fraction(g * aut_count_coh(A, q) * aut_count_coh(B, q), aC)
                    out[(A, B)] = out.get((A, B), 0) + val * coeff
    return {k: v for k, v in out.items() if v}


def torsion_classes(q: int, n: int) -> list:
    """[(T, |Aut T|)] for all torsion sheaves of degree n on P^1."""
    pl = places(q, max(n, 1))
    raw = torsion_census_global(q, n, [(p, p.degree) for p in pl])
    return [(Coherent((), assign), aut) for assign, aut in raw]


def comult_line_coh(d: int, q: int, N: int, mode: ScalarMode | None = None) -> dict:
    """Delta_coh(1_{O(d)}) with torsion quotients of degree <= N.

    Subsheaves of a line bundle are line bundles ``O(d-n)`` whose quotient T is
    cyclic at every place, each occurring once.
    """
    mode = mode or ScalarMode.numeric(q)
    out = {(ZERO, Coherent((d,))): Fraction(1), (Coherent((d,)), ZERO): Fraction(1)}
    for n in range(1, N + 1):
        A = Coherent((d - n,))
        for T, aT in torsion_classes(q, n):
            if not _is_cyclic(T):
                continue
            out[(A, T)] = _ef(T, A, mode) * aT
    return out


# ---------------------------------------------------------------- Eisenstein / Psi / M


def eisenstein(q: int, degrees: Iterable[int], lam=1, mode: ScalarMode | None = None) -> dict:
    """{d: E_{f,d}} with E_{f,d} = lam^{-d} 1_{O(d)} for the rank-1 character lam."""
    mode = mode or ScalarMode.numeric(q)
    return {d: HallElement.basis(Coherent((d,)), q, _pow(lam, -d), mode) for d in degrees}


def _pow(x, k: int):
    if x == 1:
        return Fraction(1)
    return x ** k


def eisenstein_product(q: int, degs: tuple, lams: tuple | None = None, mode=None,
                       guard: CohGuard = DEFAULT_COH_GUARD) -> HallElement:
    """Coefficient of t_1^{d_1}...t_m^{d_m} in E_{f_1}(t_1) * ... * E_{f_m}(t_m)."""
    mode = mode or ScalarMode.numeric(q)
    lams = lams or (1,) * len(degs)
    acc = HallElement.unit(q, mode)
    for d, lam in zip(degs, lams):
        acc = hall_mul(acc, HallElement.basis(Coherent((d,)), q, _pow(lam, -d), mode), guard)
    return acc


def psi_series(q: int, N: int, lam=1, mode: ScalarMode | None = None) -> dict:
    """{n: Psi_n}: coefficient of t^n in Psi_f(t) = sum_T t^{deg T} chibar(T) |Aut T| 1_T.

    ``chibar(T) = (lam v)^{-deg T}`` on sheaves cyclic at every place, 0
    otherwise, which is the value forced by Delta(E_f(t)) = 1 (x) E_f + E_f (x) Psi_f.
    """
    mode = mode or ScalarMode.numeric(q)
    out = {0: HallElement.unit(q, mode)}
    for n in range(1, N + 1):
        terms = {}
        for T, aT in torsion_classes(q, n):
            if _is_cyclic(T):
                terms[T] = aT * mode.vpow(-n) * _pow(lam, -n)
        out[n] = HallElement(terms, q, mode)
    return out


def m_operator(a: int, b: int, q: int, N: int, mode: ScalarMode | None = None,
               guard: CohGuard = DEFAULT_COH_GUARD) -> dict:
    """M(1_{O(a)} (x) 1_{O(b)}) = p_2(Delta_{coh,0,1}(u) * Delta_{coh,1,0}(v)).

    Terms with torsion of degree <= N are kept; the result is
    ``{(O(b-n), O(a+n)): coefficient}`` for n <= N.
    """
    mode = mode or ScalarMode.numeric(q)
    left = {k: v for k, v in comult_line_coh(a, q, 0, mode).items() if k[0].rank == 0}
    right = comult_line_coh(b, q, N, mode)
    out: dict = {}
    for (E1, E2), c1 in left.items():
        for (F1, F2), c2 in right.items():
            if F2.rank != 0 or F1.rank != 1:
                continue
            tw = _cartan(E2, F1, mode)
            first = hall_mul_basis(E1, F1, q, mode, guard)
            second = hall_mul_basis(E2, F2, q, mode, guard)
            for X, cx in first.items():
                if not X.is_bundle:
                    continue
                for Y, cy in second.items():
                    if not Y.is_bundle:
                        continue
                    key = (X, Y)
                    out[key] = out.get(key, 0) + c1 * c2 * tw * cx * cy
    return {k: v for k, v in out.items() if v}
