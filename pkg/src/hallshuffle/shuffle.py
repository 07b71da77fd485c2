"""Shuffle algebras on disjoint unions of tori with rational kernels.

Elements are stored as word families: a map from component words
``(i_1, ..., i_n)`` to a rational function in ``t1..tn``.  For a single
component there is one word per degree.  The classical product is

    mu(phi, psi) = sum over (r,s)-shuffles of
                   prod c(t_p, t_p') * phi(t_S) * psi(t_S^c),

the product running over pairs where a letter of ``psi`` at position ``p``
precedes a letter of ``phi`` at position ``p'``.  The symmetric product uses
a coboundary datum ``lam`` with ``c(s,t) = lam(t,s)/lam(s,t)``; the two are
intertwined by ``Psi(F) = F * prod_{i<j} lam(t_i, t_j)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence

from .polyrat import LaurentPoly, RationalFunction, parse_ratfun, symmetrize, var
from .witt import CurveData, rs_kernel

__all__ = [
    "SigmaScheme",
    "Kernel",
    "ShuffleElement",
    "shuffle_mul",
    "shuffle_product",
    "sym_shuffle_mul",
    "psi_map",
    "nullspace",
    "rref",
    "relation_space",
    "quadratic_check",
    "regularity_check",
    "curve_kernels",
    "graeffe",
    "elliptic_zeta",
    "ShuffleError",
]


class ShuffleError(ValueError):
    pass


def tvar(i: int) -> str:
    return f"t{i}"


# ---------------------------------------------------------------- Sigma and kernels


@dataclass(frozen=True)
class SigmaScheme:
    """Components ``(id, weight, coordinate name)``; each is a copy of G_m."""

    components: tuple = ((1, 1, "z"),)

    def __post_init__(self):
        ids = [c[0] for c in self.components]
        if len(set(ids)) != len(ids):
            raise ShuffleError("component ids must be unique")
        if any(c[1] < 1 for c in self.components):
            raise ShuffleError("component weights must be positive")

    @property
    def ids(self) -> list:
        return [c[0] for c in self.components]

    def weight(self, cid) -> int:
        for c in self.components:
            if c[0] == cid:
                return c[1]
        raise ShuffleError(f"unknown component {cid!r}")


def _swap_st(f: RationalFunction) -> RationalFunction:
    return f.substitute({"s": (1, "t", 1), "t": (1, "s", 1)})


def _as_rf(f) -> RationalFunction:
    return f if isinstance(f, RationalFunction) else RationalFunction(f)


class Kernel:
    """Map (component, component) -> rational function of (s, t).

    ``lam`` and ``lamt`` are optional coboundary data for the symmetric
    product.  Flags are computed, never declared.
    """

    def __init__(self, c: Mapping, lam: Mapping | None = None, lamt: Mapping | None = None):
        self.c = {k: _as_rf(v) for k, v in c.items()}
        self.lam = {k: _as_rf(v) for k, v in (lam or {}).items()}
        self.lamt = {k: _as_rf(v) for k, v in (lamt or {}).items()}
        self._anti = None

    @classmethod
    def trivial(cls, ids=(1,)) -> "Kernel":
        one = RationalFunction(1)
        return cls({(i, j): one for i in ids for j in ids}, {(i, j): one for i in ids for j in ids})

    def get(self, i, j) -> RationalFunction:
        try:
            return self.c[(i, j)]
        except KeyError:
            raise ShuffleError(f"kernel has no entry for components ({i}, {j})") from None

    def at(self, i, j, x: str, y: str, which: str = "c") -> RationalFunction:
        table = {"c": self.c, "lam": self.lam, "lamt": self.lamt}[which]
        if (i, j) not in table:
            raise ShuffleError(f"kernel has no {which} entry for ({i}, {j})")
        return table[(i, j)].substitute({"s": (1, x, 1), "t": (1, y, 1)})

    @property
    def antisymmetric(self) -> bool:
        if self._anti is None:
            self._anti = all(
                (self.c[(i, j)] * _swap_st(self.c[(j, i)])) == 1
                for (i, j) in self.c if (j, i) in self.c
            )
        return self._anti

    def coboundary_ok(self, which: str = "lam") -> bool:
        """c(s,t) = lam(t,s)/lam(s,t) on every pair where lam is given."""
        table = self.lam if which == "lam" else self.lamt
        for (i, j), lam in table.items():
            if (j, i) not in table or (i, j) not in self.c:
                return False
            if not (self.c[(i, j)] * lam == _swap_st(table[(j, i)])):
                return False
        return bool(table)

    def scaled(self, factor) -> "Kernel":
        """Multiply every c entry by ``factor`` (a negative control helper)."""
        return Kernel({k: v * factor for k, v in self.c.items()}, self.lam, self.lamt)

    def to_json(self) -> dict:
        return {f"{i},{j}": f.to_string() for (i, j), f in sorted(self.c.items())}

    @classmethod
    def from_json(cls, d: Mapping, mode=None) -> "Kernel":
        c = {}
        for key, text in d.items():
            parts = key.split(",")
            if len(parts) != 2:
                raise ShuffleError(f"kernel key {key!r} must look like 'i,j'")
            i, j = (int(p) for p in parts)
            c[(i, j)] = parse_ratfun(text, mode)
        return cls(c)


# ---------------------------------------------------------------- elements


def _word_label(w) -> str:
    return "[" + ",".join(str(x) for x in w) + "]"


class ShuffleElement:
    """Degree-graded word family ``{word: F(t1..tn)}``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        self.terms = {}
        for w, f in (terms or {}).items():
            f = _as_rf(f)
            if f:
                w = tuple(w)
                self.terms[w] = self.terms.get(w, RationalFunction(0)) + f
        self.terms = {w: f for w, f in self.terms.items() if f}

    @classmethod
    def generator(cls, cid, f) -> "ShuffleElement":
        """Degree-1 element ``f(t1)`` on component ``cid``; ``f`` may be an int exponent."""
        if isinstance(f, int):
            f = var(tvar(1), f)
        return cls({(cid,): _as_rf(f)})

    @classmethod
    def unit(cls) -> "ShuffleElement":
        return cls({(): RationalFunction(1)})

    def degree_parts(self) -> dict:
        out: dict = {}
        for w, f in self.terms.items():
            out.setdefault(len(w), {})[w] = f
        return out

    def __add__(self, other):
        d = dict(self.terms)
        for w, f in other.terms.items():
            d[w] = d[w] + f if w in d else f
        return ShuffleElement(d)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "ShuffleElement":
        return ShuffleElement({w: f * c for w, f in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, ShuffleElement):
            return NotImplemented
        keys = set(self.terms) | set(other.terms)
        zero = RationalFunction(0)
        return all(self.terms.get(k, zero) == other.terms.get(k, zero) for k in keys)

    def function(self, word=None) -> RationalFunction:
        if word is None:
            if len(self.terms) != 1:
                raise ShuffleError("element has several words; name one")
            return next(iter(self.terms.values()))
        return self.terms.get(tuple(word), RationalFunction(0))

    def to_json(self) -> dict:
        return {_word_label(w): f.to_string() for w, f in sorted(self.terms.items())}

    @classmethod
    def from_json(cls, d: Mapping, mode=None) -> "ShuffleElement":
        terms = {}
        for key, text in d.items():
            key = key.strip()
            if not (key.startswith("[") and key.endswith("]")):
                raise ShuffleError(f"word label {key!r} must look like '[1,1,2]'")
            inner = key[1:-1].strip()
            w = tuple(int(x) for x in inner.split(",")) if inner else ()
            terms[w] = parse_ratfun(text, mode)
        return cls(terms)

    def __repr__(self):
        return f"ShuffleElement({self.to_json()})"


def _rename(f: RationalFunction, positions: Sequence[int]) -> RationalFunction:
    """t_k -> t_{positions[k-1]} (simultaneous)."""
    mapping = {tvar(k + 1): (1, tvar(p), 1) for k, p in enumerate(positions) if k + 1 != p}
    return f.substitute(mapping) if mapping else f


def shuffle_mul(phi: ShuffleElement, psi: ShuffleElement, kernel: Kernel) -> ShuffleElement:
    out: dict = {}
    for w1, f1 in phi.terms.items():
        r = len(w1)
        for w2, f2 in psi.terms.items():
            s = len(w2)
            n = r + s
            for S in itertools.combinations(range(1, n + 1), r):
                Sset = set(S)
                Sc = [p for p in range(1, n + 1) if p not in Sset]
                word = [None] * n
                for k, p in enumerate(S):
                    word[p - 1] = w1[k]
                for k, p in enumerate(Sc):
                    word[p - 1] = w2[k]
                term = _rename(f1, S) * _rename(f2, Sc)
                for p in Sc:
                    for p2 in S:
                        if p < p2:
                            term = term * kernel.at(word[p - 1], word[p2 - 1], tvar(p), tvar(p2))
                key = tuple(word)
                out[key] = out[key] + term if key in out else term
    return ShuffleElement(out)


def shuffle_product(elements: Sequence[ShuffleElement], kernel: Kernel) -> ShuffleElement:
    acc = ShuffleElement.unit()
    for e in elements:
        acc = shuffle_mul(acc, e, kernel)
    return acc


def _single_component(x: ShuffleElement):
    comps = {c for w in x.terms for c in w}
    if len(comps) > 1:
        raise ShuffleError("symmetric products are realized for a single component")
    return comps.pop() if comps else None


def sym_shuffle_mul(a: ShuffleElement, b: ShuffleElement, kernel: Kernel, which: str = "lam") -> ShuffleElement:
    """xi(a, b) = 1/(m! n!) Symm[a(t_1..t_m) b(t_{m+1}..t_n) prod lam(t_i, t_{m+j})]."""
    ca, cb = _single_component(a), _single_component(b)
    out = ShuffleElement()
    for wa, fa in a.terms.items():
        for wb, fb in b.terms.items():
            m, n = len(wa), len(wb)
            comp = ca if ca is not None else cb
            if m and n:
                table = kernel.lam if which == "lam" else kernel.lamt
                if (comp, comp) not in table:
                    raise ShuffleError(f"kernel has no {which} datum")
            g = fa * _rename(fb, range(m + 1, m + n + 1))
            for i in range(1, m + 1):
                for j in range(m + 1, m + n + 1):
                    g = g * kernel.at(comp, comp, tvar(i), tvar(j), which)
            names = [tvar(i) for i in range(1, m + n + 1)]
            sym = symmetrize(g, names) * Fraction(1, factorial(m) * factorial(n))
            word = (comp,) * (m + n) if comp is not None else ()
            out = out + ShuffleElement({word: sym})
    return out


def psi_map(F: ShuffleElement, kernel: Kernel, which: str = "lam") -> ShuffleElement:
    """Psi(F) = F * prod_{i<j} lam(t_i, t_j)."""
    out = {}
    for w, f in F.terms.items():
        n = len(w)
        g = f
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                g = g * kernel.at(w[i - 1], w[j - 1], tvar(i), tvar(j), which)
        out[w] = g
    return ShuffleElement(out)


# ---------------------------------------------------------------- exact linear algebra


def rref(rows: list) -> tuple:
    """Reduced row echelon form over an exact field; returns (rows, pivot columns)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c] if not isinstance(m[r][c], int) else Fraction(1, m[r][c])
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [row for row in m[:r]], pivots


def nullspace(rows: list, ncols: int) -> list:
    """Basis of {x : M x = 0} in canonical (RREF) form."""
    if not rows:
        basis = [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
        return basis
    R, piv = rref(rows)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for row, pc in zip(R, piv):
            v[pc] = -row[fc]
        basis.append(v)
    if not basis:
        return []
    # canonical form of the span
    R2, _ = rref(basis)
    return R2


def rank(rows: list) -> int:
    return len(rref(rows)[0]) if rows else 0


def _cleared_numerators(funcs: Sequence[RationalFunction]) -> list:
    """Numerators over a common denominator (max multiplicity of each factor)."""
    common: dict = {}
    for f in funcs:
        for fac, k in f.den:
            common[fac] = max(common.get(fac, 0), k)
    out = []
    for f in funcs:
        own = dict(f.den)
        num = f.num
        for fac, k in common.items():
            e = k - own.get(fac, 0)
            if e:
                num = num * (fac ** e)
        out.append(num)
    return out


def coefficient_matrix(vectors: Sequence[Mapping]) -> list:
    """Rows indexed by the union of keys, columns by ``vectors``."""
    keys = sorted({k for v in vectors for k in v}, key=repr)
    return [[v.get(k, 0) for v in vectors] for k in keys]


def shuffle_relations(elements: Sequence[ShuffleElement]) -> list:
    """Exact linear relations among shuffle elements (canonical basis)."""
    words = sorted({w for e in elements for w in e.terms})
    vecs = [dict() for _ in elements]
    for w in words:
        funcs = [e.function(w) for e in elements]
        nums = _cleared_numerators(funcs)
        for k, num in enumerate(nums):
            for mono, c in num.items():
                vecs[k][(w, mono)] = c
    rows = coefficient_matrix(vecs)
    return nullspace(rows, len(elements))


def relation_space(generators: Sequence, n: int, kernel: Kernel, max_n: int = 3) -> tuple:
    """All length-n shuffle products of the generators and their exact relations.

    ``generators`` is a list of ``(component, exponent or Laurent function)``.
    Returns ``(labels, relations)`` where ``labels`` lists the generator index
    tuples in column order.
    """
    if n > max_n:
        from .finmod import FeasibilityError

        raise FeasibilityError(f"product length {n} exceeds guard {max_n}", "max_length", max_n)
    gens = [ShuffleElement.generator(c, f) for c, f in generators]
    labels = list(itertools.product(range(len(gens)), repeat=n))
    prods = [shuffle_product([gens[i] for i in lab], kernel) for lab in labels]
    return labels, shuffle_relations(prods)


# ---------------------------------------------------------------- checks


def _laurent_terms(f) -> dict:
    if isinstance(f, RationalFunction):
        f = f.laurent()
    return dict(f.items())


def quadratic_check(kernel: Kernel, window: tuple, comps=(1, 1), P=None, Q=None,
                    generator=None) -> tuple:
    """Check Q(t,s) E_i(t) E_j(s) = P(t,s) E_j(s) E_i(t) coefficientwise.

    ``E_i(t) = sum_a t^a z_i^a`` with ``z_i^a`` the degree-1 generator of
    exponent a.  ``c_ij = P/Q``; by default P and Q are read off the kernel's
    numerator and denominator.  Returns ``(ok, first failure or None)``.
    """
    i, j = comps
    c = kernel.get(i, j)
    if P is None or Q is None:
        Q = c.denominator()
        P = c.num
    P = P.substitute({"s": (1, "x", 1), "t": (1, "y", 1)}) if P is not None else P
    Q = Q.substitute({"s": (1, "x", 1), "t": (1, "y", 1)})
    # kernel (s, t) -> series variables (t, s) are renamed to (y... ) : first slot is t
    Pd, Qd = _laurent_terms(P), _laurent_terms(Q)
    gen = generator or (lambda cid, a: ShuffleElement.generator(cid, a))
    lo, hi = window
    cache: dict = {}

    def prod(ci, a, cj, b):
        key = (ci, a, cj, b)
        if key not in cache:
            cache[key] = shuffle_mul(gen(ci, a), gen(cj, b), kernel)
        return cache[key]

    def coeff(poly, first):
        # split exponents: first slot variable 'x' carries the t-power
        out = []
        for mono, val in poly.items():
            d = dict(mono)
            out.append((d.get("x", 0), d.get("y", 0), val))
        return out

    for A in range(lo, hi + 1):
        for B in range(lo, hi + 1):
            lhs = ShuffleElement()
            for et, es, val in coeff(Qd, True):
                lhs = lhs + prod(i, A - et, j, B - es).scale(val)
            rhs = ShuffleElement()
            for et, es, val in coeff(Pd, True):
                rhs = rhs + prod(j, B - es, i, A - et).scale(val)
            if not lhs == rhs:
                return False, {"t": A, "s": B}
    return True, None


def _diagonal_pole_order(f: RationalFunction, x: str, y: str) -> int:
    order = 0
    for fac, k in f.reduce().den:
        # factor vanishing identically on x = y
        if not fac.substitute({y: (1, x, 1)}):
            order += k
    return order


def regularity_check(product: ShuffleElement, kernel: Kernel | None = None, which: str = "lamt") -> tuple:
    """Is every function of ``product`` a Laurent polynomial?

    When a kernel is given its ``which`` datum must have at most a first-order
    pole on the diagonal.  Returns ``(ok, offending factor or None)``.
    """
    if kernel is not None:
        table = kernel.lamt if which == "lamt" else kernel.lam
        for key, f in table.items():
            if _diagonal_pole_order(f, "s", "t") > 1:
                return False, f"kernel {which}{key} has a higher-order diagonal pole"
    for w, f in product.terms.items():
        r = f.reduce()
        if r.den:
            return False, r.den[0][0].to_string()
    return True, None


# ---------------------------------------------------------------- curve kernels


def graeffe(coeffs: Sequence, r: int) -> list:
    """Coefficients of prod_{eps^r = 1} f(eps w) as a polynomial in u = w^r.

    ``coeffs`` lists f's coefficients (constant term 1 first); works through
    power sums: p_m of the new roots is p_{rm} of the old ones.
    """
    if coeffs[0] != 1:
        raise ShuffleError("graeffe expects constant term 1")
    deg = len(coeffs) - 1
    N = deg * r
    c = list(coeffs) + [0] * (N + 1)
    p = [0] * (N + 1)
    for n in range(1, N + 1):
        acc = -n * c[n]
        for k in range(1, n):
            if c[k]:
                acc = acc - c[k] * p[n - k]
        p[n] = acc
    # f(w) = prod (1 - a_i w); prod_eps f(eps w) = prod (1 - a_i^r w^r)
    pr = [0] + [p[r * m] for m in range(1, deg + 1)]
    b = [Fraction(1)] + [0] * deg
    for n in range(1, deg + 1):
        acc = 0
        for k in range(1, n + 1):
            if pr[k] and b[n - k]:
                acc = acc + pr[k] * b[n - k]
        b[n] = acc * Fraction(-1, n)
    # prod over eps^r = 1 of (1 - a eps w) is 1 - a^r w^r for every r
    return b


def _poly_in(coeffs, name: str):
    out = LaurentPoly()
    for i, c in enumerate(coeffs):
        if c:
            if isinstance(c, LaurentPoly):
                out = out + c * LaurentPoly.var(name, i)
            else:
                out = out + LaurentPoly.var(name, i, c)
    return out


def elliptic_zeta(q: int, a="a", name: str = "u") -> RationalFunction:
    """(1 - a u + q u^2)/((1-u)(1-qu)) with ``a`` an integer or a variable name."""
    aa = var(a) if isinstance(a, str) else a
    P = _poly_in([1, -aa, q], name)
    u = var(name)
    return RationalFunction(P, [(1 - u, 1), (1 - q * u, 1)])


def _grouped_zeta(P: Sequence, q: int, r: int, scale, name: str) -> RationalFunction:
    """prod_{eps^r=1} zeta(scale * eps * w) as a function of u = w^r."""
    Pr = graeffe(P, r)
    sr = scale ** r
    num = _poly_in([c * (sr ** i) for i, c in enumerate(Pr)], name)
    u = var(name)
    return RationalFunction(num, [(1 - sr * u, 1), (1 - (q ** r) * sr * u, 1)])


def curve_kernels(curve: CurveData | None = None, family: str = "rank1", r: int = 1,
                  normalization: str = "rs", a=None, q: int | None = None, cid=1) -> Kernel:
    """Kernels derived from curve data.

    ``rank1``: c, lam, lam~ from Rankin-Selberg data of rank-1 twists (genus 0
    carries the theta characteristic).  The symmetric datum is the transpose of
    the coboundary datum (c(s,t) = lam3(s,t)/lam3(t,s)).

    ``elliptic``: c_{X,r}(t,s) in u = (t/s)^r.  ``literal`` is
    prod zeta(eps u)/zeta(q eps u); ``rs`` uses zeta(eps u / q) in the
    denominator, the q-shift of the Rankin-Selberg kernel.  ``a`` may be a
    variable name to keep the trace of Frobenius symbolic.
    """
    if family == "rank1":
        if curve is None:
            raise ShuffleError("rank1 kernels need curve data")
        c, lam3, lamt3 = rs_kernel(curve)
        lam = {(cid, cid): _swap_st(lam3)} if lam3 is not None else None
        lamt = {(cid, cid): _swap_st(lamt3)} if lamt3 is not None else None
        return Kernel({(cid, cid): c}, lam, lamt)
    if family == "elliptic":
        qq = q if q is not None else (curve.q if curve is not None else None)
        if qq is None:
            raise ShuffleError("elliptic kernels need q")
        if a is None:
            if curve is None or curve.g != 1:
                raise ShuffleError("elliptic kernels need genus-1 curve data or a symbolic trace")
            P = list(curve.P)
        else:
            aa = var(a) if isinstance(a, str) else a
            P = [1, -aa, qq]
        num = _grouped_zeta(P, qq, r, Fraction(1), "u")
        if normalization == "literal":
            den = _grouped_zeta(P, qq, r, Fraction(qq), "u")
        elif normalization == "rs":
            den = _grouped_zeta(P, qq, r, Fraction(1, qq), "u")
        else:
            raise ShuffleError(f"unknown normalization {normalization!r}")
        f = num / den
        # u = (t/s)^r in the kernel's (s, t) slots: first argument t
        t, s = var("t"), var("s")
        c = f.evaluate({"u": (t * s ** -1) ** r})
        # the kernel slot order is (first, second) = (s, t); c_{X,r}(t, s) puts t first
        c = _swap_st(c)
        return Kernel({(cid, cid): c})
    raise ShuffleError(f"unsupported kernel family {family!r}")
