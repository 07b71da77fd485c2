"""Big Witt vectors, curve zeta functions, Rankin-Selberg series and the kernels c, lambda, lambda~.

A Witt vector is a truncated series ``B(t) = 1 + b_1 t + ... + b_N t^N``.
Addition is the series product; multiplication is computed through power
sums (Newton's identities), with ``[[a]] = 1 - a t`` and ``[[a]] (x) [[b]] = [[ab]]``.
Coefficients may be any exact ring elements in which integer division is
exact (Fractions, scalars, Laurent polynomials in parameter variables).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .polyrat import DegreeWindow, LaurentPoly, RationalFunction, expand_region, var
from .scalar import format_scalar, parse_scalar

__all__ = [
    "CurveData",
    "WittVector",
    "GlobalCharacter",
    "series_mul",
    "series_inv",
    "series_from_ratfun",
    "boxplus",
    "boxtimes",
    "star",
    "euler_factor",
    "zeta",
    "kappa",
    "lhom",
    "rs_kernel",
    "feq_check",
    "moebius",
]

DEFAULT_TRUNC = 12


# ---------------------------------------------------------------- series helpers


def _zero_like(x):
    return x * 0 if not isinstance(x, int) else 0


def series_mul(a: Sequence, b: Sequence, N: int) -> list:
    out = [0] * (N + 1)
    for i, x in enumerate(a[: N + 1]):
        if not x:
            continue
        for j, y in enumerate(b[: N + 1 - i]):
            if y:
                out[i + j] = out[i + j] + x * y
    return out


def series_inv(a: Sequence, N: int) -> list:
    """Inverse of a series with constant term 1."""
    if a[0] != 1:
        raise ValueError("series_inv needs constant term 1")
    out = [0] * (N + 1)
    out[0] = 1
    for n in range(1, N + 1):
        acc = 0
        for k in range(1, min(n, len(a) - 1) + 1):
            if a[k]:
                acc = acc + a[k] * out[n - k]
        out[n] = -acc
    return out


def series_from_ratfun(f, name: str, N: int) -> list:
    """Taylor coefficients of a rational function of one variable ``name`` around 0."""
    f = f if isinstance(f, RationalFunction) else RationalFunction(f)
    coeffs = expand_region(f, [name], DegreeWindow({name: (0, N)}))
    out = [0] * (N + 1)
    for m, c in coeffs.items():
        d = dict(m)
        if set(d) - {name}:
            # parameter variables stay inside the coefficient
            rest = tuple((k, e) for k, e in m if k != name)
            out[d.get(name, 0)] = out[d.get(name, 0)] + LaurentPoly.monomial(rest, c)
        else:
            out[d.get(name, 0)] = out[d.get(name, 0)] + c
    below = [m for m in expand_region(f, [name], DegreeWindow({name: (-64, -1)}))]
    if below:
        raise ValueError(f"{f} has a pole at {name}=0")
    return out


def _normalize_coeff(c):
    if isinstance(c, int):
        return Fraction(c)
    return c


# ---------------------------------------------------------------- curves


def moebius(n: int) -> int:
    res, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            res = -res
        p += 1
    if m > 1:
        res = -res
    return res


@dataclass(frozen=True)
class CurveData:
    """A curve over F_q given by its zeta numerator P(t) (constant term first)."""

    q: int
    g: int = 0
    P: tuple = (1,)

    def __post_init__(self):
        P = tuple(int(c) for c in self.P)
        object.__setattr__(self, "P", P)
        if not P or P[0] != 1:
            raise ValueError("zeta numerator must have P(0) = 1")
        if len(P) - 1 != 2 * self.g:
            raise ValueError(f"zeta numerator must have degree 2g = {2 * self.g}")

    @classmethod
    def p1(cls, q: int) -> "CurveData":
        return cls(q, 0, (1,))

    def point_counts(self, N: int) -> list:
        """N_n = #X(F_{q^n}) for n = 0..N (index 0 unused)."""
        c = list(self.P) + [0] * (N + 1)
        s = [0] * (N + 1)
        for n in range(1, N + 1):
            acc = -n * c[n]
            for k in range(1, n):
                acc -= c[k] * s[n - k]
            s[n] = acc
        return [0] + [self.q ** n + 1 - s[n] for n in range(1, N + 1)]

    def place_counts(self, N: int) -> list:
        """a_d = number of closed points of degree d, d = 0..N (index 0 unused)."""
        pts = self.point_counts(N)
        out = [0]
        for d in range(1, N + 1):
            tot = sum(moebius(d // e) * pts[e] for e in range(1, d + 1) if d % e == 0)
            if tot % d:
                raise ValueError("zeta numerator gives non-integral place counts")
            out.append(tot // d)
        if any(a < 0 for a in out):
            raise ValueError("zeta numerator gives negative place counts")
        return out

    def zeta_ratfun(self, name: str = "t") -> RationalFunction:
        t = var(name)
        num = LaurentPoly.const(0)
        for i, c in enumerate(self.P):
            num = num + LaurentPoly.var(name, i, Fraction(c))
        return RationalFunction(num, [(1 - t, 1), (1 - self.q * t, 1)])

    def to_json(self) -> dict:
        return {"q": self.q, "g": self.g, "P": list(self.P)}

    @classmethod
    def from_json(cls, d) -> "CurveData":
        return cls(int(d["q"]), int(d.get("g", 0)), tuple(d.get("P", [1])))


# ---------------------------------------------------------------- Witt vectors


class WittVector:
    """``1 + b_1 t + ... + b_N t^N`` (``b`` holds b_1..b_N)."""

    __slots__ = ("b", "trunc", "rank")

    def __init__(self, b: Sequence, trunc: int | None = None, rank: int | None = None):
        b = [_normalize_coeff(x) for x in b]
        if trunc is None:
            trunc = len(b)
        if len(b) > trunc:
            b = b[:trunc]
        b = b + [0] * (trunc - len(b))
        self.b = b
        self.trunc = trunc
        if rank is not None:
            if rank > trunc:
                raise ValueError("rank beyond truncation order")
            if rank and not b[rank - 1]:
                raise ValueError("top coefficient of a rank-r vector must be invertible")
            if any(b[i] for i in range(rank, trunc)):
                raise ValueError("rank-r vector has nonzero coefficients beyond r")
        self.rank = rank

    @classmethod
    def from_series(cls, s: Sequence, trunc: int | None = None, rank=None) -> "WittVector":
        if s[0] != 1:
            raise ValueError("Witt vector series must start with 1")
        return cls(list(s[1:]), trunc if trunc is not None else len(s) - 1, rank)

    @classmethod
    def teichmuller(cls, a, trunc: int = DEFAULT_TRUNC) -> "WittVector":
        """[[a]] = 1 - a t."""
        return cls([-a], trunc, rank=1)

    @classmethod
    def zero(cls, trunc: int = DEFAULT_TRUNC) -> "WittVector":
        return cls([], trunc, rank=0)

    @classmethod
    def one(cls, trunc: int = DEFAULT_TRUNC) -> "WittVector":
        return cls.teichmuller(1, trunc)

    @classmethod
    def from_ratfun(cls, f, name: str = "t", trunc: int = DEFAULT_TRUNC) -> "WittVector":
        return cls.from_series(series_from_ratfun(f, name, trunc), trunc)

    def series(self) -> list:
        return [1] + list(self.b)

    def power_sums(self) -> list:
        """p_n = sum of n-th powers of the roots, n = 0..N (p_0 unused)."""
        N = self.trunc
        b = [1] + self.b
        p = [0] * (N + 1)
        for n in range(1, N + 1):
            acc = -n * b[n]
            for k in range(1, n):
                if b[k]:
                    acc = acc - b[k] * p[n - k]
            p[n] = acc
        return p

    @classmethod
    def from_power_sums(cls, p: Sequence, trunc: int, rank=None) -> "WittVector":
        b = [1] + [0] * trunc
        for n in range(1, trunc + 1):
            acc = 0
            for k in range(1, n + 1):
                if p[k] and b[n - k]:
                    acc = acc + p[k] * b[n - k]
            b[n] = -acc / n if not isinstance(acc, int) else Fraction(-acc, n)
        return cls(b[1:], trunc, rank)

    def __eq__(self, other):
        if not isinstance(other, WittVector):
            return NotImplemented
        n = min(self.trunc, other.trunc)
        return all(self.b[i] == other.b[i] for i in range(n))

    def __repr__(self):
        return f"WittVector({self.to_json()})"

    def to_json(self) -> dict:
        return {"trunc": self.trunc, "b": [_coeff_to_str(c) for c in self.b]}

    @classmethod
    def from_json(cls, d, mode=None) -> "WittVector":
        return cls([parse_scalar(s, mode) for s in d["b"]], int(d["trunc"]))


def _coeff_to_str(c) -> str:
    if isinstance(c, (LaurentPoly, RationalFunction)):
        return c.to_string()
    return format_scalar(c)


def _same_trunc(u: WittVector, v: WittVector):
    if u.trunc != v.trunc:
        raise ValueError(f"truncation orders differ: {u.trunc} vs {v.trunc}")


def boxplus(u: WittVector, v: WittVector) -> WittVector:
    _same_trunc(u, v)
    s = series_mul(u.series(), v.series(), u.trunc)
    rank = u.rank + v.rank if u.rank is not None and v.rank is not None and u.rank + v.rank <= u.trunc else None
    return WittVector.from_series(s, u.trunc, rank)


def boxtimes(u: WittVector, v: WittVector) -> WittVector:
    _same_trunc(u, v)
    pu, pv = u.power_sums(), v.power_sums()
    p = [0] + [pu[n] * pv[n] for n in range(1, u.trunc + 1)]
    rank = u.rank * v.rank if u.rank is not None and v.rank is not None and u.rank * v.rank <= u.trunc else None
    out = WittVector.from_power_sums(p, u.trunc)
    out.rank = rank
    return out


def star(u: WittVector) -> WittVector:
    """b_i(u*) = b_{r-i}(u) / b_r(u) for a vector of exact rank r."""
    r = u.rank
    if r is None:
        raise ValueError("star needs a vector of known finite rank")
    b = [1] + u.b
    top = b[r]
    if not top:
        raise ZeroDivisionError("top coefficient b_r is zero")
    new = [b[r - i] / top for i in range(1, r + 1)]
    return WittVector(new, u.trunc, rank=r)


def euler_factor(u: WittVector, N: int | None = None) -> list:
    """The series 1/B(t) to order N."""
    N = u.trunc if N is None else N
    s = u.series() + [0] * max(0, N - u.trunc)
    return series_inv(s, N)


def zeta(curve: CurveData, mode: str = "rational", D: int | None = None, N: int = DEFAULT_TRUNC,
         place_counts: Sequence | None = None, name: str = "t"):
    """Zeta function: rational form, or the Euler product over places of degree <= D."""
    if mode == "rational":
        return curve.zeta_ratfun(name)
    if mode != "truncated":
        raise ValueError(f"unknown zeta mode {mode!r}")
    D = N if D is None else D
    a = list(place_counts) if place_counts is not None else curve.place_counts(D)
    if len(a) <= D:
        raise ValueError("place counts do not reach degree D")
    s = [Fraction(1)] + [Fraction(0)] * N
    for d in range(1, D + 1):
        if d > N:
            break
        # multiply by (1 - t^d)^{-a_d}
        for _ in range(a[d]):
            for n in range(d, N + 1):
                s[n] += s[n - d]
    return s


def kappa(curve: CurveData, scope: str = "local", degree: int = 1, N: int = DEFAULT_TRUNC) -> WittVector:
    """Local point (1+t)/(1+q_x t), or the global series zeta(-t)/zeta(-qt)."""
    t = var("t")
    if scope == "local":
        qx = curve.q ** degree
        f = RationalFunction(1 + t, [(1 + qx * t, 1)])
    elif scope == "global":
        z = curve.zeta_ratfun("t")
        f = z.substitute({"t": (-1, "t", 1)}) / z.substitute({"t": (-curve.q, "t", 1)})
    else:
        raise ValueError(f"unknown kappa scope {scope!r}")
    return WittVector.from_ratfun(f, "t", N)


def kappa_ratfun(curve: CurveData, scope: str = "local", degree: int = 1) -> RationalFunction:
    t = var("t")
    if scope == "local":
        return RationalFunction(1 + t, [(1 + curve.q ** degree * t, 1)])
    z = curve.zeta_ratfun("t")
    return z.substitute({"t": (-1, "t", 1)}) / z.substitute({"t": (-curve.q, "t", 1)})


# ---------------------------------------------------------------- global characters


@dataclass
class GlobalCharacter:
    """A character of the global Hecke algebra.

    Rank-1 twists ``lam^deg`` of the trivial character are given in closed form
    by ``twist``; anything else supplies ``local(label, degree) -> WittVector``.
    """

    curve: CurveData
    rank: int = 1
    twist: object = None
    local: Callable | None = None

    def __post_init__(self):
        if self.twist is None and self.local is None:
            self.twist = 1

    @property
    def closed_form(self) -> bool:
        return self.local is None and self.rank == 1

    def local_vector(self, label, degree: int, trunc: int) -> WittVector:
        if self.local is not None:
            return self.local(label, degree)
        return WittVector.teichmuller(self.twist ** degree, trunc)

    def twisted(self, nu) -> "GlobalCharacter":
        """The character nu^deg * chi."""
        if not self.closed_form:
            base = self.local
            return GlobalCharacter(self.curve, self.rank, None,
                                   lambda lab, d: boxtimes(base(lab, d), WittVector.teichmuller(nu ** d, base(lab, d).trunc)))
        return GlobalCharacter(self.curve, 1, self.twist * nu)


def _places_by_degree(curve: CurveData, N: int, places=None):
    if places is None:
        counts = curve.place_counts(N)
        return [((d, i), d) for d in range(1, N + 1) for i in range(counts[d])]
    return [(lab, d) for lab, d in places if d <= N]


def lhom(chi: GlobalCharacter, chi2: GlobalCharacter, mode: str = "truncated", N: int = DEFAULT_TRUNC,
         places=None, name: str = "t"):
    """LHom(chi, chi'; t) = prod_x L(chi_x* (x) chi'_x; t^{deg x}).

    ``truncated`` returns the coefficient list to order N; ``closed`` returns
    zeta((mu/lam) t) for rank-1 twists.
    """
    if mode == "closed":
        if not (chi.closed_form and chi2.closed_form):
            raise ValueError("closed-form LHom is only available for rank-1 twist characters")
        ratio = chi2.twist / chi.twist
        z = chi.curve.zeta_ratfun(name)
        if isinstance(ratio, (LaurentPoly, RationalFunction)):
            return z.evaluate({name: ratio * var(name)})
        return z.substitute({name: (ratio, name, 1)})
    if mode != "truncated":
        raise ValueError(f"unknown lhom mode {mode!r}")
    total = [1] + [0] * N
    cache: dict = {}
    for lab, d in _places_by_degree(chi.curve, N, places):
        u = chi.local_vector(lab, d, N)
        w = chi2.local_vector(lab, d, N)
        key = None
        if chi.local is None and chi2.local is None:
            key = d
        if key is not None and key in cache:
            fac = cache[key]
        else:
            loc = euler_factor(boxtimes(star(u), w), N)
            fac = [0] * (N + 1)
            for k, c in enumerate(loc):
                if k * d <= N:
                    fac[k * d] = c
            if key is not None:
                cache[key] = fac
        total = series_mul(total, fac, N)
    return total


# ---------------------------------------------------------------- kernels


def rs_kernel(curve: CurveData, ranks=(1, 1), x: str = "s", y: str = "t", theta_degree: int = -1):
    """(c, lambda, lambda~) as rational functions of the component coordinates.

    For rank-1 twist components ``chi = x^deg``, ``chi' = y^deg``:
    ``c = q^{rs(1-g)} LHom(chi, chi') / LHom(q^deg chi, chi')``,
    ``lambda = theta * LHom(chi, chi')`` with theta the value of the character
    attached to chi* (x) chi' on the theta characteristic (class ``theta_degree``
    in Pic = Z), and ``lambda~ = f(y/x) * lambda``.  Only genus 0 has a theta
    characteristic wired in.
    """
    r, s = ranks
    if (r, s) != (1, 1):
        raise ValueError("only rank-1 components are realized in closed form")
    q = curve.q
    X, Y = var(x), var(y)
    ratio = Y * (X ** -1)
    z = curve.zeta_ratfun("u")
    lh = z.evaluate({"u": ratio})
    lhq = z.evaluate({"u": ratio * Fraction(1, q)})
    c = (Fraction(q) ** (r * s * (1 - curve.g))) * lh / lhq
    if curve.g != 0:
        return c, None, None
    theta = pi_character_value(ratio, theta_degree)
    lam = theta * lh
    tt = ratio
    f = RationalFunction(LaurentPoly.const(1)) / tt * (1 - q * tt) * (1 - Fraction(1, q) * tt)
    lamt = f * lam
    return c, lam, lamt


def pi_character_value(ratio, degree: int):
    """Value on O(degree) of the Pic-character attached to the rank-1 point with root ``ratio``.

    Uses O(x) -> chi(1_{O_x})^{-1} at degree-1 points, where chi(1_{O_x}) = b_1 = -ratio.
    """
    base = (-1) * (ratio ** -1) if isinstance(ratio, (LaurentPoly, RationalFunction)) else Fraction(-1) / ratio
    return base ** degree


def feq_check(chi: GlobalCharacter, chi2: GlobalCharacter, eps=None, name: str = "t"):
    """Check LHom(chi',chi;1/qt) = eps (q^{1/2} t)^{2(1-g)rs} LHom(chi,chi';t) exactly.

    Returns ``(ok, eps, detail)``.  ``eps`` defaults to the character value on
    the canonical class (degree 2g-2).
    """
    curve = chi.curve
    q = curve.q
    if not (chi.closed_form and chi2.closed_form):
        raise ValueError("functional equation check needs rank-1 twist characters")
    ratio = chi2.twist / chi.twist
    if eps is None:
        r = ratio if isinstance(ratio, (LaurentPoly, RationalFunction)) else Fraction(ratio)
        eps = pi_character_value(r, 2 * curve.g - 2)
    lhs = lhom(chi2, chi, "closed", name=name)
    t = var(name)
    lhs = lhs.evaluate({name: (t ** -1) * Fraction(1, q)})
    rhs = lhom(chi, chi2, "closed", name=name)
    power = 2 * (1 - curve.g)
    factor = (Fraction(q) ** (power // 2)) * (t ** power) if power >= 0 else RationalFunction(1) / ((Fraction(q) ** (-power // 2)) * t ** (-power))
    rhs = rhs * factor * eps
    ok = lhs == rhs
    return ok, eps, ("" if ok else f"LHS {lhs} != RHS {rhs}")
