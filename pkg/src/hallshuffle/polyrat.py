"""Sparse multivariate Laurent polynomials and rational functions.

Coefficients are any exact field elements that support ``+ - * /`` and
truthiness: ``Fraction``, :class:`~hallshuffle.scalar.QuadScalar`,
:class:`~hallshuffle.scalar.VScalar`.

A :class:`RationalFunction` keeps its denominator as a product of normalized
non-monomial factors with multiplicities.  Monomials and scalar units are
always absorbed into the numerator, so ``1/t`` is a Laurent polynomial.
Equality is decided by cross-multiplication after cancelling shared factors;
no gcd is ever required for correctness.
"""

from __future__ import annotations

import itertools
import math
import re
from fractions import Fraction
from typing import Iterable, Mapping

from .scalar import QuadScalar, VScalar, ScalarMode, format_scalar, parse_expr

__all__ = [
    "LaurentPoly",
    "RationalFunction",
    "DegreeWindow",
    "RegionError",
    "var",
    "const",
    "mono",
    "symmetrize",
    "substitute",
    "expand_region",
    "parse_ratfun",
    "parse_laurent",
    "natural_key",
]


class RegionError(ValueError):
    """A denominator cannot be expanded in the requested region."""


_NAT = re.compile(r"(\d+)")


def natural_key(name: str):
    return tuple(int(p) if p.isdigit() else p for p in _NAT.split(name))


# ---------------------------------------------------------------- monomials
# a monomial is a tuple of (name, exponent) pairs, sorted by natural_key, no zero exponents


def _mono_mul(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for k, e in b:
        s = d.get(k, 0) + e
        if s:
            d[k] = s
        else:
            del d[k]
    return tuple(sorted(d.items(), key=lambda kv: natural_key(kv[0])))


def _mono_pow(a: tuple, n: int) -> tuple:
    if n == 0:
        return ()
    return tuple((k, e * n) for k, e in a)


def mono(**exps) -> tuple:
    """Build a monomial key, e.g. ``mono(t1=2, t2=-1)``."""
    return tuple(sorted(((k, e) for k, e in exps.items() if e), key=lambda kv: natural_key(kv[0])))


def _mono_from_dict(d: Mapping[str, int]) -> tuple:
    return tuple(sorted(((k, e) for k, e in d.items() if e), key=lambda kv: natural_key(kv[0])))


def _cpow(c, n: int):
    if isinstance(c, int):
        c = Fraction(c)
    return c ** n


def _mono_deg(a: tuple) -> int:
    return sum(e for _, e in a)


# ---------------------------------------------------------------- Laurent polynomials


def _coeff_str(c) -> str:
    s = format_scalar(c)
    # parenthesize anything that is more than a signed single term
    body = s[1:] if s.startswith("-") else s
    if "+" in body or "-" in body or "/(" in s:
        return f"({s})"
    return s


def _mono_str(m: tuple) -> str:
    parts = []
    for k, e in m:
        parts.append(k if e == 1 else f"{k}^{e}")
    return "*".join(parts)


class LaurentPoly:
    """Immutable sparse Laurent polynomial: ``{monomial: coefficient}``."""

    __slots__ = ("terms", "_hash", "_str")

    def __init__(self, terms: Mapping | Iterable = ()):
        if isinstance(terms, Mapping):
            items = terms.items()
        else:
            items = terms
        clean = {}
        for m, c in items:
            if c:
                clean[m] = Fraction(c) if type(c) is int else c
        self.terms = clean
        self._hash = None
        self._str = None

    # construction
    @classmethod
    def const(cls, c) -> "LaurentPoly":
        return cls({(): c}) if c else cls()

    @classmethod
    def var(cls, name: str, exp: int = 1, coeff=1) -> "LaurentPoly":
        return cls({((name, exp),): coeff}) if exp else cls({(): coeff})

    @classmethod
    def monomial(cls, m: tuple, coeff=1) -> "LaurentPoly":
        return cls({m: coeff})

    # queries
    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def items(self):
        return self.terms.items()

    def coeff(self, m: tuple):
        return self.terms.get(m, 0)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def const_value(self):
        return self.terms.get((), 0)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def variables(self) -> set:
        out = set()
        for m in self.terms:
            for k, _ in m:
                out.add(k)
        return out

    def exponent_range(self, name: str) -> tuple[int, int]:
        exps = [dict(m).get(name, 0) for m in self.terms]
        return (min(exps), max(exps)) if exps else (0, 0)

    # arithmetic
    def _wrap(self, other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, RationalFunction):
            return NotImplemented
        return LaurentPoly.const(other)

    def __add__(self, other):
        o = self._wrap(other)
        if o is NotImplemented:
            return o
        if not o.terms:
            return self
        if not self.terms:
            return o
        d = dict(self.terms)
        for m, c in o.terms.items():
            s = d.get(m)
            if s is None:
                d[m] = c
            else:
                s = s + c
                if s:
                    d[m] = s
                else:
                    del d[m]
        return LaurentPoly(d)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        o = self._wrap(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        if not isinstance(other, LaurentPoly):
            if not other:
                return LaurentPoly()
            return LaurentPoly({m: c * other for m, c in self.terms.items()})
        if len(other.terms) < len(self.terms):
            a, b = other, self
        else:
            a, b = self, other
        d = {}
        for m1, c1 in a.terms.items():
            for m2, c2 in b.terms.items():
                m = _mono_mul(m1, m2)
                s = d.get(m)
                d[m] = c1 * c2 if s is None else s + c1 * c2
        return LaurentPoly(d)

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        if isinstance(other, (LaurentPoly, RationalFunction)):
            return RationalFunction(self) / other
        return LaurentPoly({m: c / other for m, c in self.terms.items()})

    def __rtruediv__(self, other):
        return RationalFunction(LaurentPoly.const(other)) / self

    def __pow__(self, n: int):
        if n < 0:
            if self.is_monomial():
                (m, c), = self.terms.items()
                return LaurentPoly({_mono_pow(m, n): _cpow(c, n)})
            return RationalFunction(self) ** n
        result = LaurentPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, m: tuple, c=1) -> "LaurentPoly":
        """Multiply by the monomial ``c*m``."""
        return LaurentPoly({_mono_mul(k, m): v * c for k, v in self.terms.items()})

    def map_coeffs(self, fn) -> "LaurentPoly":
        return LaurentPoly({m: fn(c) for m, c in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.terms == other.terms
        if isinstance(other, RationalFunction):
            return other == self
        try:
            return self.terms == LaurentPoly.const(other).terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # substitution
    def substitute(self, mapping: Mapping[str, tuple]) -> "LaurentPoly":
        """Monomial substitution ``name -> (scale, target, power)``: name ↦ scale·target^power."""
        d = {}
        for m, c in self.terms.items():
            coeff = c
            new = []
            for k, e in m:
                if k in mapping:
                    scale, target, power = mapping[k]
                    if scale != 1:
                        coeff = coeff * _cpow(scale, e)
                    new.append((target, power * e))
                else:
                    new.append((k, e))
            nm = ()
            for k, e in new:
                nm = _mono_mul(nm, ((k, e),))
            s = d.get(nm)
            d[nm] = coeff if s is None else s + coeff
        return LaurentPoly(d)

    def rename(self, mapping: Mapping[str, str]) -> "LaurentPoly":
        return self.substitute({k: (1, v, 1) for k, v in mapping.items()})

    def evaluate(self, values: Mapping):
        """Substitute values (scalars, LaurentPolys or RationalFunctions) for variables."""
        acc = None
        for m, c in self.terms.items():
            term = LaurentPoly.const(c)
            rest = []
            for k, e in m:
                if k in values:
                    term = term * (_as_ring(values[k]) ** e)
                else:
                    rest.append((k, e))
            if rest:
                term = term * LaurentPoly.monomial(_mono_from_dict(dict(rest)))
            acc = term if acc is None else acc + term
        return acc if acc is not None else LaurentPoly()

    # normalization and division
    def content_monomial(self) -> tuple:
        """Componentwise minimum exponent (a monomial dividing every term)."""
        mins = {}
        first = True
        for m in self.terms:
            dm = dict(m)
            if first:
                mins = dm
                first = False
                continue
            for k in list(mins):
                mins[k] = min(mins[k], dm.get(k, 0))
            for k, e in dm.items():
                if k not in mins:
                    mins[k] = min(0, e)
        return _mono_from_dict(mins)

    def pivot(self) -> tuple:
        """Fixed choice of a distinguished term: total degree closest to 0 (the
        constant term if present), ties to the largest exponent vector in natural
        variable order."""
        names = sorted(self.variables(), key=natural_key)

        def key(m):
            dm = dict(m)
            d = _mono_deg(m)
            return (abs(d), d, 1 if m else 0, tuple(-dm.get(n, 0) for n in names))

        return min(self.terms, key=key)

    def normalized(self):
        """Return (unit_coeff, unit_mono, p) with self = unit_coeff*unit_mono*p and the
        pivot term of p equal to 1."""
        pm = self.pivot()
        c = self.terms[pm]
        inv = _mono_pow(pm, -1)
        p = LaurentPoly({_mono_mul(m, inv): v / c for m, v in self.terms.items()})
        return c, pm, p

    def polynomial_part(self):
        """(shift, P) with self = shift*P, P a genuine polynomial with no monomial content."""
        cm = self.content_monomial()
        return cm, self.shift(_mono_pow(cm, -1))

    def leading(self, names):
        """Leading term under lex order on ``names``."""
        def key(m):
            dm = dict(m)
            return tuple(dm.get(n, 0) for n in names)

        m = max(self.terms, key=key)
        return m, self.terms[m]

    def divexact(self, other: "LaurentPoly"):
        """Exact quotient in the Laurent ring, or None if ``other`` does not divide."""
        if not other:
            raise ZeroDivisionError("division by zero polynomial")
        if not self:
            return LaurentPoly()
        if other.is_monomial():
            (m, c), = other.terms.items()
            inv = _mono_pow(m, -1)
            return LaurentPoly({_mono_mul(k, inv): v / c for k, v in self.terms.items()})
        s1, a = self.polynomial_part()
        s2, b = other.polynomial_part()
        names = sorted(a.variables() | b.variables(), key=natural_key)
        lb, cb = b.leading(names)
        db = dict(lb)
        quo = {}
        rem = dict(a.terms)
        while rem:
            r = LaurentPoly.__new__(LaurentPoly)
            r.terms = rem
            lm, lc = r.leading(names)
            dl = dict(lm)
            qm = {}
            for n in names:
                e = dl.get(n, 0) - db.get(n, 0)
                if e < 0:
                    return None
                if e:
                    qm[n] = e
            qmono = _mono_from_dict(qm)
            qc = lc / cb
            quo[qmono] = qc
            for m, c in b.terms.items():
                mm = _mono_mul(m, qmono)
                s = rem.get(mm, 0) - c * qc
                if s:
                    rem[mm] = s
                else:
                    rem.pop(mm, None)
        q = LaurentPoly(quo)
        return q.shift(_mono_mul(s1, _mono_pow(s2, -1)))

    # printing
    def sort_key(self):
        return self.to_string()

    def to_string(self) -> str:
        if self._str is not None:
            return self._str
        if not self.terms:
            self._str = "0"
            return self._str

        def order(m):
            return (_mono_deg(m), tuple((natural_key(k), -e) for k, e in m))

        parts = []
        for m in sorted(self.terms, key=order):
            c = self.terms[m]
            cs = _coeff_str(c)
            ms = _mono_str(m)
            if not ms:
                body = cs
            elif cs == "1":
                body = ms
            elif cs == "-1":
                body = "-" + ms
            else:
                body = f"{cs}*{ms}"
            if parts and not body.startswith("-"):
                body = "+" + body
            parts.append(body)
        self._str = "".join(parts)
        return self._str

    __str__ = to_string

    def __repr__(self):
        return f"LaurentPoly({self.to_string()!r})"


def _as_ring(x):
    if isinstance(x, (LaurentPoly, RationalFunction)):
        return x
    return LaurentPoly.const(x)


def var(name: str, exp: int = 1, coeff=1) -> LaurentPoly:
    return LaurentPoly.var(name, exp, coeff)


def const(c) -> LaurentPoly:
    return LaurentPoly.const(c)


# ---------------------------------------------------------------- rational functions


def _factor_key(f: LaurentPoly):
    s = f.to_string()
    return (len(s), s)


class RationalFunction:
    """``num / prod(f_i^{k_i})`` with normalized non-monomial factors ``f_i``."""

    __slots__ = ("num", "den")
    __hash__ = None

    def __init__(self, num=None, den: Mapping | Iterable = ()):
        if num is None:
            num = LaurentPoly()
        elif not isinstance(num, LaurentPoly):
            num = LaurentPoly.const(num)
        factors: dict = {}
        items = den.items() if isinstance(den, Mapping) else den
        for f, k in items:
            if not k:
                continue
            if not f:
                raise ZeroDivisionError("zero factor in denominator")
            c, m, p = f.normalized()
            # absorb the unit c*m from f^k into the numerator
            unit = (c ** k)
            num = LaurentPoly({_mono_mul(mm, _mono_pow(m, -k)): v / unit for mm, v in num.terms.items()})
            if p.is_monomial():
                continue
            factors[p] = factors.get(p, 0) + k
        self.num = num
        self.den = tuple(sorted(((f, k) for f, k in factors.items() if k), key=lambda fk: _factor_key(fk[0])))
        if any(k < 0 for _, k in self.den):
            # negative multiplicities move back to the numerator
            extra = LaurentPoly.const(1)
            keep = []
            for f, k in self.den:
                if k < 0:
                    extra = extra * (f ** (-k))
                else:
                    keep.append((f, k))
            self.num = self.num * extra
            self.den = tuple(keep)

    @classmethod
    def _raw(cls, num: LaurentPoly, den: tuple) -> "RationalFunction":
        obj = cls.__new__(cls)
        obj.num = num
        obj.den = den
        return obj

    # conversion
    def _wrap(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, LaurentPoly):
            return RationalFunction._raw(other, ())
        return RationalFunction._raw(LaurentPoly.const(other), ())

    def den_dict(self) -> dict:
        return dict(self.den)

    def denominator(self) -> LaurentPoly:
        out = LaurentPoly.const(1)
        for f, k in self.den:
            out = out * (f ** k)
        return out

    def is_laurent(self) -> bool:
        """True iff this function is a Laurent polynomial (after cancellation)."""
        return not self.reduce().den

    def laurent(self) -> LaurentPoly:
        r = self.reduce()
        if r.den:
            raise ValueError(f"not a Laurent polynomial: {r}")
        return r.num

    def __bool__(self):
        return bool(self.num)

    # arithmetic
    def __add__(self, other):
        o = self._wrap(other)
        if not o.num:
            return self
        if not self.num:
            return o
        da, db = self.den_dict(), o.den_dict()
        if da == db:
            return RationalFunction._raw(self.num + o.num, self.den)
        common = dict(da)
        for f, k in db.items():
            common[f] = max(common.get(f, 0), k)
        na = self.num
        for f, k in common.items():
            e = k - da.get(f, 0)
            if e:
                na = na * (f ** e)
        nb = o.num
        for f, k in common.items():
            e = k - db.get(f, 0)
            if e:
                nb = nb * (f ** e)
        den = tuple(sorted(common.items(), key=lambda fk: _factor_key(fk[0])))
        return RationalFunction._raw(na + nb, den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._raw(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) + (-self)

    def __mul__(self, other):
        o = self._wrap(other)
        if not self.num or not o.num:
            return RationalFunction._raw(LaurentPoly(), ())
        if not o.den:
            return RationalFunction._raw(self.num * o.num, self.den)
        if not self.den:
            return RationalFunction._raw(self.num * o.num, o.den)
        d = dict(self.den)
        for f, k in o.den:
            d[f] = d.get(f, 0) + k
        den = tuple(sorted(d.items(), key=lambda fk: _factor_key(fk[0])))
        return RationalFunction._raw(self.num * o.num, den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if not self.num:
            raise ZeroDivisionError("division by the zero rational function")
        num = LaurentPoly.const(1)
        for f, k in self.den:
            num = num * (f ** k)
        return RationalFunction(num, [(self.num, 1)])

    def __truediv__(self, other):
        o = self._wrap(other)
        if not o.num:
            raise ZeroDivisionError("division by the zero rational function")
        if not o.den and o.num.is_monomial():
            (m, c), = o.num.terms.items()
            inv = _mono_pow(m, -1)
            return RationalFunction._raw(
                LaurentPoly({_mono_mul(k, inv): v / c for k, v in self.num.terms.items()}), self.den
            )
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._wrap(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return RationalFunction._raw(LaurentPoly.const(1), ())
        return RationalFunction._raw(self.num ** n, tuple((f, k * n) for f, k in self.den))

    def reduce(self) -> "RationalFunction":
        """Cancel denominator factors that divide the numerator exactly."""
        if not self.den:
            return self
        if not self.num:
            return RationalFunction._raw(self.num, ())
        num = self.num
        keep = []
        for f, k in self.den:
            left = k
            while left:
                q = num.divexact(f)
                if q is None:
                    break
                num = q
                left -= 1
            if left:
                keep.append((f, left))
        return RationalFunction._raw(num, tuple(keep))

    def __eq__(self, other):
        if isinstance(other, (RationalFunction, LaurentPoly)) or isinstance(
            other, (int, Fraction, QuadScalar, VScalar)
        ):
            o = self._wrap(other)
        else:
            return NotImplemented
        da, db = self.den_dict(), o.den_dict()
        na, nb = self.num, o.num
        for f in set(da) | set(db):
            shared = min(da.get(f, 0), db.get(f, 0))
            ea = db.get(f, 0) - shared
            eb = da.get(f, 0) - shared
            if ea:
                na = na * (f ** ea)
            if eb:
                nb = nb * (f ** eb)
        return na == nb

    # substitution
    def substitute(self, mapping: Mapping[str, tuple]) -> "RationalFunction":
        """Monomial substitution ``name -> (scale, target, power)``."""
        num = self.num.substitute(mapping)
        den = []
        for f, k in self.den:
            g = f.substitute(mapping)
            if not g:
                raise ZeroDivisionError(f"denominator factor {f} collapses to 0")
            den.append((g, k))
        return RationalFunction(num, den)

    def rename(self, mapping: Mapping[str, str]) -> "RationalFunction":
        return self.substitute({k: (1, v, 1) for k, v in mapping.items()})

    def evaluate(self, values: Mapping) -> "RationalFunction":
        """General substitution of scalars / Laurent polynomials / rational functions."""
        out = _as_rf(self.num.evaluate(values))
        for f, k in self.den:
            g = _as_rf(f.evaluate(values))
            if not g.num:
                raise ZeroDivisionError(f"denominator factor {f} vanishes")
            out = out / (g ** k)
        return out

    def map_coeffs(self, fn) -> "RationalFunction":
        return RationalFunction(self.num.map_coeffs(fn), [(f.map_coeffs(fn), k) for f, k in self.den])

    def variables(self) -> set:
        out = self.num.variables()
        for f, _ in self.den:
            out |= f.variables()
        return out

    # printing
    def to_string(self) -> str:
        num = self.num.to_string()
        if not self.den:
            return f"{num} | 1"
        parts = []
        for f, k in self.den:
            s = f"({f.to_string()})"
            parts.append(s if k == 1 else f"{s}^{k}")
        return f"{num} | {'*'.join(parts)}"

    __str__ = to_string

    def __repr__(self):
        return f"RationalFunction({self.to_string()!r})"


def _as_rf(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, LaurentPoly):
        return RationalFunction._raw(x, ())
    return RationalFunction._raw(LaurentPoly.const(x), ())


# ---------------------------------------------------------------- parsing


def _split_top(text: str, sep: str):
    depth = 0
    out, cur = [], []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out


def _builders(mode: ScalarMode | None):
    def cst(n):
        if mode is None or mode.is_symbolic:
            c = Fraction(n) if mode is None else VScalar((n,))
        else:
            c = QuadScalar(n, 0, mode.q)
        return RationalFunction._raw(LaurentPoly.const(c), ())

    def vr(name):
        if name == "v":
            if mode is None:
                raise ValueError("symbol 'v' needs a scalar mode")
            return RationalFunction._raw(LaurentPoly.const(mode.v()), ())
        return RationalFunction._raw(LaurentPoly.var(name), ())

    return cst, vr


def parse_laurent(text: str, mode: ScalarMode | None = None) -> LaurentPoly:
    cst, vr = _builders(mode)
    return parse_expr(text, cst, vr).laurent()


def parse_ratfun(text: str, mode: ScalarMode | None = None) -> RationalFunction:
    """Parse ``numer | denom``; the denominator's top-level ``*`` factors stay factored."""
    cst, vr = _builders(mode)
    if "|" not in text:
        return parse_expr(text, cst, vr)
    num_s, den_s = text.split("|", 1)
    num = parse_expr(num_s, cst, vr)
    out = num
    for piece in _split_top(den_s.strip(), "*"):
        piece = piece.strip()
        if not piece:
            raise ValueError(f"empty denominator factor in {text!r}")
        out = out / parse_expr(piece, cst, vr)
    return out


# ---------------------------------------------------------------- module-level ops


def substitute(f, mapping):
    return _as_rf(f).substitute(mapping)


def symmetrize(f, names):
    """Sum of ``f`` over all permutations of the variables ``names``."""
    f = _as_rf(f)
    names = list(names)
    acc = RationalFunction._raw(LaurentPoly(), ())
    for perm in itertools.permutations(names):
        mapping = {a: (1, b, 1) for a, b in zip(names, perm) if a != b}
        acc = acc + (f.substitute(mapping) if mapping else f)
    return acc


class DegreeWindow:
    """Closed exponent intervals per variable; unlisted variables are unbounded."""

    def __init__(self, bounds: Mapping[str, tuple[int, int]]):
        for k, (lo, hi) in bounds.items():
            if lo > hi:
                raise ValueError(f"empty window for {k}: [{lo}, {hi}]")
        self.bounds = dict(bounds)

    @classmethod
    def box(cls, names, lo, hi) -> "DegreeWindow":
        return cls({n: (lo, hi) for n in names})

    def contains(self, m: tuple) -> bool:
        dm = dict(m)
        for k, (lo, hi) in self.bounds.items():
            e = dm.get(k, 0)
            if e < lo or e > hi:
                return False
        return True

    def __repr__(self):
        return f"DegreeWindow({self.bounds!r})"


def _split_ordered(m: tuple, ordered: set):
    a, b = [], []
    for k, e in m:
        (a if k in ordered else b).append((k, e))
    return tuple(a), tuple(b)


def _dominant_unit(f: LaurentPoly, order: list, weight) -> LaurentPoly:
    """The term of ``f`` that dominates in the region; must be a unit."""
    ordered = set(order)
    groups: dict = {}
    for m, c in f.terms.items():
        om, pm = _split_ordered(m, ordered)
        groups.setdefault(om, {})[pm] = c
    dom = min(groups, key=weight)
    wd = weight(dom)
    if sum(1 for g in groups if weight(g) == wd) > 1:
        raise RegionError(f"factor {f} has no dominant term in region {order}")
    ucoef = groups[dom]
    if len(ucoef) != 1:
        raise RegionError(f"dominant coefficient of {f} in region {order} is not a unit")
    (pm, c), = ucoef.items()
    return LaurentPoly({_mono_mul(dom, pm): c})


def _geometric_series(f: LaurentPoly, u: LaurentPoly, k: int, order: list, weight, budget: int):
    """Terms (omega, monomial, coeff) of (1-g)^{-k}, f = u(1-g), with omega <= budget."""
    ordered = set(order)
    g = LaurentPoly.const(1) - f * (u ** -1)
    gterms = [(weight(_split_ordered(m, ordered)[0]), m, cc) for m, cc in g.terms.items()]
    for w, m, _ in gterms:
        if w <= 0:
            raise RegionError(f"factor {f} is not of the form unit*(1 - small) in region {order}")
    series = {(): 1}
    power = {(): 1}
    j = 0
    while power:
        j += 1
        nxt = {}
        for m1, c1 in power.items():
            w1 = weight(_split_ordered(m1, ordered)[0])
            for w2, m2, c2 in gterms:
                if w1 + w2 > budget:
                    continue
                m = _mono_mul(m1, m2)
                s = nxt.get(m)
                nxt[m] = c1 * c2 if s is None else s + c1 * c2
        power = {m: c for m, c in nxt.items() if c}
        b = math.comb(k + j - 1, j)
        for m, c in power.items():
            s = series.get(m)
            series[m] = c * b if s is None else s + c * b
    return [(weight(_split_ordered(m, ordered)[0]), m, c) for m, c in series.items() if c]


def expand_region(f, order, window: DegreeWindow) -> dict:
    """Laurent coefficients of ``f`` in the region 1 >> order[0] >> order[1] >> ...

    Every denominator factor must be a unit times (1 - g) with all terms of g
    strictly smaller than 1 in that region.  Variables not in ``order`` are
    treated as coefficients.  Returns ``{monomial: coefficient}`` for the
    monomials inside ``window``.
    """
    f = _as_rf(f)
    order = list(order)
    ordered = set(order)
    pos = {n: i for i, n in enumerate(order)}

    # weight: larger means smaller in the region; W exceeds twice every exponent in play
    maxexp = 1
    for poly in [f.num] + [p for p, _ in f.den]:
        for m in poly.terms:
            for _, e in m:
                maxexp = max(maxexp, abs(e))
    for n in order:
        if n in window.bounds:
            lo, hi = window.bounds[n]
            maxexp = max(maxexp, abs(lo), abs(hi))
    W = 2 * maxexp * (len(order) + 1) + 1

    def weight(m):
        return sum(e * W ** pos[k] for k, e in m if k in pos)

    for n in order:
        if n not in window.bounds:
            raise ValueError(f"window must bound every ordered variable; missing {n}")
    wmax = sum(max(lo * W ** pos[n], hi * W ** pos[n]) for n, (lo, hi) in window.bounds.items() if n in pos)

    prefactor = f.num
    units = []
    for p, k in f.den:
        u = _dominant_unit(p, order, weight)
        prefactor = prefactor * (u ** -k)
        units.append((p, u, k))
    if not prefactor:
        return {}
    wmin_pref = min(weight(_split_ordered(m, ordered)[0]) for m in prefactor.terms)
    budget = wmax - wmin_pref
    if budget < 0:
        return {}
    result = dict(prefactor.terms)
    for p, u, k in units:
        series = _geometric_series(p, u, k, order, weight, budget)
        nxt = {}
        for m1, c1 in result.items():
            w1 = weight(_split_ordered(m1, ordered)[0])
            for w2, m2, c2 in series:
                if w1 + w2 > wmax:
                    continue
                m = _mono_mul(m1, m2)
                s = nxt.get(m)
                nxt[m] = c1 * c2 if s is None else s + c1 * c2
        result = {m: c for m, c in nxt.items() if c}
    return {m: c for m, c in result.items() if c and window.contains(m)}
