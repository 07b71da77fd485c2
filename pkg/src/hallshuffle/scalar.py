"""Exact coefficients: Q(sqrt q) for a fixed q, or the rational function field Q(v) with v^2 = q.

Numeric scalars are ``QuadScalar`` (a + b*v with v = sqrt q), symbolic ones are
``VScalar`` (reduced quotients of polynomials in v).  Plain ``int`` and
``Fraction`` values mix freely with both; mixing a numeric scalar with a
symbolic one, or numeric scalars for different q, raises ``ModeMismatch``.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Callable, Sequence

__all__ = [
    "ModeMismatch",
    "ScalarError",
    "ScalarMode",
    "QuadScalar",
    "VScalar",
    "parse_expr",
    "parse_scalar",
    "format_scalar",
    "scalar_eval",
    "as_fraction",
    "is_zero",
]


class ScalarError(ArithmeticError):
    pass


class ModeMismatch(ScalarError):
    pass


Rational = (int, Fraction)


def _isqrt_exact(q: int) -> int | None:
    r = math.isqrt(q)
    return r if r * r == q else None


# ---------------------------------------------------------------- numeric


class QuadScalar:
    """``a + b*sqrt(q)`` with rational a, b.  When q is a square, b is always 0."""

    __slots__ = ("a", "b", "q")

    def __init__(self, a=0, b=0, q: int = 1):
        if q <= 0:
            raise ScalarError(f"q must be positive, got {q}")
        a = Fraction(a)
        b = Fraction(b)
        r = _isqrt_exact(q)
        if r is not None and b:
            a += b * r
            b = Fraction(0)
        self.a = a
        self.b = b
        self.q = q

    def _coerce(self, other):
        if isinstance(other, QuadScalar):
            if other.q != self.q:
                raise ModeMismatch(f"numeric scalars with q={self.q} and q={other.q}")
            return other
        if isinstance(other, Rational):
            return QuadScalar(other, 0, self.q)
        if isinstance(other, VScalar):
            raise ModeMismatch("cannot mix numeric and symbolic scalars")
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadScalar(self.a + o.a, self.b + o.b, self.q)

    __radd__ = __add__

    def __neg__(self):
        return QuadScalar(-self.a, -self.b, self.q)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadScalar(self.a - o.a, self.b - o.b, self.q)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b, c, d = self.a, self.b, o.a, o.b
        return QuadScalar(a * c + b * d * self.q, a * d + b * c, self.q)

    __rmul__ = __mul__

    def inverse(self) -> "QuadScalar":
        n = self.a * self.a - self.b * self.b * self.q
        if n == 0:
            raise ZeroDivisionError("division by zero scalar")
        return QuadScalar(self.a / n, -self.b / n, self.q)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadScalar(1, 0, self.q)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, QuadScalar):
            if other.q != self.q:
                if self.b == 0 and other.b == 0:
                    return self.a == other.a
                raise ModeMismatch(f"numeric scalars with q={self.q} and q={other.q}")
            return self.a == other.a and self.b == other.b
        if isinstance(other, Rational):
            return self.b == 0 and self.a == other
        if isinstance(other, VScalar):
            raise ModeMismatch("cannot compare numeric and symbolic scalars")
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.q))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __repr__(self):
        return f"QuadScalar({format_scalar(self)!r}, q={self.q})"

    def __str__(self):
        return format_scalar(self)


# ---------------------------------------------------------------- symbolic
# dense polynomials in v: tuples of Fractions, lowest degree first, no trailing zeros


def _ptrim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def _padd(p, r):
    n = max(len(p), len(r))
    return _ptrim(
        (p[i] if i < len(p) else 0) + (r[i] if i < len(r) else 0) for i in range(n)
    )


def _pneg(p):
    return tuple(-c for c in p)


def _pmul(p, r):
    if not p or not r:
        return ()
    out = [Fraction(0)] * (len(p) + len(r) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(r):
                out[i + j] += a * b
    return _ptrim(out)


def _pdivmod(p, r):
    if not r:
        raise ZeroDivisionError("polynomial division by zero")
    p = list(p)
    quo = [Fraction(0)] * max(len(p) - len(r) + 1, 0)
    lead = r[-1]
    while len(p) >= len(r) and p:
        k = len(p) - len(r)
        c = p[-1] / lead
        quo[k] = c
        for j, b in enumerate(r):
            p[k + j] -= c * b
        p = list(_ptrim(p))
    return _ptrim(quo), tuple(p)


def _pgcd(p, r):
    while r:
        p, r = r, _pdivmod(p, r)[1]
    if not p:
        return ()
    return tuple(c / p[-1] for c in p)


def _peval(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


class VScalar:
    """Reduced quotient ``num/den`` of polynomials in v with rational coefficients.

    The denominator is monic; ``v**-1`` is represented as ``1/v``.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Sequence = (), den: Sequence = (1,), *, _reduced=False):
        num = _ptrim(Fraction(c) for c in num)
        den = _ptrim(Fraction(c) for c in den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            den = (Fraction(1),)
        elif not _reduced:
            g = _pgcd(num, den)
            if len(g) > 1:
                num = _pdivmod(num, g)[0]
                den = _pdivmod(den, g)[0]
        lead = den[-1]
        if lead != 1:
            num = tuple(c / lead for c in num)
            den = tuple(c / lead for c in den)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def v(cls) -> "VScalar":
        return cls((0, 1))

    @classmethod
    def const(cls, c) -> "VScalar":
        return cls((c,))

    def _coerce(self, other):
        if isinstance(other, VScalar):
            return other
        if isinstance(other, Rational):
            return VScalar((other,))
        if isinstance(other, QuadScalar):
            raise ModeMismatch("cannot mix numeric and symbolic scalars")
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return VScalar(_padd(self.num, o.num), self.den)
        return VScalar(
            _padd(_pmul(self.num, o.den), _pmul(o.num, self.den)), _pmul(self.den, o.den)
        )

    __radd__ = __add__

    def __neg__(self):
        return VScalar(_pneg(self.num), self.den, _reduced=True)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return VScalar(_pmul(self.num, o.num), _pmul(self.den, o.den))

    __rmul__ = __mul__

    def inverse(self) -> "VScalar":
        if not self.num:
            raise ZeroDivisionError("division by zero scalar")
        return VScalar(self.den, self.num, _reduced=True)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = VScalar((1,))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_rational(self) -> bool:
        return len(self.num) <= 1 and self.den == (1,)

    def __eq__(self, other):
        if isinstance(other, VScalar):
            return self.num == other.num and self.den == other.den
        if isinstance(other, Rational):
            return self.is_rational() and (self.num[0] if self.num else 0) == other
        if isinstance(other, QuadScalar):
            raise ModeMismatch("cannot compare numeric and symbolic scalars")
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.num[0] if self.num else Fraction(0))
            else:
                self._hash = hash((self.num, self.den))
        return self._hash

    def __bool__(self):
        return bool(self.num)

    def __repr__(self):
        return f"VScalar({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


# ---------------------------------------------------------------- modes


class ScalarMode:
    """Numeric (fixed q) or symbolic coefficient context."""

    __slots__ = ("q",)

    def __init__(self, q: int | None):
        if q is not None and q <= 0:
            raise ScalarError(f"q must be positive, got {q}")
        self.q = q

    @classmethod
    def numeric(cls, q: int) -> "ScalarMode":
        return cls(int(q))

    @classmethod
    def symbolic(cls) -> "ScalarMode":
        return cls(None)

    @property
    def is_symbolic(self) -> bool:
        return self.q is None

    def __eq__(self, other):
        return isinstance(other, ScalarMode) and other.q == self.q

    def __hash__(self):
        return hash(("ScalarMode", self.q))

    def __repr__(self):
        return "ScalarMode.symbolic()" if self.q is None else f"ScalarMode.numeric({self.q})"

    def v(self):
        """The square root of q in this mode."""
        if self.q is None:
            return VScalar.v()
        return QuadScalar(0, 1, self.q)

    def qval(self):
        if self.q is None:
            return VScalar((0, 0, 1))
        return QuadScalar(self.q, 0, self.q)

    def vpow(self, k: int):
        """v**k; in numeric mode with square q this is a plain Fraction."""
        if self.q is not None:
            r = _isqrt_exact(self.q)
            if r is not None:
                return Fraction(r) ** k
            if k % 2 == 0:
                return Fraction(self.q) ** (k // 2)
        return self.v() ** k

    def const(self, c):
        if self.q is None:
            return VScalar((c,))
        return QuadScalar(c, 0, self.q)

    def parse(self, text: str):
        return parse_scalar(text, self)

    def owns(self, x) -> bool:
        if isinstance(x, Rational):
            return True
        if isinstance(x, QuadScalar):
            return x.q == self.q
        if isinstance(x, VScalar):
            return self.q is None
        return False


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", int(num), m.start(1)))
        elif name is not None:
            out.append(("name", name, m.start(2)))
        else:
            if op not in "+-*/^()":
                raise ValueError(f"unexpected character {op!r} at position {m.start(3)}")
            out.append(("op", op, m.start(3)))
        pos = m.end()
    return out


def parse_expr(text: str, const: Callable, var: Callable):
    """Parse the scalar/polynomial grammar.

    ``const(int)`` builds ring constants, ``var(name)`` builds variables.
    Supports ``+ - * / ^`` (integer exponents, possibly negative) and parentheses.
    Raises ``ValueError`` with the offending position on malformed input.
    """
    toks = _tokenize(text)
    i = 0

    def peek():
        return toks[i] if i < len(toks) else None

    def take(kind=None, val=None):
        nonlocal i
        t = peek()
        if t is None:
            raise ValueError(f"unexpected end of input in {text!r}")
        if (kind and t[0] != kind) or (val and t[1] != val):
            raise ValueError(f"unexpected token {t[1]!r} at position {t[2]} in {text!r}")
        i += 1
        return t

    def expr():
        t = peek()
        sign = 1
        if t and t[0] == "op" and t[1] in "+-":
            take()
            sign = -1 if t[1] == "-" else 1
        acc = term()
        if sign < 0:
            acc = -acc
        while True:
            t = peek()
            if t and t[0] == "op" and t[1] in "+-":
                take()
                rhs = term()
                acc = acc + rhs if t[1] == "+" else acc - rhs
            else:
                return acc

    def term():
        acc = power()
        while True:
            t = peek()
            if t and t[0] == "op" and t[1] in "*/":
                take()
                rhs = power()
                acc = acc * rhs if t[1] == "*" else acc / rhs
            else:
                return acc

    def power():
        base = atom()
        t = peek()
        if t and t[0] == "op" and t[1] == "^":
            take()
            sign = 1
            t2 = peek()
            if t2 and t2[0] == "op" and t2[1] in "+-":
                take()
                sign = -1 if t2[1] == "-" else 1
            e = take("num")[1] * sign
            return base ** e
        return base

    def atom():
        t = take()
        if t[0] == "num":
            return const(t[1])
        if t[0] == "name":
            return var(t[1])
        if t[1] == "(":
            val = expr()
            take("op", ")")
            return val
        if t[1] == "-":
            return -power()
        raise ValueError(f"unexpected token {t[1]!r} at position {t[2]} in {text!r}")

    if not toks:
        raise ValueError("empty expression")
    result = expr()
    if i != len(toks):
        t = toks[i]
        raise ValueError(f"unexpected token {t[1]!r} at position {t[2]} in {text!r}")
    return result


def parse_scalar(text: str, mode: ScalarMode | None = None):
    """Parse a scalar string.  Without a mode, rational strings give ``Fraction``
    and anything mentioning ``v`` gives a ``VScalar``."""

    def var(name):
        if name != "v":
            raise ValueError(f"unknown symbol {name!r} in scalar {text!r}")
        if mode is None:
            return VScalar.v()
        return mode.v()

    def const(n):
        if mode is None or mode.is_symbolic:
            return VScalar((n,))
        return QuadScalar(n, 0, mode.q)

    val = parse_expr(text, const, var)
    if mode is None and isinstance(val, VScalar) and val.is_rational():
        return val.num[0] if val.num else Fraction(0)
    return val


# ---------------------------------------------------------------- printing


def _fmt_rat(c: Fraction) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _fmt_terms(terms) -> str:
    """terms: iterable of (power, coeff) in printing order."""
    parts = []
    for k, c in terms:
        if c == 0:
            continue
        neg = c < 0
        a = -c if neg else c
        if k == 0:
            body = _fmt_rat(a)
        else:
            mono = "v" if k == 1 else f"v^{k}"
            body = mono if a == 1 else f"{_fmt_rat(a)}*{mono}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("-" if neg else "+") + body)
    return "".join(parts) if parts else "0"


def format_scalar(x) -> str:
    """Canonical string: terms in decreasing power of v."""
    if isinstance(x, bool):
        x = int(x)
    if isinstance(x, Rational):
        return _fmt_rat(Fraction(x))
    if isinstance(x, QuadScalar):
        return _fmt_terms([(1, x.b), (0, x.a)])
    if isinstance(x, VScalar):
        den = x.den
        shift = len(den) - 1
        if all(c == 0 for c in den[:-1]):
            # monomial denominator: print as a Laurent polynomial
            terms = [(i - shift, c) for i, c in enumerate(x.num)]
            return _fmt_terms(reversed(terms))
        num = _fmt_terms(reversed(list(enumerate(x.num))))
        dn = _fmt_terms(reversed(list(enumerate(den))))
        return f"({num})/({dn})"
    if hasattr(x, "to_string"):
        return x.to_string()
    raise TypeError(f"not a scalar: {x!r}")


# ---------------------------------------------------------------- helpers


def scalar_eval(x, q: int) -> QuadScalar:
    """Substitute v -> sqrt(q) in a symbolic scalar."""
    if isinstance(x, Rational):
        return QuadScalar(x, 0, q)
    if isinstance(x, QuadScalar):
        if x.q != q:
            raise ModeMismatch(f"scalar already numeric with q={x.q}")
        return x
    if not isinstance(x, VScalar):
        raise TypeError(f"not a scalar: {x!r}")
    root = QuadScalar(0, 1, q)
    d = _peval(x.den, root)
    if not d:
        raise ScalarError(f"denominator {format_scalar(VScalar(x.den))} vanishes at v^2={q}")
    return _peval(x.num, root) / d if x.num else QuadScalar(0, 0, q)


def as_fraction(x) -> Fraction:
    """Rational value of a scalar, or ValueError if it is irrational / symbolic."""
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, QuadScalar):
        if x.b:
            raise ValueError(f"{x} is not rational")
        return x.a
    if isinstance(x, VScalar):
        if x.is_rational():
            return x.num[0] if x.num else Fraction(0)
        raise ValueError(f"{x} is not rational")
    raise TypeError(f"not a scalar: {x!r}")


def is_zero(x) -> bool:
    return not x
