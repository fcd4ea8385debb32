"""Exact scalars.

Classical computations use :class:`fractions.Fraction`.  Some worked examples
(rotation-derived unistochastic matrices) have entries such as
``cos(pi/8)**2 = 1/2 + sqrt(2)/4``; those live in a real quadratic field and are
represented exactly by :class:`QuadSurd`.  Both types support the field
operations and total ordering, which is all the linear algebra needs.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational

TOL = 1e-9  # float tolerance used only by the quantum module and float views


class _Undefined:
    """Marker for a conditional probability whose condition has probability 0."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNDEFINED"

    def __reduce__(self):
        return (_Undefined, ())

    def __bool__(self):
        return False


UNDEFINED = _Undefined()


def is_undefined(x) -> bool:
    return x is UNDEFINED


def _squarefree_split(n: int) -> tuple[int, int]:
    # n = k*k*r with r squarefree
    k, r, f = 1, 1, 2
    while f * f <= n:
        while n % (f * f) == 0:
            n //= f * f
            k *= f
        f += 1
    r = n
    return k, r


def _make(a, b, r):
    return Fraction(a) if b == 0 else QuadSurd(a, b, r)


class QuadSurd:
    """Exact number ``a + b*sqrt(r)`` with rational ``a``, ``b`` and squarefree ``r > 1``."""

    __slots__ = ("a", "b", "r")

    def __init__(self, a, b=0, r: int = 2):
        if r < 2:
            raise ValueError("radicand must be >= 2")
        k, rr = _squarefree_split(int(r))
        if rr == 1:
            raise ValueError("radicand must not be a perfect square")
        self.a = Fraction(a)
        self.b = Fraction(b) * k
        self.r = rr

    @classmethod
    def sqrt(cls, r: int) -> "QuadSurd":
        return cls(0, 1, r)

    def _coerce(self, other):
        if isinstance(other, QuadSurd):
            if other.r != self.r and other.b != 0 and self.b != 0:
                raise ValueError("cannot mix different quadratic fields")
            return other
        if isinstance(other, (int, Rational)):
            return QuadSurd(Fraction(other), 0, self.r)
        return None

    def _radicand(self, o):
        return self.r if self.b != 0 or o.b == 0 else o.r

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return _make(self.a + o.a, self.b + o.b, self._radicand(o))

    __radd__ = __add__

    def __neg__(self):
        return QuadSurd(-self.a, -self.b, self.r)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        r = self._radicand(o)
        return _make(self.a * o.a + self.b * o.b * r, self.a * o.b + self.b * o.a, r)

    __rmul__ = __mul__

    def _inverse(self):
        den = self.a * self.a - self.b * self.b * self.r
        if den == 0:
            raise ZeroDivisionError("division by zero")
        return _make(self.a / den, -self.b / den, self.r)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * (o._inverse() if isinstance(o, QuadSurd) else 1 / o)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._inverse() * o

    def sign(self) -> int:
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with b^2 r
        lhs = self.a * self.a
        rhs = self.b * self.b * self.r
        if lhs == rhs:
            return 0
        return sa if lhs > rhs else sb

    def _cmp(self, other):
        o = self._coerce(other)
        if o is None:
            return None
        d = self - o
        return d.sign() if isinstance(d, QuadSurd) else (d > 0) - (d < 0)

    def __eq__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c == 0

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.r))

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __round__(self, ndigits=None):
        return round(float(self), ndigits)

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.r)

    def __bool__(self):
        return self.sign() != 0

    def __repr__(self):
        return f"QuadSurd({self.a}, {self.b}, {self.r})"

    def __str__(self):
        return format_scalar(self)


def as_exact(x):
    """Convert ints, Fractions, surds and rational strings to an exact scalar.

    Floats are rejected: silently turning 0.1 into a dyadic rational hides bugs.
    """
    if isinstance(x, (QuadSurd, Fraction)):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, str):
        return parse_scalar(x)
    raise TypeError(f"not an exact scalar: {x!r}")


def simplify(x):
    """Collapse a surd with zero irrational part to a Fraction."""
    if isinstance(x, QuadSurd) and x.b == 0:
        return x.a
    return x


_SURD_RE = re.compile(
    r"^\s*(?P<a>[+-]?\d+(?:/\d+)?)?\s*(?:(?P<sign>[+-])\s*)?(?:(?P<b>\d+(?:/\d+)?)\s*\*\s*)?sqrt\((?P<r>\d+)\)\s*$"
)


def parse_scalar(s: str):
    """Parse ``"3/4"``, ``"-2"`` or ``"1/2+1/4*sqrt(2)"``."""
    s = s.strip()
    if "sqrt" not in s:
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad rational literal {s!r}") from exc
    m = _SURD_RE.match(s)
    if not m:
        raise ValueError(f"bad surd literal {s!r}")
    if m.group("a") and not m.group("sign"):
        # "2sqrt(2)" or "1/2 sqrt(2)" without an operator is ambiguous
        raise ValueError(f"bad surd literal {s!r}")
    a = Fraction(m.group("a")) if m.group("a") else Fraction(0)
    b = Fraction(m.group("b")) if m.group("b") else Fraction(1)
    if m.group("sign") == "-":
        b = -b
    return simplify(QuadSurd(a, b, int(m.group("r"))))


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(x) -> str:
    if x is UNDEFINED:
        return "undefined"
    if isinstance(x, QuadSurd):
        if x.b == 0:
            return _frac_str(x.a)
        a = _frac_str(x.a) if x.a != 0 else ""
        sign = "-" if x.b < 0 else ("+" if a else "")
        b = "" if abs(x.b) == 1 else _frac_str(abs(x.b)) + "*"
        return f"{a}{sign}{b}sqrt({x.r})"
    if isinstance(x, int):
        return str(x)
    return _frac_str(Fraction(x))


def to_float(x) -> float:
    if x is UNDEFINED:
        return math.nan
    return float(x)
