"""Exact scalars: rationals and elements of real quadratic fields Q(sqrt d).

Rationals are plain :class:`fractions.Fraction` values.  :class:`QuadRat`
represents ``a + b*sqrt(d)`` with rational ``a, b`` and square-free ``d``.
A value with ``b == 0`` is rational and is stored with ``d == 1`` so that it
compares and hashes like the corresponding ``Fraction``.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Union

Rational = Fraction

__all__ = [
    "Rational",
    "QuadRat",
    "FieldMismatchError",
    "DomainError",
    "as_rational",
    "rat_gcd",
    "quad_mul",
    "quad_sign",
    "quad_inv",
    "squarefree_split",
    "sqrt_rational",
    "rational_to_json",
    "rational_from_json",
    "parse_scalar",
]


class FieldMismatchError(ValueError):
    """Two irrational operands live in different quadratic fields."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, QuadRat):
        if x.b != 0:
            raise DomainError(f"{x} is irrational")
        return x.a
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def rat_gcd(a, b) -> Fraction:
    """Largest positive rational ``m`` such that ``a/m`` and ``b/m`` are integers.

    For reduced ``p1/q1`` and ``p2/q2`` this is ``gcd(p1, p2) / lcm(q1, q2)``.
    """
    a, b = as_rational(a), as_rational(b)
    if a <= 0 or b <= 0:
        raise DomainError("rat_gcd needs positive arguments")
    num = math.gcd(a.numerator, b.numerator)
    den = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
    return Fraction(num, den)


def squarefree_split(n: int) -> tuple[int, int]:
    """Write a positive integer as ``s**2 * t`` with ``t`` square-free."""
    if n <= 0:
        raise DomainError("squarefree_split needs a positive integer")
    s, t = 1, 1
    rest = n
    p = 2
    while p * p <= rest:
        e = 0
        while rest % p == 0:
            rest //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            t *= p
        p += 1 if p == 2 else 2
    t *= rest
    return s, t


class QuadRat:
    """An element ``a + b*sqrt(d)`` of a real quadratic field.

    Construction normalises ``d`` to its square-free part, folding the square
    factor into ``b``.  Instances are immutable.
    """

    __slots__ = ("_a", "_b", "_d")

    def __init__(self, a=0, b=0, d: int = 1):
        a, b = as_rational(a), as_rational(b)
        d = int(d)
        if d <= 0:
            raise DomainError("d must be a positive integer")
        s, t = squarefree_split(d)
        b = b * s
        if t == 1:
            a, b = a + b, Fraction(0)
        if b == 0:
            t = 1
        self._a, self._b, self._d = a, b, t

    @classmethod
    def _make(cls, a: Fraction, b: Fraction, d: int) -> "QuadRat":
        # d already square-free; skips normalisation
        obj = object.__new__(cls)
        if b == 0:
            d = 1
        obj._a, obj._b, obj._d = a, b, d
        return obj

    @property
    def a(self) -> Fraction:
        return self._a

    @property
    def b(self) -> Fraction:
        return self._b

    @property
    def d(self) -> int:
        return self._d

    @classmethod
    def coerce(cls, x) -> "QuadRat":
        if isinstance(x, QuadRat):
            return x
        return cls._make(as_rational(x), Fraction(0), 1)

    @classmethod
    def sqrt(cls, x) -> "QuadRat":
        """Exact square root of a nonnegative rational."""
        return sqrt_rational(as_rational(x))

    def is_rational(self) -> bool:
        return self._b == 0

    def to_rational(self) -> Fraction:
        return as_rational(self)

    def _field(self, other: "QuadRat") -> int:
        if self._b == 0:
            return other._d
        if other._b == 0 or other._d == self._d:
            return self._d
        raise FieldMismatchError(f"cannot combine sqrt({self._d}) with sqrt({other._d})")

    def __add__(self, other):
        try:
            other = QuadRat.coerce(other)
        except TypeError:
            return NotImplemented
        d = self._field(other)
        return QuadRat._make(self._a + other._a, self._b + other._b, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadRat._make(-self._a, -self._b, self._d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            other = QuadRat.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return QuadRat.coerce(other) - self

    def __mul__(self, other):
        try:
            other = QuadRat.coerce(other)
        except TypeError:
            return NotImplemented
        d = self._field(other)
        if d == 1:
            return QuadRat._make(self._a * other._a, Fraction(0), 1)
        a = self._a * other._a + self._b * other._b * d
        b = self._a * other._b + self._b * other._a
        return QuadRat._make(a, b, d)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadRat":
        return QuadRat._make(self._a, -self._b, self._d)

    def norm(self) -> Fraction:
        return self._a * self._a - self._b * self._b * self._d

    def inverse(self) -> "QuadRat":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("QuadRat division by zero")
        return QuadRat._make(self._a / n, -self._b / n, self._d)

    def __truediv__(self, other):
        try:
            other = QuadRat.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return QuadRat.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = QuadRat(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def sign(self) -> int:
        sa = (self._a > 0) - (self._a < 0)
        sb = (self._b > 0) - (self._b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 against b^2 d
        diff = self._a * self._a - self._b * self._b * self._d
        return sa if diff > 0 else sb

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __bool__(self):
        return self._a != 0 or self._b != 0

    def _cmp(self, other) -> int:
        return (self - QuadRat.coerce(other)).sign()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self._b == 0 and self._a == other
        if isinstance(other, QuadRat):
            return self._a == other._a and self._b == other._b and self._d == other._d
        return NotImplemented

    def __hash__(self):
        if self._b == 0:
            return hash(self._a)
        return hash((self._a, self._b, self._d))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def floor(self) -> int:
        if self._b == 0:
            return math.floor(self._a)
        guess = math.floor(float(self))
        while self < guess:
            guess -= 1
        while self >= guess + 1:
            guess += 1
        return guess

    def ceil(self) -> int:
        return -((-self).floor())

    def __float__(self):
        return float(self._a) + float(self._b) * math.sqrt(self._d)

    def __repr__(self):
        return f"QuadRat({self._a!s}, {self._b!s}, d={self._d})"

    def __str__(self):
        if self._b == 0:
            return str(self._a)
        root = f"sqrt{self._d}"
        coeff = "" if abs(self._b) == 1 else f"{abs(self._b)}*"
        if self._a == 0:
            return f"{'-' if self._b < 0 else ''}{coeff}{root}"
        return f"{self._a}{'-' if self._b < 0 else '+'}{coeff}{root}"

    def to_json(self) -> dict:
        return {"a": rational_to_json(self._a), "b": rational_to_json(self._b), "d": self._d}

    @classmethod
    def from_json(cls, obj) -> "QuadRat":
        if isinstance(obj, str):
            return cls(rational_from_json(obj))
        return cls(rational_from_json(obj["a"]), rational_from_json(obj["b"]), obj["d"])


def quad_mul(x, y) -> QuadRat:
    return QuadRat.coerce(x) * QuadRat.coerce(y)


def quad_sign(x) -> int:
    return QuadRat.coerce(x).sign()


def quad_inv(x) -> QuadRat:
    return QuadRat.coerce(x).inverse()


def sqrt_rational(x: Fraction) -> QuadRat:
    """``sqrt(x)`` for rational ``x >= 0`` as ``r*sqrt(t)``."""
    x = as_rational(x)
    if x < 0:
        raise DomainError("square root of a negative rational")
    if x == 0:
        return QuadRat(0)
    # sqrt(p/q) = sqrt(p*q)/q
    s, t = squarefree_split(x.numerator * x.denominator)
    return QuadRat(0, Fraction(s, x.denominator), t)


def rational_to_json(x) -> str:
    """``"p/q"``, or ``"p"`` when the denominator is 1."""
    return str(as_rational(x))


def rational_from_json(s) -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (int, str)):
        raise TypeError(f"expected a rational string, got {type(s).__name__}")
    if isinstance(s, str) and not re.fullmatch(r"[+-]?\d+(?:/\d+)?", s.strip()):
        raise ValueError(f"not an exact rational: {s!r}")
    return Fraction(s)


_RAT = r"[+-]?\d+(?:/\d+)?"
_UNS = r"\d+(?:/\d+)?"
_ROOT = r"(?:√|sqrt)(?:\((?P<d>\d+)\)|(?P<d2>\d+))"
_PLAIN_RE = re.compile(rf"^(?P<a>{_RAT})$")
_SUM_RE = re.compile(rf"^(?P<a>{_RAT})(?P<sgn>[+-])(?:(?P<b>{_UNS})\*?)?{_ROOT}$")
_ROOT_RE = re.compile(rf"^(?P<sgn>[+-])?(?:(?P<b>{_UNS})\*?)?{_ROOT}$")


def parse_scalar(text: str) -> QuadRat:
    """Parse ``p/q``, ``p/q+r/s√d``, ``r/s*sqrt(d)`` and similar into a QuadRat.

    Decimal input is rejected.  Raises ``ValueError`` naming the offending
    position on malformed input.
    """
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty scalar")
    m = _PLAIN_RE.match(s)
    if m:
        return QuadRat(Fraction(m.group("a")))
    m = _SUM_RE.match(s) or _ROOT_RE.match(s)
    if m is None:
        pos = _first_bad_position(s)
        raise ValueError(f"cannot parse scalar {text!r} at position {pos}")
    gd = m.groupdict()
    a = Fraction(gd["a"]) if gd.get("a") else Fraction(0)
    b = Fraction(gd["b"]) if gd["b"] else Fraction(1)
    if gd["sgn"] == "-":
        b = -b
    d = int(gd["d"] or gd["d2"])
    if d == 0:
        raise ValueError(f"cannot parse scalar {text!r}: sqrt(0)")
    return QuadRat(a, b, d)


def _first_bad_position(s: str) -> int:
    """Length of the longest prefix that can still be completed to valid input."""
    for i in range(len(s), 0, -1):
        prefix = s[:i]
        for tail in ("", "1", "√1", "1√1", "(1)", "1)"):
            cand = prefix + tail
            if _PLAIN_RE.match(cand) or _SUM_RE.match(cand) or _ROOT_RE.match(cand):
                return i
    return 0


Scalar = Union[int, Fraction, QuadRat]
