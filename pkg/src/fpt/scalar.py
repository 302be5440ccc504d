"""Exact scalars over Q and a single real quadratic field Q(sqrt(m)).

Rational values are plain :class:`fractions.Fraction` objects.  Values with a
nonzero radical part are :class:`Quad` instances; arithmetic that cancels the
radical part collapses back to a ``Fraction``, so ``x == 0`` and ``isinstance``
checks behave uniformly.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Union


class RadicandError(ValueError):
    """Raised when values from different quadratic fields are combined."""


def _squarefree(m: int) -> bool:
    if m < 2:
        return False
    k = 2
    while k * k <= m:
        if m % (k * k) == 0:
            return False
        k += 1
    return True


class Quad:
    """``a + b*sqrt(m)`` with ``b != 0`` and ``m`` squarefree."""

    __slots__ = ("a", "b", "m")

    def __init__(self, a, b, m: int):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.m = int(m)

    @staticmethod
    def make(a, b, m: int) -> "Scalar":
        b = Fraction(b)
        if b == 0:
            return Fraction(a)
        if not _squarefree(int(m)):
            raise ValueError(f"radicand {m} is not a squarefree integer >= 2")
        return Quad(a, b, m)

    # -- helpers -------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Quad):
            if other.m != self.m:
                raise RadicandError(
                    f"mixed radicands sqrt({self.m}) and sqrt({other.m})")
            return other.a, other.b
        if isinstance(other, (int, Rational)):
            return Fraction(other), Fraction(0)
        return None

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return Quad.make(self.a + c[0], self.b + c[1], self.m)

    __radd__ = __add__

    def __neg__(self):
        return Quad(-self.a, -self.b, self.m)

    def __pos__(self):
        return self

    def __sub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return Quad.make(self.a - c[0], self.b - c[1], self.m)

    def __rsub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return Quad.make(c[0] - self.a, c[1] - self.b, self.m)

    def __mul__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        a, b = c
        return Quad.make(self.a * a + self.m * self.b * b,
                         self.a * b + self.b * a, self.m)

    __rmul__ = __mul__

    def _inverse(self):
        norm = self.a * self.a - self.m * self.b * self.b
        return Quad(self.a / norm, -self.b / norm, self.m)

    def __truediv__(self, other):
        if isinstance(other, Quad):
            self._coerce(other)
            return self * other._inverse()
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        if c[0] == 0:
            raise ZeroDivisionError("division by zero")
        return Quad(self.a / c[0], self.b / c[0], self.m)

    def __rtruediv__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return self._inverse() * c[0]

    def __abs__(self):
        return -self if scalar_sign(self) < 0 else self

    # -- comparison ----------------------------------------------------------
    def _cmp(self, other):
        c = self._coerce(other)
        if c is None:
            return None
        return scalar_sign(self - Quad.make(c[0], c[1], self.m))

    def __eq__(self, other):
        if isinstance(other, Quad):
            return (self.m, self.a, self.b) == (other.m, other.a, other.b)
        if isinstance(other, (int, Rational)):
            return False
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.m))

    def __lt__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s < 0

    def __le__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s <= 0

    def __gt__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s > 0

    def __ge__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s >= 0

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.m)

    def __repr__(self):
        return f"Quad({format_scalar(self)!r})"


Scalar = Union[Fraction, Quad]


def to_scalar(x) -> Scalar:
    if isinstance(x, Quad):
        return x
    if isinstance(x, float):
        raise TypeError("floating-point values are not exact scalars")
    return Fraction(x)


def sqrt(m: int) -> Quad:
    return Quad.make(0, 1, m)


def parts(x) -> tuple[Fraction, Fraction]:
    """Split ``x`` into (rational part, radical coefficient)."""
    if isinstance(x, Quad):
        return x.a, x.b
    return Fraction(x), Fraction(0)


def is_rational(x) -> bool:
    return not isinstance(x, Quad)


def radicand(values: Iterable) -> int | None:
    """The shared radicand of ``values`` (None if all rational)."""
    found = None
    for v in values:
        if isinstance(v, Quad):
            if found is None:
                found = v.m
            elif found != v.m:
                raise RadicandError(
                    f"mixed radicands sqrt({found}) and sqrt({v.m})")
    return found


def _sign(q: Fraction) -> int:
    return (q > 0) - (q < 0)


def scalar_sign(x) -> int:
    """Exact sign of ``a + b*sqrt(m)`` using integer comparisons only."""
    if not isinstance(x, Quad):
        return _sign(Fraction(x))
    sa, sb = _sign(x.a), _sign(x.b)
    if sa == 0:
        return sb
    if sa == sb:
        return sa
    # opposite signs: compare a^2 with m b^2
    lhs = x.a * x.a
    rhs = x.m * x.b * x.b
    if lhs == rhs:  # impossible for squarefree m, kept for safety
        return 0
    return sa if lhs > rhs else sb


def floor_scalar(x) -> int:
    if not isinstance(x, Quad):
        return math.floor(Fraction(x))
    k = math.floor(float(x))
    # float estimate corrected exactly
    while scalar_sign(x - k) < 0:
        k -= 1
    while scalar_sign(x - (k + 1)) >= 0:
        k += 1
    return k


def ceil_scalar(x) -> int:
    return -floor_scalar(-x)


# -- textual form -------------------------------------------------------------

def _fmt_frac(q: Fraction, force_den: bool = False) -> str:
    if q.denominator == 1 and not force_den:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_scalar(x) -> str:
    """Canonical text: ``p/q`` (``/1`` omitted) or ``p/q+r/s*sqrt(m)``."""
    if isinstance(x, Quad):
        head = _fmt_frac(x.a, True)
        tail = _fmt_frac(abs(x.b), True)
        sign = "+" if x.b > 0 else "-"
        return f"{head}{sign}{tail}*sqrt({x.m})"
    return _fmt_frac(Fraction(x))


_RAT = r"[+-]?\d+(?:/\d+)?"
_TERM_RE = re.compile(
    rf"^\s*(?:(?P<rat>{_RAT})(?=$|[+-]))?"
    rf"(?:(?P<rsign>[+-])?(?:(?P<coef>\d+(?:/\d+)?)\*)?sqrt\((?P<m>\d+)\))?\s*$")


class ScalarSyntaxError(ValueError):
    pass


def parse_scalar(text: str, expect_radicand: int | None = None) -> Scalar:
    """Parse the textual scalar grammar (inverse of :func:`format_scalar`)."""
    s = text.strip()
    m = _TERM_RE.match(s)
    if not s or m is None or (m.group("rat") is None and m.group("m") is None):
        raise ScalarSyntaxError(f"malformed scalar {text!r}")
    rat = Fraction(m.group("rat")) if m.group("rat") else Fraction(0)
    if m.group("m") is None:
        return rat
    rad = int(m.group("m"))
    coef = Fraction(m.group("coef")) if m.group("coef") else Fraction(1)
    if m.group("rsign") == "-":
        coef = -coef
    elif m.group("rsign") is None and m.group("rat") is not None:
        raise ScalarSyntaxError(f"malformed scalar {text!r}")
    if expect_radicand is not None and rad != expect_radicand:
        raise RadicandError(
            f"scalar {text!r} uses sqrt({rad}) but context is sqrt({expect_radicand})")
    if coef == 0:
        return rat
    return Quad.make(rat, coef, rad)
