"""Exact Gaussian rational arithmetic.

A Gaussian rational is a + b*i with a, b in Q, kept in lowest terms by
``fractions.Fraction``.  This is the coefficient field for every symbolic
computation in the package; floating point only ever appears after an
explicit ``complex()`` conversion.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

RationalLike = Union[int, Fraction]


class QI:
    """Gaussian rational a + b*i with exact Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: RationalLike = 0, im: RationalLike = 0):
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_complex(z: complex, max_denominator: int = 10**9) -> "QI":
        """Nearest Gaussian rational with bounded denominator (not exact)."""
        return QI(Fraction(z.real).limit_denominator(max_denominator),
                  Fraction(z.imag).limit_denominator(max_denominator))

    # -- predicates ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def is_rational_integer(self) -> bool:
        return not self.im and self.re.denominator == 1

    # -- ring/field operations ------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QI(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QI(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QI(other.re - self.re, other.im - self.im)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return QI(self.re * other.re - self.im * other.im,
                  self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = other.re * other.re + other.im * other.im
        if not n:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return QI((self.re * other.re + self.im * other.im) / n,
                  (self.im * other.re - self.re * other.im) / n)

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __neg__(self):
        return QI(-self.re, -self.im)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        out = QI(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self) -> "QI":
        return QI(self.re, -self.im)

    def norm(self) -> Fraction:
        """Field norm re^2 + im^2 (a nonnegative rational)."""
        return self.re * self.re + self.im * self.im

    # -- comparisons / hashing -------------------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return not self.is_zero()

    # -- conversions ------------------------------------------------------

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"QI({self.re!r}, {self.im!r})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            if self.im == 1:
                return "i"
            if self.im == -1:
                return "-i"
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        mag = abs(self.im)
        imag = "i" if mag == 1 else f"{mag}*i"
        return f"{self.re}{sign}{imag}"


def _coerce(value) -> "QI":
    if isinstance(value, QI):
        return value
    if isinstance(value, (int, Fraction)):
        return QI(value)
    return NotImplemented


ZERO = QI(0)
ONE = QI(1)
I = QI(0, 1)


def rational_isqrt(value: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None."""
    if value < 0:
        return None
    num = math.isqrt(value.numerator)
    den = math.isqrt(value.denominator)
    if num * num == value.numerator and den * den == value.denominator:
        return Fraction(num, den)
    return None


def qi_sqrt(z: QI) -> QI | None:
    """Exact square root within Q(i), or None when no such root exists.

    Solves (u + v*i)^2 = z; requires norm(z) to be a rational square and
    the resulting half-sum to be one as well.
    """
    if z.is_zero():
        return QI(0)
    s = rational_isqrt(z.norm())
    if s is None:
        return None
    u2 = (z.re + s) / 2
    u = rational_isqrt(u2)
    if u is not None and u != 0:
        v = z.im / (2 * u)
        root = QI(u, v)
        if root * root == z:
            return root
    # z.re + s == 0 happens for negative reals: root is purely imaginary
    v2 = (s - z.re) / 2
    v = rational_isqrt(v2)
    if v is not None:
        root = QI(0, v)
        if root * root == z:
            return root
    return None
