"""Coefficient domains for the analysis at infinity.

The level value h is carried symbolically through every computation at
infinity.  Base field: rational functions in h over Q(i) (``HRat``).
Branch leading coefficients may be algebraic over the base; they live in a
quotient ring ``HRat[c]/(modulus)`` (``Ext``).  Division by a zero divisor
of a reducible modulus raises ``SplitRequired`` carrying the discovered
factor, so callers can split the class and retry (dynamic evaluation);
no general factorization routine is needed.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import Poly, poly_gcd, poly_xgcd
from .qi import QI


def hpoly(*coeffs) -> Poly:
    """Polynomial in h from low-degree coefficients (ints/Fractions/QI)."""
    return Poly([c if isinstance(c, QI) else QI(c) for c in coeffs])


_ONE_POLY = Poly([QI(1)])
_QI_ONE = QI(1)


def format_hpoly(p: Poly, var: str = "h") -> str:
    if p.is_zero():
        return "0"
    parts = []
    for k in range(p.degree(), -1, -1):
        c = p.coeff(k)
        if not c:
            continue
        cs = str(c)
        if "+" in cs[1:] or "-" in cs[1:]:
            cs = f"({cs})"
        if k == 0:
            parts.append(cs)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            parts.append(mono if cs == "1" else f"-{mono}" if cs == "-1" else f"{cs}*{mono}")
    out = parts[0]
    for piece in parts[1:]:
        if piece.startswith("-"):
            out += " - " + piece[1:]
        else:
            out += " + " + piece
    return out


class HRat:
    """Rational function in h over Q(i), normalized (monic reduced denominator)."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, _normalized: bool = False):
        if den is None:
            den = Poly([QI(1)])
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _normalized:
            if num.is_zero():
                den = _ONE_POLY
            elif den.degree() == 0:
                lead = den.constant()
                if lead != _QI_ONE:
                    num = num / lead
                den = _ONE_POLY
            else:
                g = poly_gcd(num, den)
                if g.degree() > 0:
                    num = num / g
                    den = den / g
                lead = den.lc()
                num = num / lead
                den = den / lead
        self.num = num
        self.den = den

    # -- constructors ----------------------------------------------------

    @staticmethod
    def from_scalar(c) -> "HRat":
        c = c if isinstance(c, QI) else QI(c)
        return HRat(Poly([c]), _normalized=True) if c else HRAT_ZERO

    @staticmethod
    def from_hpoly(p: Poly) -> "HRat":
        return HRat(p, _normalized=True)

    # -- queries ------------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def one_like(self) -> "HRat":
        return HRAT_ONE

    def is_polynomial(self) -> bool:
        return self.den.degree() == 0

    def is_h_free(self) -> bool:
        return self.num.degree() <= 0 and self.den.degree() == 0

    def h_degree(self) -> int | None:
        """Degree in h when polynomial, else None."""
        if not self.is_polynomial():
            return None
        return max(self.num.degree(), 0)

    def as_hpoly(self) -> Poly | None:
        if not self.is_polynomial():
            return None
        return self.num / self.den.constant()

    def as_scalar(self) -> QI | None:
        if self.is_h_free():
            if self.num.is_zero():
                return QI(0)
            return self.num.constant() / self.den.constant()
        return None

    # -- arithmetic ------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, HRat):
            return other
        if isinstance(other, (int, Fraction, QI)):
            return HRat.from_scalar(other)
        if isinstance(other, Poly):
            return HRat.from_hpoly(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return HRat(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return HRat(self.num * other.den - other.num * self.den, self.den * other.den)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self):
        return HRat(-self.num, self.den, _normalized=True)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return HRAT_ZERO
        return HRat(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return HRat(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    # -- output --------------------------------------------------------------------

    def eval_complex(self, h: complex) -> complex:
        return self.num.eval_complex(h) / self.den.eval_complex(h)

    def __repr__(self):
        return f"HRat({self})"

    def __str__(self):
        if self.is_polynomial():
            p = self.as_hpoly()
            return format_hpoly(p)
        return f"({format_hpoly(self.num)})/({format_hpoly(self.den)})"


HRAT_ZERO = HRat(Poly(), _normalized=True)
HRAT_ONE = HRat(Poly([QI(1)]), _normalized=True)


class SplitRequired(Exception):
    """A reducible extension modulus was detected during division.

    ``factor`` is a proper monic factor of the modulus; the caller should
    split the branch class over (factor, modulus/factor) and recompute.
    """

    def __init__(self, factor: Poly):
        super().__init__("extension modulus split required")
        self.factor = factor


class ExtRing:
    """Quotient ring HRat[c]/(modulus); modulus monic with HRat coefficients."""

    __slots__ = ("modulus", "degree")

    def __init__(self, modulus: Poly):
        if modulus.degree() < 1:
            raise ValueError("extension modulus must have positive degree")
        self.modulus = modulus.monic()
        self.degree = modulus.degree()

    def element(self, rep: Poly) -> "Ext":
        return Ext(self, rep % self.modulus)

    def from_hrat(self, value: HRat) -> "Ext":
        return Ext(self, Poly([value]))

    def generator(self) -> "Ext":
        return self.element(Poly([HRAT_ZERO, HRAT_ONE]))

    def __repr__(self):
        return f"ExtRing(c: {format_hpoly_poly(self.modulus)})"


def format_hpoly_poly(p: Poly, var: str = "c") -> str:
    """Format a Poly with HRat coefficients."""
    if p.is_zero():
        return "0"
    parts = []
    for k in range(p.degree(), -1, -1):
        coeff = p.coeff(k)
        if isinstance(coeff, HRat):
            if coeff.is_zero():
                continue
            cs = str(coeff)
        else:
            if not coeff:
                continue
            cs = str(coeff)
        if any(op in cs[1:] for op in "+-") or "/" in cs:
            cs = f"({cs})"
        if k == 0:
            parts.append(cs)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            parts.append(mono if cs == "1" else f"{cs}*{mono}")
    if not parts:
        return "0"
    return " + ".join(parts)


class Ext:
    """Element of an ExtRing; representative of degree < deg(modulus)."""

    __slots__ = ("ring", "rep")

    def __init__(self, ring: ExtRing, rep: Poly):
        self.ring = ring
        self.rep = rep

    def _coerce(self, other):
        if isinstance(other, Ext):
            if other.ring is not self.ring:
                raise ValueError("mixed extension rings")
            return other
        if isinstance(other, HRat):
            return Ext(self.ring, Poly([other]))
        if isinstance(other, (int, Fraction, QI)):
            return Ext(self.ring, Poly([HRat.from_scalar(other)]))
        if isinstance(other, Poly):
            return Ext(self.ring, Poly([HRat.from_hpoly(other)]))
        return None

    def is_zero(self) -> bool:
        return self.rep.is_zero()

    def __bool__(self):
        return bool(self.rep)

    def one_like(self) -> "Ext":
        return self.ring.from_hrat(HRAT_ONE)

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Ext(self.ring, self.rep + other.rep)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Ext(self.ring, self.rep - other.rep)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self):
        return Ext(self.ring, -self.rep)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Ext(self.ring, (self.rep * other.rep) % self.ring.modulus)

    __rmul__ = __mul__

    def inverse(self) -> "Ext":
        if self.rep.is_zero():
            raise ZeroDivisionError("inverse of zero extension element")
        g, s, _ = poly_xgcd(self.rep, self.ring.modulus)
        if g.degree() > 0:
            raise SplitRequired(g)
        return Ext(self.ring, (s / g.constant()) % self.ring.modulus)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.rep == other.rep

    def __hash__(self):
        return hash((id(self.ring), self.rep))

    # -- introspection ------------------------------------------------------

    def hrat_coeffs(self) -> list[HRat]:
        return list(self.rep.coeffs)

    def is_h_free(self) -> bool:
        return all(c.is_h_free() for c in self.rep.coeffs)

    def is_polynomial_in_h(self) -> bool:
        return all(c.is_polynomial() for c in self.rep.coeffs)

    def h_degree(self) -> int | None:
        """Max degree in h over components when polynomial, else None."""
        if self.rep.is_zero():
            return 0
        degs = [c.h_degree() for c in self.rep.coeffs]
        if any(d is None for d in degs):
            return None
        return max(degs)

    def eval_complex(self, c_value: complex, h: complex) -> complex:
        acc = 0j
        for coeff in reversed(self.rep.coeffs):
            acc = acc * c_value + coeff.eval_complex(h)
        return acc

    def __repr__(self):
        return f"Ext({self})"

    def __str__(self):
        return format_hpoly_poly(self.rep)


def lift(value, ring: ExtRing | None):
    """Embed an HRat (or scalar) into ring when present, else return HRat."""
    if ring is None:
        if isinstance(value, HRat):
            return value
        if isinstance(value, Poly):
            return HRat.from_hpoly(value)
        return HRat.from_scalar(value)
    if isinstance(value, Ext):
        return value
    if isinstance(value, HRat):
        return ring.from_hrat(value)
    if isinstance(value, Poly):
        return ring.from_hrat(HRat.from_hpoly(value))
    return ring.from_hrat(HRat.from_scalar(value))


def elem_is_h_free(value) -> bool:
    if isinstance(value, Ext):
        return value.is_h_free()
    return value.is_h_free()


def elem_h_degree(value) -> int | None:
    if isinstance(value, Ext):
        return value.h_degree()
    return value.h_degree()


def elem_is_polynomial_in_h(value) -> bool:
    if isinstance(value, Ext):
        return value.is_polynomial_in_h()
    return value.is_polynomial()
