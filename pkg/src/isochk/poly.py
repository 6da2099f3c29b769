"""Dense univariate polynomials over an exact coefficient domain.

``Poly`` is deliberately duck-typed: coefficients may be ``QI`` values,
``Poly`` values (giving Q(i)[x][y] for resultants), rational functions, or
extension-ring elements.  Field-only operations (divmod, gcd, inversion)
require coefficient division; ring-only paths (pseudo-division, the
subresultant cascade) require exact coefficient division and raise when a
division is not exact.
"""

from __future__ import annotations

from .qi import QI


class Poly:
    """Coefficient list indexed by degree; the zero polynomial is ()."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        coeffs = list(coeffs)
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        self.coeffs = tuple(coeffs)

    # -- basic queries ---------------------------------------------------

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def lc(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def constant(self):
        """Coefficient of degree 0 (zero polynomial not allowed)."""
        if not self.coeffs:
            raise ValueError("zero polynomial: use is_zero() first")
        return self.coeffs[0]

    def coeff(self, k: int):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        if self.coeffs:
            return self.coeffs[0] * 0
        return QI(0)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({list(self.coeffs)!r})"

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = out[k] + c
        return Poly(out)

    def __sub__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [None] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if not ca:
                continue
            for j, cb in enumerate(b):
                if not cb:
                    continue
                t = ca * cb
                out[i + j] = t if out[i + j] is None else out[i + j] + t
        zero = a[0] * 0
        return Poly([zero if c is None else c for c in out])

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, scalar):
        return Poly([c * scalar for c in self.coeffs])

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        if n == 0:
            base = self.coeffs[0] if self.coeffs else QI(0)
            return Poly([_one_from(base)])
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, k: int) -> "Poly":
        """Multiply by x^k."""
        if not self.coeffs or k == 0:
            return self
        zero = self.coeffs[0] * 0
        return Poly([zero] * k + list(self.coeffs))

    def diff(self) -> "Poly":
        return Poly([c * k for k, c in enumerate(self.coeffs)][1:])

    # -- evaluation ----------------------------------------------------------

    def __call__(self, x):
        """Horner evaluation; x must multiply/add with the coefficients."""
        if not self.coeffs:
            return x * 0
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def eval_complex(self, x: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * x + complex(c)
        return acc

    # -- field-coefficient division and gcds -----------------------------------

    def divmod(self, other: "Poly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = self
        d = other.degree()
        lead = other.lc()
        qc = {}
        while not r.is_zero() and r.degree() >= d:
            k = r.degree() - d
            c = r.lc() / lead
            qc[k] = qc.get(k, c * 0) + c
            r = r - (other * c).shift(k)
        if not qc:
            return Poly(), r
        zero = next(iter(qc.values())) * 0
        q = Poly([qc.get(k, zero) for k in range(max(qc) + 1)])
        return q, r

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __truediv__(self, other):
        """Exact division (polynomial or scalar); raises if not exact."""
        if isinstance(other, Poly):
            q, r = self.divmod(other)
            if not r.is_zero():
                raise ValueError("inexact polynomial division")
            return q
        return Poly([c / other for c in self.coeffs])

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self / self.lc()


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over a coefficient field."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def poly_xgcd(a: Poly, b: Poly):
    """Extended gcd over a coefficient field: (g, s, t), s*a + t*b = g monic."""
    if a.is_zero() and b.is_zero():
        return Poly(), Poly(), Poly()
    src = a if not a.is_zero() else b
    one = Poly([_one_from(src.lc())])
    zero = Poly()
    r0, r1 = a, b
    s0, s1 = one, zero
    t0, t1 = zero, one
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    lead = r0.lc()
    return r0 / lead, s0 / lead, t0 / lead


def squarefree_decomposition(p: Poly):
    """Yun's algorithm over a characteristic-zero coefficient field.

    Returns a list of (factor, multiplicity) with each factor monic and
    squarefree; the product of factor^multiplicity is p/lc(p).
    """
    if p.is_zero():
        raise ValueError("zero polynomial")
    p = p.monic()
    if p.degree() <= 0:
        return []
    d = p.diff()
    a = poly_gcd(p, d)
    if a.degree() == 0:
        return [(p, 1)]
    out = []
    b = p / a
    c = d / a
    k = 1
    while b.degree() > 0:
        w = c - b.diff()
        g = poly_gcd(b, w)
        if g.degree() > 0:
            out.append((g, k))
        b = b / g
        c = w / g
        k += 1
    return out


def _pseudo_rem(a: Poly, b: Poly) -> Poly:
    """Pseudo-remainder with lc(b)^(deg a - deg b + 1) * a = q*b + rem.

    Coefficient products go through .scale(): coefficients may themselves
    be Poly values, which plain * would treat as outer polynomials."""
    d = a.degree() - b.degree() + 1
    lead = b.lc()
    r = a
    e = 0
    while not r.is_zero() and r.degree() >= b.degree():
        k = r.degree() - b.degree()
        r = r.scale(lead) - b.scale(r.lc()).shift(k)
        e += 1
    while e < d:
        r = r.scale(lead)
        e += 1
    return r


def resultant(a: Poly, b: Poly):
    """Resultant of a and b via the subresultant PRS (Cohen Alg. 3.3.7).

    Coefficients must form an integral domain with exact division.
    """
    if a.is_zero() or b.is_zero():
        return _zero_from(a, b)
    s = 1
    A, B = a, b
    if A.degree() < B.degree():
        if (A.degree() * B.degree()) % 2 == 1:
            s = -1
        A, B = B, A
    if B.degree() == 0:
        out = _pow_coeff(B.lc(), A.degree())
        return out if s > 0 else -out
    one = _one_from(A.lc())
    g = one
    h = one
    while True:
        delta = A.degree() - B.degree()
        if (A.degree() % 2 == 1) and (B.degree() % 2 == 1):
            s = -s
        R = _pseudo_rem(A, B)
        A = B
        if R.is_zero():
            return _zero_from(a, b)
        denom = g * _pow_coeff(h, delta)
        B = Poly([_exact_div(c, denom) for c in R.coeffs])
        if B.is_zero():
            return _zero_from(a, b)
        g = A.lc()
        if delta > 0:
            h = _exact_div(_pow_coeff(g, delta), _pow_coeff(h, delta - 1))
        if B.degree() == 0:
            dA = A.degree()
            num = _pow_coeff(B.lc(), dA)
            den = _pow_coeff(h, dA - 1)
            out = _exact_div(num, den)
            return out if s > 0 else -out


def _pow_coeff(c, n: int):
    if n == 0:
        return _one_from(c)
    out = c
    for _ in range(n - 1):
        out = out * c
    return out


def _one_from(c):
    if isinstance(c, Poly):
        return Poly([QI(1)])
    if isinstance(c, QI):
        return QI(1)
    if hasattr(c, "one_like"):
        return c.one_like()
    return type(c)(1)


def _zero_from(a: Poly, b: Poly):
    src = a if not a.is_zero() else b
    if src.is_zero():
        return QI(0)
    return src.lc() * 0


def _exact_div(num, den):
    return num / den
