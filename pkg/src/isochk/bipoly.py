"""Bivariate polynomials over the Gaussian rationals.

Terms are stored sparsely as ``{(deg_x, deg_y): QI}`` with no zero
coefficients, so structural equality is semantic equality.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Tuple

from .poly import Poly, resultant
from .qi import QI

Exponent = Tuple[int, int]


class BiPoly:
    __slots__ = ("terms",)

    def __init__(self, terms: Dict[Exponent, QI] | Iterable = ()):
        data = dict(terms)
        self.terms = {e: c for e, c in data.items() if c}

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero() -> "BiPoly":
        return BiPoly()

    @staticmethod
    def constant(c) -> "BiPoly":
        c = c if isinstance(c, QI) else QI(c)
        return BiPoly({(0, 0): c})

    @staticmethod
    def variable(name: str) -> "BiPoly":
        if name == "x":
            return BiPoly({(1, 0): QI(1)})
        if name == "y":
            return BiPoly({(0, 1): QI(1)})
        raise ValueError(f"unknown variable {name!r}")

    @staticmethod
    def monomial(i: int, j: int, c) -> "BiPoly":
        c = c if isinstance(c, QI) else QI(c)
        return BiPoly({(i, j): c})

    # -- queries -------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(e == (0, 0) for e in self.terms)

    def total_degree(self) -> int:
        """Max i+j over stored terms; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(i + j for i, j in self.terms)

    def degree_in(self, var: str) -> int:
        if not self.terms:
            return -1
        k = 0 if var == "x" else 1
        return max(e[k] for e in self.terms)

    def coeff(self, i: int, j: int) -> QI:
        return self.terms.get((i, j), QI(0))

    def is_homogeneous(self) -> bool:
        degrees = {i + j for i, j in self.terms}
        return len(degrees) <= 1

    def has_real_coefficients(self) -> bool:
        return all(c.is_real() for c in self.terms.values())

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, BiPoly):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        from .textio import format_poly
        return f"BiPoly[{format_poly(self)}]"

    # -- ring operations --------------------------------------------------------

    def __add__(self, other: "BiPoly") -> "BiPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, QI(0)) + c
        return BiPoly(out)

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, QI(0)) - c
        return BiPoly(out)

    def __neg__(self) -> "BiPoly":
        return BiPoly({e: -c for e, c in self.terms.items()})

    def __mul__(self, other) -> "BiPoly":
        if isinstance(other, (QI, int, Fraction)):
            other = other if isinstance(other, QI) else QI(other)
            return BiPoly({e: c * other for e, c in self.terms.items()})
        out: Dict[Exponent, QI] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                e = (i1 + i2, j1 + j2)
                out[e] = out.get(e, QI(0)) + c1 * c2
        return BiPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BiPoly":
        if n < 0:
            raise ValueError("negative power")
        out = BiPoly.constant(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def partial_derivative(self, var: str) -> "BiPoly":
        out: Dict[Exponent, QI] = {}
        for (i, j), c in self.terms.items():
            if var == "x" and i > 0:
                out[(i - 1, j)] = out.get((i - 1, j), QI(0)) + c * i
            elif var == "y" and j > 0:
                out[(i, j - 1)] = out.get((i, j - 1), QI(0)) + c * j
        return BiPoly(out)

    def homogeneous_part(self, k: int) -> "BiPoly":
        return BiPoly({e: c for e, c in self.terms.items() if e[0] + e[1] == k})

    # -- substitutions ------------------------------------------------------------

    def compose_linear(self, a: QI, b: QI, c: QI, d: QI) -> "BiPoly":
        """Substitute x -> a*x + b*y, y -> c*x + d*y."""
        new_x = BiPoly({(1, 0): a, (0, 1): b})
        new_y = BiPoly({(1, 0): c, (0, 1): d})
        xp = _power_table(new_x, self.degree_in("x"))
        yp = _power_table(new_y, self.degree_in("y"))
        out = BiPoly.zero()
        for (i, j), coeff in self.terms.items():
            out = out + xp[i] * yp[j] * coeff
        return out

    def eval_complex(self, x: complex, y: complex) -> complex:
        acc = 0j
        xp: Dict[int, complex] = {0: 1.0 + 0j}
        yp: Dict[int, complex] = {0: 1.0 + 0j}
        for (i, j), c in self.terms.items():
            if i not in xp:
                xp[i] = x ** i
            if j not in yp:
                yp[j] = y ** j
            acc += complex(c) * xp[i] * yp[j]
        return acc

    def eval_exact(self, x: QI, y: QI) -> QI:
        acc = QI(0)
        for (i, j), c in self.terms.items():
            acc = acc + c * x ** i * y ** j
        return acc

    def one_norm(self) -> float:
        return float(sum(abs(complex(c)) for c in self.terms.values())) if self.terms else 0.0

    # -- univariate views --------------------------------------------------------

    def as_poly_in(self, var: str) -> Poly:
        """View as a polynomial in ``var`` with Poly coefficients in the other.

        Coefficients are Poly-over-QI in the complementary variable, so the
        result lives in Q(i)[other][var] and feeds the subresultant cascade.
        """
        main = 0 if var == "x" else 1
        other = 1 - main
        if not self.terms:
            return Poly()
        deg_main = max(e[main] for e in self.terms)
        buckets: list[dict[int, QI]] = [dict() for _ in range(deg_main + 1)]
        for e, c in self.terms.items():
            buckets[e[main]][e[other]] = c
        coeffs = []
        for bucket in buckets:
            if bucket:
                top = max(bucket)
                coeffs.append(Poly([bucket.get(k, QI(0)) for k in range(top + 1)]))
            else:
                coeffs.append(Poly())
        return Poly(coeffs)

    def univariate_in_y_at_x1(self) -> Poly:
        """p(1, Y) as a Poly over QI."""
        out: Dict[int, QI] = {}
        for (_, j), c in self.terms.items():
            out[j] = out.get(j, QI(0)) + c
        if not out:
            return Poly()
        return Poly([out.get(k, QI(0)) for k in range(max(out) + 1)])

    def univariate(self, var: str) -> Poly:
        """View as a univariate Poly over QI; requires the other variable absent."""
        other = 1 if var == "x" else 0
        if any(e[other] for e in self.terms):
            raise ValueError(f"polynomial is not univariate in {var}")
        main = 0 if var == "x" else 1
        if not self.terms:
            return Poly()
        top = max(e[main] for e in self.terms)
        out = [QI(0)] * (top + 1)
        for e, c in self.terms.items():
            out[e[main]] = c
        return Poly(out)


def _power_table(p: BiPoly, top: int) -> list:
    table = [BiPoly.constant(1)]
    for _ in range(max(top, 0)):
        table.append(table[-1] * p)
    return table


def bipoly_resultant(p: BiPoly, q: BiPoly, eliminate: str) -> Poly:
    """Resultant of p and q w.r.t. the eliminated variable.

    Returns a univariate Poly over QI in the kept variable.  Raises
    ValueError when both inputs are constant (nothing to eliminate).
    """
    if p.is_zero() or q.is_zero():
        raise ValueError("resultant requires nonzero polynomials")
    if p.is_constant() and q.is_constant():
        raise ValueError("no variable to eliminate")
    a = p.as_poly_in(eliminate)
    b = q.as_poly_in(eliminate)
    res = resultant(a, b)
    if isinstance(res, Poly):
        return res
    return Poly([res])
