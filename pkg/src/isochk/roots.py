"""Complex root finding for exact univariate polynomials.

Multiplicities are never inferred from numeric proximity: the input is
split by an exact squarefree decomposition first, and the Aberth-Ehrlich
simultaneous iteration runs on each (provably squarefree) factor.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction

from .poly import Poly, squarefree_decomposition
from .qi import QI


class RootFindingError(RuntimeError):
    pass


@dataclass(frozen=True)
class RootCluster:
    value: complex
    multiplicity: int
    radius: float


def _cauchy_radius(coeffs: list[complex]) -> float:
    lead = abs(coeffs[-1])
    if lead == 0:
        raise ValueError("leading coefficient is zero")
    return 1.0 + max(abs(c) for c in coeffs[:-1]) / lead if len(coeffs) > 1 else 1.0


def aberth_roots(coeffs: list[complex], tol: float = 1e-13,
                 max_rounds: int = 400) -> list[complex]:
    """All roots of a squarefree complex polynomial, simultaneous iteration.

    ``coeffs`` is indexed by degree.  Raises RootFindingError with residual
    diagnostics when the iteration fails to settle within ``max_rounds``.
    """
    degree = len(coeffs) - 1
    if degree <= 0:
        return []
    if degree == 1:
        return [-coeffs[0] / coeffs[1]]
    dcoeffs = [coeffs[k] * k for k in range(1, len(coeffs))]

    def horner(cs, z):
        acc = 0j
        for c in reversed(cs):
            acc = acc * z + c
        return acc

    radius = _cauchy_radius(coeffs)
    z = [radius * 0.7 * cmath.exp(2j * cmath.pi * (k + 0.25) / degree + 0.41j)
         for k in range(degree)]
    scale = max(abs(c) for c in coeffs)
    for _ in range(max_rounds):
        converged = True
        for k in range(degree):
            pk = horner(coeffs, z[k])
            dk = horner(dcoeffs, z[k])
            if pk == 0:
                continue
            if dk == 0:
                z[k] += 1e-6 * (1 + 1j)
                converged = False
                continue
            w = pk / dk
            s = sum(1.0 / (z[k] - z[j]) for j in range(degree) if j != k)
            denom = 1.0 - w * s
            step = w if denom == 0 else w / denom
            z[k] -= step
            if abs(step) > tol * (1.0 + abs(z[k])):
                converged = False
        if converged:
            return z
    residuals = [abs(horner(coeffs, zk)) for zk in z]
    raise RootFindingError(
        f"Aberth iteration did not converge after {max_rounds} rounds; "
        f"max residual {max(residuals):.3e}")


def roots_clustered(u: Poly, tol: float = 1e-8) -> list[RootCluster]:
    """All complex roots of a nonzero Poly over QI, with exact multiplicities.

    The squarefree decomposition is exact, so each returned multiplicity is
    the true one; only root values are floating point.
    """
    if u.is_zero():
        raise ValueError("zero polynomial has no well-defined root set")
    clusters: list[RootCluster] = []
    for factor, mult in squarefree_decomposition(u):
        coeffs = [complex(c) for c in factor.coeffs]
        for z in aberth_roots(coeffs):
            clusters.append(RootCluster(value=z, multiplicity=mult, radius=tol))
    clusters.sort(key=lambda c: (round(c.value.real, 12), round(c.value.imag, 12)))
    return clusters


def recognize_qi(z: complex, max_denominator: int = 10**6) -> QI:
    """Nearest small-denominator Gaussian rational (candidate only)."""
    return QI(Fraction(z.real).limit_denominator(max_denominator),
              Fraction(z.imag).limit_denominator(max_denominator))


def deflate_root(u: Poly, root: QI) -> Poly:
    """Exact synthetic division of u by (t - root); root must be exact."""
    if u.degree() < 1:
        raise ValueError("cannot deflate a constant polynomial")
    quotient = [u.coeffs[-1]]
    for c in reversed(u.coeffs[1:-1]):
        quotient.append(c + root * quotient[-1])
    remainder = u.coeffs[0] + root * quotient[-1]
    if remainder:
        raise ValueError("not an exact root")
    return Poly(list(reversed(quotient)))


def exact_qi_roots(u: Poly, max_denominator: int = 10**6):
    """Split off Gaussian-rational roots of u exactly.

    Returns (roots, remainders) where roots is a list of (QI value, exact
    multiplicity) and remainders a list of (squarefree Poly factor with no
    recognized Q(i) root, multiplicity).  Recognition is numeric-guided but
    sound: a candidate is accepted only when it is verified to be an exact
    root of the factor.
    """
    roots: list[tuple[QI, int]] = []
    remainders: list[tuple[Poly, int]] = []
    for factor, mult in squarefree_decomposition(u):
        current = factor
        coeffs = [complex(c) for c in factor.coeffs]
        for z in aberth_roots(coeffs):
            if current.degree() <= 0:
                break
            candidate = recognize_qi(z, max_denominator)
            if current(candidate).is_zero():
                roots.append((candidate, mult))
                current = deflate_root(current, candidate)
        if current.degree() > 0:
            remainders.append((current, mult))
    return roots, remainders
