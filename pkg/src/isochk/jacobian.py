"""Polynomial pairs with constant Jacobian determinant.

An accepted pair (f, g) induces the Hamiltonian (f^2 + g^2)/2 whose origin
is a Morse center; the global-injectivity criterion is that the curves
f = 0 and g = 0 meet in exactly one point of C^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .bipoly import BiPoly, bipoly_resultant
from .poly import Poly, poly_gcd
from .qi import QI
from .roots import aberth_roots, exact_qi_roots


class JacobianPairError(ValueError):
    pass


@dataclass
class PolyPair:
    f: BiPoly
    g: BiPoly
    jac: QI                      # constant Jacobian determinant, nonzero


def jacobian_det(f: BiPoly, g: BiPoly):
    """Exact f_x*g_y - f_y*g_x; ("constant", c) or ("nonconstant", witness)."""
    det = (f.partial_derivative("x") * g.partial_derivative("y")
           - f.partial_derivative("y") * g.partial_derivative("x"))
    if det.is_constant():
        return "constant", det.coeff(0, 0)
    return "nonconstant", det


def make_pair(f: BiPoly, g: BiPoly) -> PolyPair:
    kind, value = jacobian_det(f, g)
    if kind != "constant":
        raise JacobianPairError("Jacobian determinant is not constant")
    if not value:
        raise JacobianPairError("Jacobian determinant vanishes identically")
    return PolyPair(f=f, g=g, jac=value)


def induced_hamiltonian(pair: PolyPair) -> BiPoly:
    """(f^2 + g^2)/2, exactly."""
    two = QI(2)
    return (pair.f * pair.f + pair.g * pair.g) * (QI(1) / two)


@dataclass(frozen=True)
class CommonZero:
    x: complex
    y: complex
    multiplicity: int
    exact: bool
    x_exact: Optional[QI] = None
    y_exact: Optional[QI] = None


def _univariate_roots_exact_first(u: Poly):
    """Roots of a Poly over QI: exact QI roots plus numeric leftovers."""
    exact, remainders = exact_qi_roots(u)
    numeric = []
    for rem, mult in remainders:
        for z in aberth_roots([complex(c) for c in rem.coeffs]):
            numeric.append((z, mult))
    return exact, numeric


def common_zeros(f: BiPoly, g: BiPoly, tol: float = 1e-8):
    """Common zeros of f and g on C^2 with resultant multiplicities.

    Returns (zeros, ambiguous) where ambiguous reports numeric matches too
    close to separate at the tolerance.
    """
    if f.is_zero() or g.is_zero():
        raise JacobianPairError("common zeros of a zero polynomial")
    if f.degree_in("y") < 0 or g.degree_in("y") < 0:
        raise JacobianPairError("empty polynomials")
    res_x = bipoly_resultant(f, g, "y")       # polynomial in x
    if res_x.is_zero():
        raise JacobianPairError("common component")
    zeros: list[CommonZero] = []
    ambiguous = False
    if res_x.degree() <= 0:
        return zeros, ambiguous
    exact, numeric = _univariate_roots_exact_first(res_x)
    for x0, mult in exact:
        fy = _substitute_x(f, x0)
        gy = _substitute_x(g, x0)
        common = _common_y_roots_exact(fy, gy)
        for y0, y_exact, is_exact in common:
            if is_exact:
                zeros.append(CommonZero(x=complex(x0), y=complex(y0),
                                        multiplicity=mult, exact=True,
                                        x_exact=x0, y_exact=y_exact))
            else:
                zeros.append(CommonZero(x=complex(x0), y=y0,
                                        multiplicity=mult, exact=False,
                                        x_exact=x0))
    fc = compile_eval(f)
    gc = compile_eval(g)
    scale = 1.0 + f.one_norm() + g.one_norm()
    for x0, mult in numeric:
        fy = [complex(c.eval_complex(x0)) for c in _coeffs_in_y(f)]
        gy = [complex(c.eval_complex(x0)) for c in _coeffs_in_y(g)]
        fy_roots = aberth_roots(_trim(fy)) if _trim(fy) and len(_trim(fy)) > 1 else []
        candidates = fy_roots if fy_roots else (
            aberth_roots(_trim(gy)) if _trim(gy) and len(_trim(gy)) > 1 else [])
        for y0 in candidates:
            if abs(fc(x0, y0)) < tol * scale and abs(gc(x0, y0)) < tol * scale:
                zeros.append(CommonZero(x=x0, y=y0, multiplicity=mult,
                                        exact=False))
    # deduplicate numerically identical points; flag near-collisions
    zeros.sort(key=lambda z: (round(z.x.real, 9), round(z.x.imag, 9),
                              round(z.y.real, 9), round(z.y.imag, 9)))
    deduped: list[CommonZero] = []
    for z in zeros:
        if deduped:
            prev = deduped[-1]
            gap = abs(prev.x - z.x) + abs(prev.y - z.y)
            if gap < tol:
                deduped[-1] = CommonZero(x=prev.x, y=prev.y,
                                         multiplicity=prev.multiplicity
                                         + z.multiplicity,
                                         exact=prev.exact and z.exact,
                                         x_exact=prev.x_exact,
                                         y_exact=prev.y_exact)
                continue
            if gap < 1e-5 and not (prev.exact and z.exact):
                ambiguous = True
        deduped.append(z)
    return deduped, ambiguous


def _coeffs_in_y(p: BiPoly):
    return p.as_poly_in("y").coeffs


def _trim(coeffs):
    out = list(coeffs)
    while out and abs(out[-1]) < 1e-300:
        out.pop()
    return out


def _substitute_x(p: BiPoly, x0: QI) -> Poly:
    """p(x0, y) as a Poly over QI."""
    out: dict[int, QI] = {}
    for (i, j), c in p.terms.items():
        out[j] = out.get(j, QI(0)) + c * x0 ** i
    if not out:
        return Poly()
    return Poly([out.get(k, QI(0)) for k in range(max(out) + 1)])


def _common_y_roots_exact(fy: Poly, gy: Poly):
    """Common roots of two univariate polynomials over QI at one fiber."""
    if fy.is_zero() and gy.is_zero():
        raise JacobianPairError("common component")
    if fy.is_zero():
        base = gy
    elif gy.is_zero():
        base = fy
    else:
        base = poly_gcd(fy, gy)
    out = []
    if base.degree() <= 0:
        return out
    exact, remainders = exact_qi_roots(base)
    for y0, _ in exact:
        out.append((y0, y0, True))
    for rem, _ in remainders:
        for z in aberth_roots([complex(c) for c in rem.coeffs]):
            out.append((z, None, False))
    return out


def compile_eval(p: BiPoly):
    terms = [(i, j, complex(c)) for (i, j), c in p.terms.items()]

    def evaluate(x: complex, y: complex) -> complex:
        acc = 0j
        for i, j, c in terms:
            acc += c * x**i * y**j
        return acc

    return evaluate


def corollary_verdict(pair: PolyPair, tol: float = 1e-8):
    """Single-intersection criterion for an accepted pair.

    Returns (status, zeros) with status in criterion_met /
    criterion_violated / undetermined.
    """
    zeros, ambiguous = common_zeros(pair.f, pair.g, tol)
    distinct = len(zeros)
    bezout = max(pair.f.total_degree(), 0) * max(pair.g.total_degree(), 0)
    if bezout and sum(z.multiplicity for z in zeros) > bezout:
        ambiguous = True
    if ambiguous:
        return "undetermined", zeros
    if distinct == 1:
        return "criterion_met", zeros
    return "criterion_violated", zeros
