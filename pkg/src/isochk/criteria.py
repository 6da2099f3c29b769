"""Verdict layer: Morse normalization, exact necessary conditions for
isochronicity, singularity census, and the combined analysis report.

Exact criteria can only refute isochronicity; a passing exact check is
strictly inconclusive.  A numeric "isochronous" verdict never overrides a
failing exact criterion: such a disagreement is reported as a
contradiction flag (it indicates a numeric tolerance problem, not a
mathematical one).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .bipoly import BiPoly, bipoly_resultant
from .flow import (FlowError, FlowOptions, PeriodSample, VERDICT_ISO,
                   VERDICT_NONISO, VERDICT_INCONCLUSIVE, default_h_samples,
                   escape_analysis, period, sample_periods)
from .hfield import format_hpoly
from .infinity import (BranchDynamics, Chart, InfinityAnalysisError,
                       InfinityPoint, PuiseuxBranch, branch_dynamics,
                       chart_at, infinity_points, puiseux_branches)
from .poly import Poly, poly_gcd
from .qi import QI, qi_sqrt
from .roots import aberth_roots, exact_qi_roots
from .textio import format_poly


class NormalizationError(ValueError):
    pass


class CensusError(ValueError):
    pass


# --------------------------------------------------------------------------
# Morse normalization
# --------------------------------------------------------------------------

@dataclass
class MorseForm:
    original: BiPoly
    normalized: BiPoly                       # quadratic part exactly (x^2+y^2)/2
    change: tuple[QI, QI, QI, QI]            # x = a*u + b*v, y = c*u + d*v, det 1
    scale: QI                                # normalized = (original o change)/scale


def normalize(H: BiPoly) -> MorseForm:
    """Determinant-1 change plus level rescale to the Morse normal form.

    The quadratic part becomes exactly (x^2 + y^2)/2.  Rejects inputs whose
    normalization needs entries outside Q(i).
    """
    if H.coeff(0, 0):
        raise NormalizationError("nonzero constant term at the origin")
    if H.coeff(1, 0) or H.coeff(0, 1):
        raise NormalizationError("nonzero linear part at the origin")
    a = H.coeff(2, 0)
    b = H.coeff(1, 1)
    c = H.coeff(0, 2)
    det_hess = QI(4) * a * c - b * b
    if not det_hess:
        raise NormalizationError("not a Morse point (degenerate Hessian)")
    d = qi_sqrt(det_hess)
    if d is None:
        raise NormalizationError(
            "normalization requires irrational entries (det Hess is not a "
            "square in Q(i))")
    if d.re < 0 or (not d.re and d.im < 0):
        d = -d
    half = QI(Fraction(1, 2))
    if b == QI(0) and a == c and a == d * half:
        change = (QI(1), QI(0), QI(0), QI(1))
        normalized = H * (QI(1) / d)
        return MorseForm(original=H, normalized=normalized, change=change,
                         scale=d)
    swapped = False
    work = H
    if not a:
        if not c:
            raise NormalizationError(
                "normalization requires irrational entries (pure xy form)")
        # rotate (x,y) -> (y,-x) to make the x^2 coefficient nonzero
        work = H.compose_linear(QI(0), QI(1), QI(-1), QI(0))
        swapped = True
        a = work.coeff(2, 0)
        b = work.coeff(1, 1)
        c = work.coeff(0, 2)
    t2 = d / (QI(2) * a)
    t = qi_sqrt(t2)
    if t is None:
        raise NormalizationError(
            "normalization requires irrational entries (scaling is not a "
            "square in Q(i))")
    shear = b / (QI(2) * a)
    # x = t*u - (shear/t)*v, y = v/t; det = 1
    m = (t, -shear / t, QI(0), QI(1) / t)
    if swapped:
        # compose with the pre-rotation: original (x,y) = (y1, -x1)
        m = (m[2], m[3], -m[0], -m[1])
    normalized = H.compose_linear(*m) * (QI(1) / d)
    q20, q11, q02 = normalized.coeff(2, 0), normalized.coeff(1, 1), normalized.coeff(0, 2)
    if q11 or q20 != half or q02 != half:
        raise NormalizationError("internal: normal form not reached")
    return MorseForm(original=H, normalized=normalized, change=m, scale=d)


def period_original(form: MorseForm, h: complex,
                    opts: FlowOptions = FlowOptions()) -> PeriodSample:
    """Period of the original system at original level h.

    Computed on the normalized system at level h/scale and mapped back
    through the time rescale."""
    d = complex(form.scale)
    sample = period(form.normalized, h / d, opts)
    return PeriodSample(h=h, T=sample.T / d, drift=sample.drift * abs(d),
                        steps=sample.steps)


# --------------------------------------------------------------------------
# Theorem-style exact checks
# --------------------------------------------------------------------------

@dataclass
class Theorem2Result:
    status: str                 # fails | passes
    max_multiplicity: int
    bound: Fraction             # (n+1)/2
    degree: int                 # n + 1


def theorem2_check(H: BiPoly) -> Theorem2Result:
    """Necessary condition: the top form needs a factor of multiplicity
    at least (deg H)/2; failing it refutes isochronicity outright."""
    n1 = H.total_degree()
    if n1 < 2:
        raise ValueError("degree must be at least 2")
    points = infinity_points(H)
    max_mult = max(p.multiplicity for p in points)
    bound = Fraction(n1, 2)
    status = "fails" if 2 * max_mult < n1 else "passes"
    return Theorem2Result(status=status, max_multiplicity=max_mult,
                          bound=bound, degree=n1)


@dataclass
class PointAnalysis:
    point: InfinityPoint
    chart: Optional[Chart] = None
    branches: list = field(default_factory=list)   # (PuiseuxBranch, BranchDynamics)
    error: Optional[str] = None


def analyze_infinity(H: BiPoly, order: int = 16, max_order: int = 64
                     ) -> list[PointAnalysis]:
    """Charts, Puiseux branches and branch dynamics at every infinity point.

    Per-point failures (inexact directions, degenerate edges) are captured
    in the result rather than raised; the truncation order is doubled up to
    max_order when a leading term cannot be resolved.
    """
    points = infinity_points(H)
    dirs = [p.direction for p in points]
    out = []
    for idx, pt in enumerate(points):
        others = [d for j, d in enumerate(dirs) if j != idx]
        record = PointAnalysis(point=pt)
        try:
            record.chart = chart_at(H, pt, others)
            current = order
            while True:
                try:
                    branches = puiseux_branches(record.chart, pt.multiplicity,
                                                order=current)
                    pairs = []
                    for b in branches:
                        dyn = branch_dynamics(record.chart, b)
                        pairs.append((b, dyn))
                    record.branches = pairs
                    pt.branches = [b for b, _ in pairs]
                    break
                except InfinityAnalysisError as exc:
                    if "truncation insufficient" in str(exc) and current < max_order:
                        current = min(2 * current, max_order)
                        continue
                    raise
        except (InfinityAnalysisError, ValueError) as exc:
            record.error = str(exc)
        out.append(record)
    return out


@dataclass
class LinearityResult:
    status: str                              # violated | satisfied | partial
    witness: Optional[dict] = None           # point/branch/coefficient index
    details: list = field(default_factory=list)


def linearity_check(analyses: list[PointAnalysis],
                    accessible: Optional[set[int]] = None) -> LinearityResult:
    """Exact light-cone of the level-linearity diagnostic.

    A branch fails when its leading dynamics coefficient depends on h or a
    coefficient below the structural first-entry order does; failures on
    points not reached by the escape experiment are reported but are not
    disqualifying.
    """
    any_partial = False
    witness = None
    details = []
    for idx, record in enumerate(analyses):
        if record.error is not None:
            any_partial = True
            details.append({"point": idx, "error": record.error})
            continue
        for bidx, (branch, dyn) in enumerate(record.branches):
            ok = dyn.linearity_ok
            detail = {"point": idx, "branch": bidx, "ok": ok,
                      "lambda_h_free": dyn.lam_h_free,
                      "window": dyn.window,
                      "first_h_dep_index": dyn.first_h_dep_index,
                      "all_coeffs_linear": dyn.coeff_linear_in_h,
                      "dsdt_all_h_free": dyn.h_independent}
            details.append(detail)
            if not ok:
                point_accessible = accessible is None or idx in accessible
                detail["accessible"] = idx in accessible if accessible is not None else None
                if point_accessible and witness is None:
                    index = dyn.window if dyn.first_h_dep_index is None \
                        else dyn.first_h_dep_index
                    witness = {"point": idx, "branch": bidx,
                               "coefficient_index": index}
    if witness is not None:
        return LinearityResult(status="violated", witness=witness,
                               details=details)
    if any_partial:
        return LinearityResult(status="partial", details=details)
    return LinearityResult(status="satisfied", details=details)


@dataclass
class KCheckResult:
    status: str                              # violation_witness | consistent | skipped
    witness: Optional[dict] = None


def k_one_check(analyses: list[PointAnalysis], escapes) -> KCheckResult:
    """Every infinity point reached by the rotated flow as t -> +-infinity
    must host a branch with k = 1; finite-time arrivals are exempt."""
    if not escapes:
        return KCheckResult(status="skipped")
    reached = {r.matched_point for r in escapes
               if r.outcome == "escaped" and r.matched_point is not None}
    if not reached:
        return KCheckResult(status="skipped")
    for idx in sorted(reached):
        if idx >= len(analyses):
            continue
        record = analyses[idx]
        if record.error is not None:
            continue
        ks = [dyn.k for _, dyn in record.branches]
        if ks and all(k != 1 for k in ks):
            return KCheckResult(status="violation_witness",
                                witness={"point": idx, "k_values": ks})
    return KCheckResult(status="consistent")


# --------------------------------------------------------------------------
# singularity census
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SingularPoint:
    x: complex
    y: complex
    exact: bool
    h_value: Optional[str]                    # exact H value when rational
    h_numeric: complex
    on_critical_level: bool


def singular_points_on_critical_level(H: BiPoly, tol: float = 1e-8
                                      ) -> list[SingularPoint]:
    """All singularities of the level foliation, flagged by H = 0.

    Exact where the coordinates are Gaussian rational, numeric (with
    residual bounds) otherwise.  Raises CensusError when the critical set
    is not finite."""
    hx = H.partial_derivative("x")
    hy = H.partial_derivative("y")
    if hx.is_zero() and hy.is_zero():
        raise CensusError("critical set not finite (constant Hamiltonian)")
    if hx.is_zero() or hy.is_zero():
        lone = hy if hx.is_zero() else hx
        if lone.degree_in("x") > 0 and lone.degree_in("y") > 0:
            raise CensusError("critical set not finite")
        # single-variable gradient: finite zero set only if the other
        # gradient is a nonzero constant, which is excluded above
        raise CensusError("critical set not finite")
    res_x = bipoly_resultant(hx, hy, "y")
    if res_x.is_zero():
        raise CensusError("critical set not finite")
    points: list[SingularPoint] = []
    if res_x.degree() > 0:
        exact_roots, remainders = exact_qi_roots(res_x)
        for x0, _ in exact_roots:
            points.extend(_census_fiber_exact(H, hx, hy, x0))
        for rem, _ in remainders:
            for x0 in aberth_roots([complex(c) for c in rem.coeffs]):
                points.extend(_census_fiber_numeric(H, hx, hy, x0, tol))
    points.sort(key=lambda pt: (round(pt.x.real, 9), round(pt.x.imag, 9),
                                round(pt.y.real, 9), round(pt.y.imag, 9)))
    return points


def _substitute_x(p: BiPoly, x0: QI) -> Poly:
    out: dict[int, QI] = {}
    for (i, j), coeff in p.terms.items():
        out[j] = out.get(j, QI(0)) + coeff * x0 ** i
    if not out:
        return Poly()
    return Poly([out.get(k, QI(0)) for k in range(max(out) + 1)])


def _census_fiber_exact(H, hx, hy, x0: QI):
    fx = _substitute_x(hx, x0)
    fy = _substitute_x(hy, x0)
    if fx.is_zero() and fy.is_zero():
        raise CensusError("critical set not finite")
    base = fy if fx.is_zero() else fx if fy.is_zero() else poly_gcd(fx, fy)
    out = []
    if base.degree() <= 0:
        return out
    exact_roots, remainders = exact_qi_roots(base)
    for y0, _ in exact_roots:
        if hx.eval_exact(x0, y0) or hy.eval_exact(x0, y0):
            continue
        value = H.eval_exact(x0, y0)
        out.append(SingularPoint(x=complex(x0), y=complex(y0), exact=True,
                                 h_value=str(value),
                                 h_numeric=complex(value),
                                 on_critical_level=value.is_zero()))
    for rem, _ in remainders:
        for y0 in aberth_roots([complex(c) for c in rem.coeffs]):
            out.extend(_census_point_numeric(H, hx, hy, complex(x0), y0, 1e-8))
    return out


def _census_fiber_numeric(H, hx, hy, x0: complex, tol: float):
    fx = [complex(c.eval_complex(x0)) for c in hx.as_poly_in("y").coeffs]
    while fx and abs(fx[-1]) < 1e-250:
        fx.pop()
    candidates = aberth_roots(fx) if len(fx) > 1 else []
    out = []
    for y0 in candidates:
        out.extend(_census_point_numeric(H, hx, hy, x0, y0, tol))
    return out


def _census_point_numeric(H, hx, hy, x0: complex, y0: complex, tol: float):
    scale = 1.0 + H.one_norm()
    if abs(hx.eval_complex(x0, y0)) > tol * scale:
        return []
    if abs(hy.eval_complex(x0, y0)) > tol * scale:
        return []
    value = H.eval_complex(x0, y0)
    return [SingularPoint(x=x0, y=y0, exact=False, h_value=None,
                          h_numeric=value,
                          on_critical_level=abs(value) < tol * scale)]


# --------------------------------------------------------------------------
# parity flag
# --------------------------------------------------------------------------

def jv_flag(H: BiPoly) -> str:
    """Purely syntactic: real coefficients and even system degree n.

    "applies" only marks the conjectural non-isochronicity class; it is
    never a verdict by itself."""
    n = H.total_degree() - 1
    if H.has_real_coefficients() and n >= 2 and n % 2 == 0:
        return "applies"
    return "not_applicable"
