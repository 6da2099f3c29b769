"""Analysis at the points at infinity of a level curve H(x,y) = h.

Pipeline per point: factor the top-degree form to get projective
directions and multiplicities; move the point to [1:0:0] by an exact
determinant-1 linear chart; form the localized curve equation (whose
coefficients are degree <= 1 in the symbolic level h); run Newton-polygon
/ Newton-Puiseux expansion with exact coefficients in Q(i)(h) (extended by
an algebraic leading coefficient when needed); read off the induced 1-D
time dynamics ds/dt = lambda*s^k + ..., its four-class label, and the
order of the period 1-form along each branch.

Chart convention: the new y-axis is the vanishing linear factor of the
point; the new x-axis is aligned with another infinity direction when one
exists (for a unique direction, a fixed determinant-1 complement).  The
leading pair (lambda, k) and all pole orders are invariant under the
allowed chart freedom; the argument of lambda is convention-dependent and
is reported together with the chart matrix.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .bipoly import BiPoly
from .hfield import (HRAT_ONE, HRAT_ZERO, Ext, ExtRing, HRat, SplitRequired,
                     elem_h_degree, elem_is_h_free, elem_is_polynomial_in_h,
                     format_hpoly_poly, hpoly)
from .poly import Poly, poly_gcd, squarefree_decomposition
from .qi import QI
from .roots import aberth_roots, exact_qi_roots

KElem = Union[HRat, Ext]


class InfinityAnalysisError(ValueError):
    pass


# --------------------------------------------------------------------------
# directions and infinity points
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Direction:
    """Projective direction [beta : alpha : 0]; the linear factor is
    alpha*x - beta*y.  Exact directions carry QI coordinates, numeric
    fallbacks carry complex ones."""
    beta: object
    alpha: object
    exact: bool

    def as_complex(self) -> tuple[complex, complex]:
        return complex(self.beta), complex(self.alpha)

    def key(self) -> tuple:
        b, a = self.as_complex()
        return (round(b.real, 12), round(b.imag, 12),
                round(a.real, 12), round(a.imag, 12))

    def label(self) -> str:
        if self.exact:
            return f"[{self.beta}:{self.alpha}]"
        b, a = self.as_complex()
        return f"[{b:.6g}:{a:.6g}]"


def _normalize_exact(beta: QI, alpha: QI) -> tuple[QI, QI]:
    if beta:
        return QI(1), alpha / beta
    return QI(0), QI(1)


def _normalize_numeric(beta: complex, alpha: complex) -> tuple[complex, complex]:
    if abs(beta) >= abs(alpha):
        return 1.0 + 0j, alpha / beta
    return beta / alpha, 1.0 + 0j


def factor_homogeneous(p: BiPoly):
    """Linear factors of a homogeneous BiPoly.

    Returns (factors, scalar) with factors a list of (Direction, n_i) and
    scalar the exact leading constant; directions with coordinates outside
    Q(i) come back as numeric clusters flagged exact=False.
    """
    if p.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    if not p.is_homogeneous():
        raise ValueError("polynomial is not homogeneous")
    d = p.total_degree()
    u = p.univariate_in_y_at_x1()
    factors: list[tuple[Direction, int]] = []
    m_x = d - max(u.degree(), 0)
    if m_x > 0:
        # leftover x^m factor; its direction is the y-axis point [0:1:0]
        factors.append((Direction(QI(0), QI(1), True), m_x))
    total = m_x
    scalar = u.lc() if not u.is_zero() else QI(1)
    if u.degree() > 0:
        exact, remainders = exact_qi_roots(u)
        for root, mult in exact:
            beta, alpha = _normalize_exact(QI(1), root)
            factors.append((Direction(beta, alpha, True), mult))
            total += mult
            if mult % 2 == 1:
                scalar = -scalar
        for rem, mult in remainders:
            coeffs = [complex(c) for c in rem.coeffs]
            for z in aberth_roots(coeffs):
                beta, alpha = _normalize_numeric(1.0 + 0j, z)
                factors.append((Direction(beta, alpha, False), mult))
                total += mult
                if mult % 2 == 1:
                    scalar = -scalar
    if total != d:
        raise InfinityAnalysisError("factor multiplicities do not sum to the degree")
    factors.sort(key=lambda fa: fa[0].key())
    return factors, scalar


@dataclass
class InfinityPoint:
    direction: Direction
    multiplicity: int
    chart: Optional[tuple[QI, QI, QI, QI]] = None   # rows (a,b),(c,d), det 1
    branches: list = field(default_factory=list)

    def label(self) -> str:
        return self.direction.label()


def infinity_points(H: BiPoly) -> list[InfinityPoint]:
    """Directions and multiplicities of the top-degree part of H."""
    if H.is_zero() or H.is_constant():
        raise ValueError("Hamiltonian must be nonconstant")
    top = H.homogeneous_part(H.total_degree())
    factors, _ = factor_homogeneous(top)
    return [InfinityPoint(direction=d, multiplicity=m) for d, m in factors]


# --------------------------------------------------------------------------
# chart at a point at infinity
# --------------------------------------------------------------------------

@dataclass
class Chart:
    matrix: tuple[QI, QI, QI, QI]      # x1 = a*x + b*y, y1 = c*x + d*y
    transformed: BiPoly                # H in chart coordinates
    localized: dict                    # {(k, l): Poly in h over QI}
    degree: int                        # n + 1
    _hrat_cache: Optional[dict] = None

    def localized_hrat(self) -> dict:
        if self._hrat_cache is None:
            self._hrat_cache = {key: HRat.from_hpoly(value)
                                for key, value in self.localized.items()}
        return self._hrat_cache


def chart_matrix(point: Direction, others: list[Direction]) -> tuple[QI, QI, QI, QI]:
    """Determinant-1 map sending the point's direction to the x-axis."""
    if not point.exact:
        raise InfinityAnalysisError(
            "exact chart unavailable: direction does not split over Q(i)")
    alpha, beta = point.alpha, point.beta
    c, d = alpha, -beta
    exact_others = [o for o in others if o.exact]
    if exact_others:
        o = exact_others[0]
        det = alpha * o.beta - o.alpha * beta
        a = o.alpha / det
        b = -o.beta / det
    elif beta:
        a, b = QI(-1) / beta, QI(0)
    else:
        a, b = QI(0), QI(-1) / alpha
    assert a * d - b * c == QI(1)
    return (a, b, c, d)


def chart_at(H: BiPoly, point: InfinityPoint, others: list[Direction]) -> Chart:
    """Localize the level-curve equation at the given infinity point.

    The output polynomial F(X,Y) has coefficients polynomial of degree <= 1
    in the symbolic level h; the branch of interest passes through (0,0).
    """
    n1 = H.total_degree()
    a, b, c, d = chart_matrix(point.direction, others)
    # H-tilde(x1,y1) = H(inverse map); inverse of det-1 [[a,b],[c,d]] is [[d,-b],[-c,a]]
    transformed = H.compose_linear(d, -b, -c, a)
    localized: dict[tuple[int, int], Poly] = {}
    for (i, j), coeff in transformed.terms.items():
        k = n1 - i - j
        key = (k, j)
        cur = localized.get(key)
        localized[key] = hpoly(coeff) if cur is None else cur + hpoly(coeff)
    key = (n1, 0)
    minus_h = hpoly(0, -1)
    localized[key] = localized.get(key, Poly()) + minus_h
    localized = {k: v for k, v in localized.items() if not v.is_zero()}
    mult_check = min(l for (k, l) in localized if k == 0)
    if mult_check != point.multiplicity:
        raise InfinityAnalysisError("chart does not place the point at Y=0 "
                                    "with the expected multiplicity")
    return Chart(matrix=(a, b, c, d), transformed=transformed,
                 localized=localized, degree=n1)


# --------------------------------------------------------------------------
# Newton polygon
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PolygonEdge:
    start: tuple[int, int]     # (k, l) with larger l
    end: tuple[int, int]
    p: int                     # primitive inward normal (p, q), both positive
    q: int
    level: int                 # N = p*k + q*l along the edge


@dataclass
class NewtonPolygon:
    support: list[tuple[int, int]]
    vertices: list[tuple[int, int]]    # ordered l descending
    edges: list[PolygonEdge]


def newton_polygon(support_points) -> NewtonPolygon:
    """Lower-left Newton polygon of a support set.

    Vertices are the extreme points of the convex hull of
    support + (R_{>=0})^2, ordered with l descending; edges carry their
    primitive inward normals (p, q) with p, q > 0.
    """
    pts = sorted(set(support_points))
    if not pts:
        raise InfinityAnalysisError("empty support")
    # staircase of minimal points: least l for each k, dominated ones dropped
    least_l: dict[int, int] = {}
    for k, l in pts:
        if k not in least_l or l < least_l[k]:
            least_l[k] = l
    stair = []
    for k in sorted(least_l):
        l = least_l[k]
        if stair and stair[-1][1] <= l:
            continue
        stair.append((k, l))
    # lower convex chain: slopes must strictly increase along the walk
    chain: list[tuple[int, int]] = []
    for pt in stair:
        while len(chain) >= 2:
            a, b = chain[-2], chain[-1]
            if (b[1] - a[1]) * (pt[0] - b[0]) >= (pt[1] - b[1]) * (b[0] - a[0]):
                chain.pop()
            else:
                break
        chain.append(pt)
    vertices = sorted(chain, key=lambda pt: (-pt[1], pt[0]))
    edges = []
    for (k1, l1), (k2, l2) in zip(vertices, vertices[1:]):
        dk = k2 - k1
        dl = l1 - l2
        if dk <= 0 or dl <= 0:
            continue
        g = math.gcd(dk, dl)
        p, q = dl // g, dk // g
        edges.append(PolygonEdge(start=(k1, l1), end=(k2, l2), p=p, q=q,
                                 level=p * k1 + q * l1))
    return NewtonPolygon(support=pts, vertices=vertices, edges=edges)


def polygon_of_chart(chart_poly: dict) -> NewtonPolygon:
    if (0, 0) in chart_poly and not chart_poly[(0, 0)].is_zero():
        raise InfinityAnalysisError("hypothesis failed: F(0,0) != 0")
    if not any(k == 0 for (k, l) in chart_poly):
        raise InfinityAnalysisError("hypothesis failed: F(0,Y) is identically 0")
    return newton_polygon(chart_poly.keys())


def newton_principal(chart_poly: dict, edge: PolygonEdge) -> Poly:
    """Edge polynomial g(1, Y): terms of F supported on the edge line."""
    out: dict[int, HRat] = {}
    for (k, l), coeff in chart_poly.items():
        if edge.p * k + edge.q * l == edge.level:
            cur = out.get(l, HRAT_ZERO)
            out[l] = cur + HRat.from_hpoly(coeff)
    top = max(out)
    return Poly([out.get(l, HRAT_ZERO) for l in range(top + 1)])


# --------------------------------------------------------------------------
# truncated series helpers (dict exponent -> coefficient, exact domain)
# --------------------------------------------------------------------------

def _ser_mul(a: dict, b: dict, cutoff: int) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            if e > cutoff:
                continue
            t = ca * cb
            if e in out:
                out[e] = out[e] + t
            else:
                out[e] = t
    return {e: c for e, c in out.items() if c}


def _ser_pow_list(base: dict, top: int, cutoff: int, one) -> list[dict]:
    powers = [{0: one}]
    for _ in range(top):
        powers.append(_ser_mul(powers[-1], base, cutoff))
    return powers


# --------------------------------------------------------------------------
# Newton-Puiseux expansion over Q(i)(h) with dynamic extensions
# --------------------------------------------------------------------------

MAX_RECURSION_DEPTH = 32


@dataclass
class RawBranch:
    """One conjugacy bundle of Puiseux series in the final parameter s.

    The bundle covers ``series_count`` conjugate series at once; when the
    leading coefficients are algebraic over Q(i)(h) the shared quotient
    ring is ``ring`` (dynamic evaluation, modulus not necessarily
    irreducible).
    """
    p: int
    q: int
    series: dict              # exponent -> coeff, Y(s) = sum c_e s^e
    ring: Optional[ExtRing]
    series_count: int
    edge: PolygonEdge
    order: int                # series computed through exponent q + order

    def rho_coeff(self, i: int):
        value = self.series.get(self.q + i)
        if value is not None:
            return value
        zero = HRAT_ZERO if self.ring is None else self.ring.from_hrat(HRAT_ZERO)
        return zero

    def leading(self):
        return self.series[self.q]


def _edge_polynomial_psi(fdict: dict, edge: PolygonEdge, lift_coeff):
    """psi(c) = sum of edge coefficients times c^(l - l_min)."""
    b_min = min(l for (k, l) in fdict
                if edge.p * k + edge.q * l == edge.level)
    out: dict[int, object] = {}
    for (k, l), coeff in fdict.items():
        if edge.p * k + edge.q * l == edge.level:
            e = l - b_min
            cur = out.get(e)
            lifted = lift_coeff(coeff)
            out[e] = lifted if cur is None else cur + lifted
    top = max(out)
    zero = lift_coeff(None)
    return Poly([out.get(e, zero) for e in range(top + 1)])


def _solve_simple(fdict: dict, edge: PolygonEdge, c0, one, order: int):
    """Series rho = c0 + c1 s + ... for a simple edge root, coefficients in
    the domain of c0.  The Y-series is s^q * rho(s)."""
    p, q, level = edge.p, edge.q, edge.level
    # linearization: derivative of the edge part at the leading coefficient
    lin = None
    pow_cache: dict[int, object] = {}

    def c0_pow(n: int):
        if n not in pow_cache:
            if n == 0:
                pow_cache[n] = one
            else:
                pow_cache[n] = c0_pow(n - 1) * c0
        return pow_cache[n]

    for (k, l), coeff in fdict.items():
        if p * k + q * l == level and l >= 1:
            term = coeff * l * c0_pow(l - 1)
            lin = term if lin is None else lin + term
    if lin is None or not lin:
        raise InfinityAnalysisError("degenerate edge: vanishing linearization")
    max_b = max(l for (_, l) in fdict)
    rho = {0: c0}
    # powers[b] = rho^b truncated at relative order ``order``, maintained
    # incrementally as coefficients are appended
    powers = _ser_pow_list(rho, max_b, order, one)
    for j in range(1, order + 1):
        residual = None
        for (k, l), coeff in fdict.items():
            e = level + j - (p * k + q * l)
            if e < 0:
                continue
            part = powers[l].get(e)
            if part is None:
                continue
            term = coeff * part
            residual = term if residual is None else residual + term
        if residual is None or not residual:
            continue
        cj = -residual / lin
        if not cj:
            continue
        rho[j] = cj
        # rho <- rho + cj s^j : update powers via the binomial expansion
        cj_pow = {0: one, 1: cj}
        new_powers = [powers[0]]
        for b in range(1, max_b + 1):
            acc = dict(powers[b])
            m = 1
            while m <= b and j * m <= order:
                if m not in cj_pow:
                    cj_pow[m] = cj_pow[m - 1] * cj
                factor = cj_pow[m] * math.comb(b, m)
                base = powers[b - m]
                shift = j * m
                for e, c in base.items():
                    e2 = e + shift
                    if e2 > order:
                        continue
                    t = c * factor
                    cur = acc.get(e2)
                    acc[e2] = t if cur is None else cur + t
                m += 1
            new_powers.append({e: c for e, c in acc.items() if c})
        powers = new_powers
    series = {q + e: c for e, c in rho.items()}
    return series


def _substituted(fdict: dict, edge: PolygonEdge, c0, one):
    """G(s, w) = F(s^p, s^q (c0 + w)) / s^level, coefficients lifted to c0's
    domain."""
    p, q, level = edge.p, edge.q, edge.level
    out: dict[tuple[int, int], object] = {}
    pow_cache = {0: one}

    def c0_pow(n: int):
        if n not in pow_cache:
            pow_cache[n] = c0_pow(n - 1) * c0
        return pow_cache[n]

    for (k, l), coeff in fdict.items():
        base = p * k + q * l - level
        for m in range(l + 1):
            key = (base, m)
            term = coeff * math.comb(l, m) * c0_pow(l - m)
            cur = out.get(key)
            out[key] = term if cur is None else cur + term
    return {k: v for k, v in out.items() if v}


def _expand(fdict: dict, ring: Optional[ExtRing], order: int, depth: int,
            allow_extension: bool) -> list[RawBranch]:
    """All Puiseux branches of F through the origin (Y -> 0 as X -> 0)."""
    if depth > MAX_RECURSION_DEPTH:
        raise InfinityAnalysisError("Newton-Puiseux recursion depth exceeded")
    one = HRAT_ONE if ring is None else ring.from_hrat(HRAT_ONE)

    def lift_coeff(value):
        if value is None:
            return HRAT_ZERO if ring is None else ring.from_hrat(HRAT_ZERO)
        if ring is None:
            return value
        if isinstance(value, Ext):
            return value
        return ring.from_hrat(value)

    polygon = newton_polygon(fdict.keys())
    branches: list[RawBranch] = []
    for edge in polygon.edges:
        psi = _edge_polynomial_psi(fdict, edge, lift_coeff)
        for g, mult in squarefree_decomposition(psi):
            branches.extend(_expand_class(fdict, edge, g, mult, ring, one,
                                          order, depth, allow_extension))
    return branches


def _expand_class(fdict, edge: PolygonEdge, g: Poly, mult: int,
                  ring: Optional[ExtRing], one, order: int, depth: int,
                  allow_extension: bool) -> list[RawBranch]:
    """Branches for one squarefree factor g of the edge polynomial."""
    # split off Q(i)(h)-rational leading coefficients first: no extension
    # machinery is spent on them and nested expansions stay in the base field
    if g.degree() == 1:
        c0 = -(g.constant() / g.lc())
        return _expand_root(fdict, edge, c0, mult, 1, ring, one, order, depth,
                            allow_extension)
    if ring is None:
        rational_roots, remainders = _hrat_rational_roots(g)
        out: list[RawBranch] = []
        for c0 in rational_roots:
            out.extend(_expand_root(fdict, edge, c0, mult, 1, ring, one,
                                    order, depth, allow_extension))
        for rem in remainders:
            out.extend(_expand_extension(fdict, edge, rem, mult, order, depth,
                                         allow_extension))
        return out
    raise InfinityAnalysisError(
        "extension tower required (algebraic leading coefficient inside an "
        "algebraic class); not supported")


def _expand_extension(fdict, edge: PolygonEdge, g: Poly, mult: int,
                      order: int, depth: int, allow_extension: bool
                      ) -> list[RawBranch]:
    if not allow_extension:
        raise InfinityAnalysisError(
            "extension tower required for repeated algebraic class")
    for coeff in g.coeffs:
        if not coeff.is_h_free():
            raise InfinityAnalysisError(
                "degenerate edge: leading coefficient is algebraic over "
                "Q(i)(h); fractional powers of h are not supported")
    work = [g]
    out: list[RawBranch] = []
    while work:
        modulus = work.pop()
        ring = ExtRing(modulus)
        c0 = ring.generator()
        one = ring.from_hrat(HRAT_ONE)
        lifted = {key: ring.from_hrat(value) for key, value in fdict.items()}
        try:
            out.extend(_expand_root(lifted, edge, c0, mult, modulus.degree(),
                                    ring, one, order, depth,
                                    allow_extension=False))
        except SplitRequired as split:
            factor = split.factor
            work.append(factor)
            work.append(modulus / factor)
    return out


def _expand_root(fdict, edge: PolygonEdge, c0, mult: int, count: int,
                 ring: Optional[ExtRing], one, order: int, depth: int,
                 allow_extension: bool) -> list[RawBranch]:
    if mult == 1:
        series = _solve_simple(fdict, edge, c0, one, order)
        return [RawBranch(p=edge.p, q=edge.q, series=series, ring=ring,
                          series_count=count, edge=edge, order=order)]
    # repeated root: recurse on G(s, w) = F(s^p, s^q (c0 + w)) / s^N.
    # The sub-parameter is the final parameter, so the requested relative
    # order carries over unchanged.
    gdict = _substituted(fdict, edge, c0, one)
    sub = _expand(gdict, ring, order, depth + 1, allow_extension)
    out = []
    for sb in sub:
        p_tot = edge.p * sb.p
        series: dict = {}
        q_scaled = edge.q * sb.p
        series[q_scaled] = c0
        for e, c in sb.series.items():
            key = q_scaled + e
            cur = series.get(key)
            series[key] = c if cur is None else cur + c
        series = {e: c for e, c in series.items() if c}
        out.append(RawBranch(p=p_tot, q=min(series), series=series,
                             ring=sb.ring if sb.ring is not None else ring,
                             series_count=count * sb.series_count,
                             edge=edge, order=sb.order))
    return out


def _hrat_rational_roots(g: Poly):
    """Q(i)-rational roots of a squarefree Poly with HRat coefficients.

    Only h-free polynomials are searched; h-dependent ones of degree >= 2
    are rejected upstream.  Returns (roots as HRat, remainder factors)."""
    if all(c.is_h_free() for c in g.coeffs):
        qi_poly = Poly([c.as_scalar() for c in g.coeffs])
        roots, remainders = exact_qi_roots(qi_poly)
        hroots = [HRat.from_scalar(r) for r, _ in roots]
        hrem = [Poly([HRat.from_scalar(c) for c in rem.coeffs])
                for rem, _ in remainders]
        return hroots, hrem
    raise InfinityAnalysisError(
        "degenerate edge: repeated/irrational leading coefficient depends "
        "on h; not supported")


# --------------------------------------------------------------------------
# conjugacy bookkeeping
# --------------------------------------------------------------------------

_QI_ROOTS_OF_UNITY = {1: [QI(1)], 2: [QI(1), QI(-1)],
                      4: [QI(1), QI(0, 1), QI(-1), QI(0, -1)]}


def _coeff_power_key(value, p: int) -> str:
    """Canonical string of value^p; Ext scalars collapse to their HRat."""
    out = value
    for _ in range(p - 1):
        out = out * value
    if isinstance(out, Ext):
        if out.rep.degree() <= 0:
            scalar = HRAT_ZERO if out.rep.is_zero() else out.rep.constant()
            return str(scalar)
        return "ext:" + format_hpoly_poly(out.rep)
    return str(out)


def _conjugate_key(branch: RawBranch):
    """Merge key: branches are conjugate when one is the other under
    s -> zeta*s with zeta^p = 1.

    For p in {2, 4} over the base field zeta lies in Q(i) and the series
    is normalized coefficient-wise (exact).  Otherwise the key is built
    from the conjugation invariants c_e^p (each coefficient's p-th power
    is fixed by c_e -> zeta^e c_e) plus the exponent support; the caller's
    divisibility assertion catches any residual mis-грouping loudly."""
    p = branch.p
    if branch.ring is None and p in _QI_ROOTS_OF_UNITY and p > 1:
        variants = []
        for zeta in _QI_ROOTS_OF_UNITY[p]:
            # zeta^p = 1, so zeta^e depends on e mod p only
            table = [QI(1)]
            for _ in range(p - 1):
                table.append(table[-1] * zeta)
            scaled = []
            for e in sorted(branch.series):
                c = branch.series[e] * HRat.from_scalar(table[e % p])
                scaled.append((e, str(c)))
            variants.append(tuple(scaled))
        return ("qi-orbit", min(variants))
    if p == 1:
        fingerprint = tuple((e, _branch_coeff_str(branch.series[e]))
                            for e in sorted(branch.series))
        return ("single", fingerprint)
    invariants = []
    for e in sorted(branch.series)[:8]:
        invariants.append((e, _coeff_power_key(branch.series[e], p)))
    return ("orbit", tuple(invariants))


def _branch_coeff_str(value) -> str:
    if isinstance(value, Ext):
        return format_hpoly_poly(value.rep)
    return str(value)


def merge_conjugates(branches: list[RawBranch]) -> list[RawBranch]:
    """Group conjugate series bundles; series counts accumulate."""
    merged: dict = {}
    order = []
    for b in branches:
        key = (b.edge.p, b.edge.q, b.edge.level, _conjugate_key(b))
        if key in merged:
            merged[key].series_count += b.series_count
        else:
            merged[key] = b
            order.append(key)
    return [merged[k] for k in order]


# --------------------------------------------------------------------------
# public branch data
# --------------------------------------------------------------------------

@dataclass
class PuiseuxBranch:
    p: int
    q: int
    shift: QI
    coeffs: list                       # rho coefficients c_0..c_M (exact)
    conjugacy_class_size: int          # series per place = ramification p
    places: int                        # distinct places covered by the bundle
    series_count: int
    ring: Optional[ExtRing]
    edge: PolygonEdge
    order: int

    def coeff_strings(self) -> list[str]:
        return [_coeff_str(c) for c in self.coeffs]

    def modulus_string(self) -> Optional[str]:
        if self.ring is None:
            return None
        return format_hpoly_poly(self.ring.modulus)

    def leading_numeric(self, h: complex) -> complex:
        return _coeff_numeric(self.coeffs[0], self.ring, h)


def _coeff_str(c) -> str:
    if isinstance(c, Ext):
        return format_hpoly_poly(c.rep)
    return str(c)


def _coeff_numeric(c, ring: Optional[ExtRing], h: complex) -> complex:
    if isinstance(c, Ext):
        mod = [co.eval_complex(h) for co in ring.modulus.coeffs]
        root = aberth_roots(mod)[0]
        return c.eval_complex(root, h)
    return c.eval_complex(h)


@dataclass
class BranchDynamics:
    k: int
    lam: object                        # exact leading coefficient (HRat/Ext)
    lam_numeric: complex
    lam_h_free: bool
    cls: str                           # petals|center|node|focus|regular|saddle
    petals: Optional[int]
    omega_order: int
    h_independent: bool                # every computed ds/dt coefficient h-free
    coeff_linear_in_h: bool            # every computed rho coefficient deg_h <= 1
    coeffs_polynomial_in_h: bool
    first_h_dep_index: Optional[int]
    window: int                        # structural first-h-entry order
    linearity_ok: bool                 # primary exact diagnostic (see criteria)
    dsdt_prefix: list                  # (exponent, exact coeff) low-order terms

    def lam_string(self) -> str:
        return _coeff_str(self.lam)


def branch_dynamics(chart: Chart, branch: PuiseuxBranch,
                    h_ref: complex = 0.01 + 0j) -> BranchDynamics:
    """Leading pair (lambda, k) of ds/dt along the branch, class label,
    period-form pole order, and the exact h-dependence diagnostics."""
    p, q = branch.p, branch.q
    hy = chart.transformed.partial_derivative("y")
    ring = branch.ring
    one = HRAT_ONE if ring is None else ring.from_hrat(HRAT_ONE)
    rho = {i: c for i, c in enumerate(branch.coeffs) if c}
    max_b = max((j for (_, j) in hy.terms), default=0)
    cutoff = branch.order
    powers = _ser_pow_list(rho, max_b, cutoff, one)
    composed: dict[int, object] = {}
    base_exps = []
    for (a, b), coeff in hy.terms.items():
        base = -p * a + (q - p) * b
        base_exps.append(base)
        lifted = HRat.from_scalar(coeff) if ring is None \
            else ring.from_hrat(HRat.from_scalar(coeff))
        for rel, c in powers[b].items():
            e = base + rel
            term = lifted * c
            cur = composed.get(e)
            composed[e] = term if cur is None else cur + term
    composed = {e: c for e, c in composed.items() if c}
    if not base_exps:
        raise InfinityAnalysisError("dH/dy vanishes identically")
    valid_through = min(base_exps) + cutoff
    if not composed or min(composed) > valid_through:
        raise InfinityAnalysisError("truncation insufficient")
    nu = min(composed)
    k = nu + p + 1
    inv_p = HRat.from_scalar(QI(Fraction(1, p)))
    lam = composed[nu] * (inv_p if ring is None else ring.from_hrat(inv_p))
    lam_h_free = elem_is_h_free(lam)
    lam_numeric = _coeff_numeric(lam, ring, h_ref)

    dsdt = {e + p + 1: c * inv_p for e, c in sorted(composed.items())
            if e <= valid_through}
    h_independent = all(elem_is_h_free(c) for c in dsdt.values())
    dsdt_prefix = [(e, dsdt[e]) for e in sorted(dsdt)[:6]]

    cls, petals = _classify(k, lam, lam_numeric)
    omega_order = -k

    degs = [elem_h_degree(c) for c in branch.coeffs]
    poly_ok = all(elem_is_polynomial_in_h(c) for c in branch.coeffs)
    coeff_linear = poly_ok and all(d is not None and d <= 1 for d in degs)
    first_dep = None
    for i, c in enumerate(branch.coeffs):
        if not elem_is_h_free(c):
            first_dep = i
            break
    window = max(2 * p + 1 - q - k, 0)
    linearity_ok = lam_h_free
    for i, c in enumerate(branch.coeffs):
        if i < window and not elem_is_h_free(c):
            linearity_ok = False
        if i == window:
            d = elem_h_degree(c)
            if d is None or d > 1:
                linearity_ok = False
    return BranchDynamics(k=k, lam=lam, lam_numeric=lam_numeric,
                          lam_h_free=lam_h_free, cls=cls, petals=petals,
                          omega_order=omega_order,
                          h_independent=h_independent,
                          coeff_linear_in_h=coeff_linear,
                          coeffs_polynomial_in_h=poly_ok,
                          first_h_dep_index=first_dep, window=window,
                          linearity_ok=linearity_ok,
                          dsdt_prefix=dsdt_prefix)


def _classify(k: int, lam, lam_numeric: complex):
    if k > 1:
        return "petals", 2 * (k - 1)
    if k == 0:
        return "regular", None
    if k < 0:
        return "saddle", None
    # k == 1: center / node / focus by the leading coefficient
    exact = None
    if isinstance(lam, HRat):
        exact = lam.as_scalar()
    if exact is not None:
        if not exact.re and exact.im:
            return "center", None
        if not exact.im and exact.re:
            return "node", None
        return "focus", None
    scale = abs(lam_numeric) or 1.0
    if abs(lam_numeric.real) <= 1e-9 * scale:
        return "center", None
    if abs(lam_numeric.imag) <= 1e-9 * scale:
        return "node", None
    return "focus", None


# --------------------------------------------------------------------------
# top-level per-point driver
# --------------------------------------------------------------------------

def puiseux_branches(chart: Chart, point_multiplicity: int,
                     order: int = 16, max_order: int = 64):
    """All Puiseux branch bundles of the localized curve at the origin.

    The expansion is exact; the total number of covered series equals the
    point multiplicity.  Raises InfinityAnalysisError for the documented
    degenerate cases.
    """
    raw = _expand(chart.localized_hrat(), None, order, 0, allow_extension=True)
    for b in raw:
        _reduce_ramification(b)
    raw = merge_conjugates(raw)
    total = sum(b.series_count for b in raw)
    if total != point_multiplicity:
        raise InfinityAnalysisError(
            f"series count {total} != point multiplicity {point_multiplicity}")
    out = []
    for b in raw:
        if b.series_count % b.p != 0:
            raise InfinityAnalysisError("conjugacy bookkeeping failed")
        coeffs = [b.rho_coeff(i) for i in range(b.order + 1)]
        out.append(PuiseuxBranch(p=b.p, q=b.q, shift=QI(0), coeffs=coeffs,
                                 conjugacy_class_size=b.p,
                                 places=b.series_count // b.p,
                                 series_count=b.series_count,
                                 ring=b.ring, edge=b.edge, order=b.order))
    return out


def _reduce_ramification(b: RawBranch) -> None:
    """Reduce a parameterization whose series only uses powers of s^g.

    Such a bundle is g-fold redundant: the true ramification is p/g and the
    exponent lattice rescales accordingly.  Rare; kept for soundness."""
    g = b.p
    for e in b.series:
        g = math.gcd(g, e)
        if g == 1:
            return
    if g <= 1:
        return
    b.series = {e // g: c for e, c in b.series.items()}
    b.p //= g
    b.q //= g
    b.order //= g


def substitute_branch(chart: Chart, branch: PuiseuxBranch) -> dict:
    """Residual series F(s^p, Y(s)) of a branch, for verification.

    Exact: the result maps exponent -> coefficient; an empty dict certifies
    that the branch satisfies the curve equation through the computed
    truncation order."""
    ring = branch.ring
    one = HRAT_ONE if ring is None else ring.from_hrat(HRAT_ONE)
    rho = {i: c for i, c in enumerate(branch.coeffs) if c}
    fdict = chart.localized_hrat()
    p, q = branch.p, branch.q
    level = min(p * k + q * l for (k, l) in fdict)
    cutoff = level + branch.order
    max_b = max(l for (_, l) in fdict)
    powers = _ser_pow_list(rho, max_b, branch.order, one)
    out: dict[int, object] = {}
    for (k, l), coeff in fdict.items():
        base = p * k + q * l
        lifted = coeff if ring is None else ring.from_hrat(coeff)
        for rel, c in powers[l].items():
            e = base + rel
            if e > cutoff:
                continue
            term = lifted * c
            cur = out.get(e)
            out[e] = term if cur is None else cur + term
    return {e: c for e, c in out.items() if c}
