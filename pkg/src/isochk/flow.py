"""Numeric integration of the real-time flows of a complex Hamiltonian system.

Two real vector fields on C^2 (viewed as R^4) are integrated: the
Hamiltonian field V = (-dH/dy, dH/dx) with real time, and its rotation
i*V.  Both conserve H along trajectories, which is monitored at every
accepted step; runs whose conservation drift exceeds the configured
tolerance are rejected rather than silently accepted.

The period of the small cycle around the origin is detected with a
Poincare section through the start point orthogonal to the flow
direction, refined on the integrator's dense output, and corrected by a
final complex time step that accounts for the section miss when the level
value h is complex.
"""

from __future__ import annotations

import cmath
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp

from .bipoly import BiPoly


class FlowError(RuntimeError):
    pass


class NoReturnError(FlowError):
    pass


class ConservationError(FlowError):
    pass


@dataclass
class FlowOptions:
    rtol: float = 1e-10
    atol: float = 1e-12
    escape_radius: float = 1e6
    conservation_tol: float = 1e-8          # scaled by (1 + |h|)
    t_max_periods: float = 50.0             # in units of 2*pi
    return_radius_factor: float = 0.1       # times sqrt|2h|
    level_tol: float = 1e-13                # Newton landing tolerance scale
    h_max: float = 0.25
    min_step: float = 1e-14


@dataclass(frozen=True)
class FlowState:
    x: complex
    y: complex
    t: float = 0.0

    def as_vector(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=complex)


@dataclass(frozen=True)
class PeriodSample:
    h: complex
    T: complex
    drift: float
    steps: int


@dataclass(frozen=True)
class EscapeResult:
    start: FlowState
    time_sign: int                      # +1 forward, -1 backward
    outcome: str                        # escaped | finite_time_blowup | max_time_reached
    direction: Optional[tuple[complex, complex]] = None   # projective [x:y]
    matched_point: Optional[int] = None
    t_est: Optional[float] = None


def compile_poly(p: BiPoly) -> Callable[[complex, complex], complex]:
    """Fast numeric evaluator for a BiPoly."""
    terms = [(i, j, complex(c)) for (i, j), c in p.terms.items()]

    def evaluate(x: complex, y: complex) -> complex:
        acc = 0j
        for i, j, c in terms:
            acc += c * x**i * y**j
        return acc

    return evaluate


class HamiltonianField:
    """Compiled right-hand sides of V and i*V for one Hamiltonian."""

    def __init__(self, H: BiPoly):
        self.H = H
        self.h_eval = compile_poly(H)
        self.hx = compile_poly(H.partial_derivative("x"))
        self.hy = compile_poly(H.partial_derivative("y"))

    def v(self, z: np.ndarray) -> np.ndarray:
        x, y = z
        return np.array([-self.hy(x, y), self.hx(x, y)], dtype=complex)

    def rhs(self, rotation: complex) -> Callable:
        hx, hy = self.hx, self.hy

        def fun(t, z):
            x, y = z
            return (-rotation * hy(x, y), rotation * hx(x, y))

        return fun


def initial_point_on_level(H: BiPoly, h: complex, theta: float,
                           opts: FlowOptions = FlowOptions()) -> FlowState:
    """Point on the level curve H = h near angle theta on the small cycle.

    Starts from (sqrt(2h) cos(theta), sqrt(2h) sin(theta)) and corrects the
    y coordinate by Newton iteration (the x coordinate when dH/dy is nearly
    singular there).
    """
    h = complex(h)
    if h == 0:
        raise FlowError("degenerate level h=0 passes through the singular point")
    if abs(h) > opts.h_max:
        raise FlowError(f"|h|={abs(h):.3g} outside the tracked range "
                        f"(max {opts.h_max})")
    field = HamiltonianField(H)
    r = cmath.sqrt(2 * h)
    x = r * math.cos(theta)
    y_init = r * math.sin(theta)
    tol = opts.level_tol * (1 + abs(h))

    # seed y from the quadratic normal form, choosing the branch nearest
    # the nominal start
    rest = field.h_eval(x, 0.0)
    y_seed = cmath.sqrt(2 * (h - rest))
    if abs(-y_seed - y_init) < abs(y_seed - y_init):
        y_seed = -y_seed

    scale = max(abs(x), abs(y_seed), abs(r), 1e-3)
    if abs(field.hy(x, y_seed)) > 1e-12 * scale:
        y = y_seed
        for _ in range(50):
            res = field.h_eval(x, y) - h
            if abs(res) <= tol:
                return FlowState(x=x, y=y)
            dy = field.hy(x, y)
            if dy == 0:
                break
            y = y - res / dy
    # fallback: correct x with y frozen
    y = y_init
    xc = x
    for _ in range(50):
        res = field.h_eval(xc, y) - h
        if abs(res) <= tol:
            return FlowState(x=xc, y=y)
        dx = field.hx(xc, y)
        if dx == 0:
            break
        xc = xc - res / dx
    raise FlowError("cannot land on level curve")


@dataclass
class Trajectory:
    ts: np.ndarray
    zs: np.ndarray                       # shape (2, n)
    status: str                          # completed | escaped | blowup
    drift: float
    steps: int
    sol: object = None                   # scipy OdeSolution (dense)
    t_final: float = 0.0
    events: list = field(default_factory=list)


def integrate(H: BiPoly, kind: str, z0: FlowState, t_end: float,
              opts: FlowOptions = FlowOptions(), h_ref: Optional[complex] = None,
              extra_events: Optional[list] = None) -> Trajectory:
    """Integrate V or iV over [0, t_end] with escape/blow-up classification."""
    field_ = HamiltonianField(H)
    rotation = 1j if kind == "iV" else 1.0 + 0j
    fun = field_.rhs(rotation)
    z_start = z0.as_vector()
    h_value = field_.h_eval(*z_start) if h_ref is None else complex(h_ref)

    radius2 = opts.escape_radius ** 2

    def escape_event(t, z):
        return (z[0].real**2 + z[0].imag**2 + z[1].real**2 + z[1].imag**2) - radius2
    escape_event.terminal = True
    escape_event.direction = 1

    events = [escape_event] + list(extra_events or [])
    with np.errstate(all="ignore"):
        sol = solve_ivp(fun, (0.0, t_end), z_start, method="RK45",
                        rtol=opts.rtol, atol=opts.atol, dense_output=True,
                        events=events)
    zs = sol.y
    drift = 0.0
    for k in range(zs.shape[1]):
        value = field_.h_eval(zs[0, k], zs[1, k])
        # conservation only meaningful while the point is finite
        if np.isfinite(value.real) and np.isfinite(value.imag):
            norm2 = abs(zs[0, k])**2 + abs(zs[1, k])**2
            if norm2 < radius2:
                drift = max(drift, abs(value - h_value))
    steps = zs.shape[1]
    if sol.status == 1 and len(sol.t_events[0]):
        status = "escaped"
        t_final = float(sol.t_events[0][0])
    elif sol.status == -1:
        status = "blowup"
        t_final = float(sol.t[-1])
    else:
        status = "completed"
        t_final = float(sol.t[-1])
    return Trajectory(ts=sol.t, zs=zs, status=status, drift=float(drift),
                      steps=int(steps), sol=sol.sol, t_final=float(t_final),
                      events=[np.asarray(te) for te in sol.t_events])


def period(H: BiPoly, h: complex, opts: FlowOptions = FlowOptions(),
           theta: float = 0.0) -> PeriodSample:
    """One full return time of the V flow on the cycle of the level h."""
    h = complex(h)
    p0_state = initial_point_on_level(H, h, theta, opts)
    field_ = HamiltonianField(H)
    p0 = p0_state.as_vector()
    v0 = field_.v(p0)
    v0_norm2 = float(np.sum(np.abs(v0) ** 2))
    if v0_norm2 == 0:
        raise FlowError("stationary start point")
    return_radius = opts.return_radius_factor * math.sqrt(abs(2 * h))
    cons_tol = opts.conservation_tol * (1 + abs(h))
    fun = field_.rhs(1.0 + 0j)

    def section(t, z):
        gap0 = z[0] - p0[0]
        gap1 = z[1] - p0[1]
        return (gap0 * v0[0].conjugate() + gap1 * v0[1].conjugate()).real
    section.terminal = False
    section.direction = 1

    radius2 = opts.escape_radius ** 2

    def escape_event(t, z):
        return (abs(z[0])**2 + abs(z[1])**2) - radius2
    escape_event.terminal = True
    escape_event.direction = 1

    t_max = opts.t_max_periods * 2 * math.pi
    chunk = 4 * math.pi
    t0 = 0.0
    z = p0.copy()
    drift = 0.0
    steps = 0
    while t0 < t_max:
        t1 = min(t0 + chunk, t_max)
        with np.errstate(all="ignore"):
            sol = solve_ivp(fun, (t0, t1), z, method="RK45", rtol=opts.rtol,
                            atol=opts.atol, dense_output=True,
                            events=[section, escape_event])
        steps += sol.y.shape[1]
        for k in range(sol.y.shape[1]):
            value = field_.h_eval(sol.y[0, k], sol.y[1, k])
            drift = max(drift, abs(value - h))
        if drift > cons_tol:
            raise ConservationError(
                f"conservation lost: drift {drift:.3e} > {cons_tol:.3e}")
        if sol.status == -1:
            raise FlowError(f"integrator failure on the cycle: {sol.message}")
        if sol.status == 1:
            raise NoReturnError("orbit escaped before returning to the section")
        for t_event in sol.t_events[0]:
            if t_event <= 1e-9:
                continue
            z_event = sol.sol(t_event)
            if np.sqrt(np.sum(np.abs(z_event - p0) ** 2)) < return_radius:
                v_here = field_.v(z_event)
                gap = z_event - p0
                denom = complex(np.sum(v_here * np.conj(v_here)))
                delta = -complex(np.sum(gap * np.conj(v_here))) / denom
                T = t_event + delta
                return PeriodSample(h=h, T=complex(T), drift=float(drift),
                                    steps=int(steps))
        z = sol.y[:, -1]
        t0 = t1
    raise NoReturnError(f"no return detected within t_max={t_max:.3g}")


VERDICT_ISO = "numerically_isochronous"
VERDICT_NONISO = "numerically_non_isochronous"
VERDICT_INCONCLUSIVE = "inconclusive"


def default_h_samples(count: int = 8, h_min: float = 1e-3, h_max: float = 1e-1,
                      rays_deg: tuple = (0.0,)) -> list[complex]:
    """Log-spaced |h| values along rays from the origin of the h plane."""
    if count < 1:
        raise ValueError("need at least one sample")
    if count == 1:
        radii = [h_min]
    else:
        ratio = (h_max / h_min) ** (1 / (count - 1))
        radii = [h_min * ratio**k for k in range(count)]
    out = []
    for ray in rays_deg:
        phase = cmath.exp(1j * math.radians(ray))
        out.extend(r * phase for r in radii)
    return out


def _thread_count() -> int:
    value = os.environ.get("ISOCHK_THREADS", "1")
    try:
        return max(1, int(value))
    except ValueError:
        return 1


def sample_periods(H: BiPoly, h_set: list[complex],
                   opts: FlowOptions = FlowOptions(), iso_tol: float = 1e-6):
    """Period samples over h_set plus an isochronicity verdict.

    Returns (samples, verdict, errors); samples are in input order
    regardless of the parallel schedule.  Any failed sample makes the
    verdict inconclusive.
    """
    workers = _thread_count()

    def run(h):
        try:
            return period(H, h, opts)
        except FlowError as exc:
            return exc

    if workers > 1 and len(h_set) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, h_set))
    else:
        results = [run(h) for h in h_set]
    samples = [r for r in results if isinstance(r, PeriodSample)]
    errors = [str(r) for r in results if not isinstance(r, PeriodSample)]
    if errors or len(samples) < 2:
        return samples, VERDICT_INCONCLUSIVE, errors
    ts = [s.T for s in samples]
    mean = sum(ts) / len(ts)
    spread = max(abs(a - b) for a in ts for b in ts)
    if spread / abs(mean) < iso_tol:
        return samples, VERDICT_ISO, errors
    return samples, VERDICT_NONISO, errors


def _projective_distance(a: tuple[complex, complex],
                         b: tuple[complex, complex]) -> float:
    cross = a[0] * b[1] - a[1] * b[0]
    na = math.hypot(abs(a[0]), abs(a[1]))
    nb = math.hypot(abs(b[0]), abs(b[1]))
    if na == 0 or nb == 0:
        return float("inf")
    return abs(cross) / (na * nb)


def escape_analysis(H: BiPoly, h: complex, n_starts: int,
                    directions: list[tuple[complex, complex]],
                    opts: FlowOptions = FlowOptions(),
                    t_max: float = 60.0) -> list[EscapeResult]:
    """Forward and backward iV runs from points on the cycle.

    directions: projective [beta:alpha] pairs of the points at infinity;
    escaped runs are matched to the nearest one.
    """
    out = []
    for j in range(n_starts):
        theta = 2 * math.pi * j / n_starts
        start = initial_point_on_level(H, h, theta, opts)
        for sign in (+1, -1):
            traj = integrate(H, "iV", FlowState(start.x, start.y),
                             sign * t_max, opts, h_ref=h)
            if traj.status == "escaped":
                z = traj.sol(sign * abs(traj.t_final)) if traj.sol else traj.zs[:, -1]
                direction = (complex(z[0]), complex(z[1]))
                norm = max(abs(direction[0]), abs(direction[1]))
                direction = (direction[0] / norm, direction[1] / norm)
                matched = None
                if directions:
                    matched = min(range(len(directions)),
                                  key=lambda i: _projective_distance(direction,
                                                                     directions[i]))
                out.append(EscapeResult(start=start, time_sign=sign,
                                        outcome="escaped", direction=direction,
                                        matched_point=matched,
                                        t_est=float(abs(traj.t_final))))
            elif traj.status == "blowup":
                z = traj.zs[:, -1]
                direction = None
                matched = None
                norm = max(abs(z[0]), abs(z[1]))
                if norm > 1e3:
                    direction = (complex(z[0]) / norm, complex(z[1]) / norm)
                    if directions:
                        matched = min(range(len(directions)),
                                      key=lambda i: _projective_distance(direction,
                                                                         directions[i]))
                out.append(EscapeResult(start=start, time_sign=sign,
                                        outcome="finite_time_blowup",
                                        direction=direction,
                                        matched_point=matched,
                                        t_est=float(abs(traj.t_final))))
            else:
                out.append(EscapeResult(start=start, time_sign=sign,
                                        outcome="max_time_reached"))
    return out
