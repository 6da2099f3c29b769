"""Combined analysis orchestration and the stable JSON report schema.

Reports are plain dicts with fixed key insertion order, serialized by
``report_to_json`` deterministically: identical inputs and settings give
byte-identical output.  Schema documented in docs/schema.md; the version
tag is "isochk/1".
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional

from . import criteria as crit
from .bipoly import BiPoly
from .flow import (FlowError, FlowOptions, default_h_samples, escape_analysis,
                   sample_periods, VERDICT_ISO, VERDICT_NONISO,
                   VERDICT_INCONCLUSIVE)
from .jacobian import (JacobianPairError, PolyPair, common_zeros,
                       corollary_verdict, induced_hamiltonian, jacobian_det,
                       make_pair)
from .qi import QI
from .textio import ParseError, format_poly, parse_poly

SCHEMA = "isochk/1"


class DegenerateInputError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str = "analyze"
    hamiltonian: Optional[str] = None
    f: Optional[str] = None
    g: Optional[str] = None
    samples: int = 8
    h_min: float = 1e-3
    h_max: float = 1e-1
    rays_deg: tuple = (0.0,)
    order: int = 16
    iso_tol: float = 1e-6
    rtol: float = 1e-10
    atol: float = 1e-12
    cluster_tol: float = 1e-8
    escape_starts: int = 8
    escape_h: float = 0.05
    run_numeric: bool = True

    def flow_options(self) -> FlowOptions:
        return FlowOptions(rtol=self.rtol, atol=self.atol)

    def to_jsonable(self) -> dict:
        out = asdict(self)
        out["rays_deg"] = list(self.rays_deg)
        return out


def _complex_json(z: complex) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _qi_json(value: QI) -> dict:
    return {"re": str(value.re), "im": str(value.im)}


def _matrix_json(m) -> list:
    return [[_qi_json(m[0]), _qi_json(m[1])], [_qi_json(m[2]), _qi_json(m[3])]]


def empty_report(config: Optional[RunConfig] = None) -> dict:
    return {
        "schema": SCHEMA,
        "config": config.to_jsonable() if config else None,
        "input": None,
        "morse": None,
        "theorem2": None,
        "infinity": None,
        "linearity": None,
        "k_check": None,
        "singular": None,
        "jv_flag": None,
        "numeric": None,
        "jacobian": None,
        "overall": None,
        "overall_reason": None,
        "contradiction": False,
        "errors": [],
    }


def _samples_json(samples) -> list:
    return [{"h": _complex_json(s.h), "T": _complex_json(s.T),
             "drift": s.drift, "steps": s.steps} for s in samples]


def _escapes_json(escapes) -> list:
    out = []
    for r in escapes:
        out.append({
            "start": {"x": _complex_json(r.start.x), "y": _complex_json(r.start.y)},
            "time_sign": r.time_sign,
            "outcome": r.outcome,
            "direction": None if r.direction is None else
                [_complex_json(r.direction[0]), _complex_json(r.direction[1])],
            "matched_point": r.matched_point,
            "t_est": r.t_est,
        })
    return out


def _branch_json(branch, dyn) -> dict:
    return {
        "p": branch.p,
        "q": branch.q,
        "shift": _qi_json(branch.shift),
        "conjugacy_class_size": branch.conjugacy_class_size,
        "places": branch.places,
        "series_count": branch.series_count,
        "extension_modulus": branch.modulus_string(),
        "coefficients": branch.coeff_strings()[: branch.order + 1],
        "k": dyn.k,
        "lambda": dyn.lam_string(),
        "lambda_numeric": _complex_json(dyn.lam_numeric),
        "lambda_h_free": dyn.lam_h_free,
        "class": dyn.cls,
        "petals": dyn.petals,
        "omega_order": dyn.omega_order,
        "dsdt_h_free_all_computed": dyn.h_independent,
        "coefficients_all_linear_in_h": dyn.coeff_linear_in_h,
        "coefficients_polynomial_in_h": dyn.coeffs_polynomial_in_h,
        "first_h_dependent_index": dyn.first_h_dep_index,
        "structural_window": dyn.window,
        "linearity_ok": dyn.linearity_ok,
    }


def _infinity_json(analyses) -> dict:
    points = []
    for record in analyses:
        entry = {
            "direction": record.point.direction.label(),
            "direction_exact": record.point.direction.exact,
            "multiplicity": record.point.multiplicity,
            "chart": None if record.chart is None else _matrix_json(record.chart.matrix),
            "branches": [_branch_json(b, d) for b, d in record.branches],
            "error": record.error,
        }
        points.append(entry)
    return {"points": points}


def _singular_json(points) -> list:
    return [{
        "x": _complex_json(pt.x),
        "y": _complex_json(pt.y),
        "exact": pt.exact,
        "h_value": pt.h_value,
        "h_numeric": _complex_json(pt.h_numeric),
        "on_critical_level": pt.on_critical_level,
    } for pt in points]


def _zeros_json(zeros) -> list:
    return [{
        "x": _complex_json(z.x),
        "y": _complex_json(z.y),
        "multiplicity": z.multiplicity,
        "exact": z.exact,
    } for z in zeros]


def combined_report(config: RunConfig) -> dict:
    """Full analysis: exact criteria, infinity data, numeric sampling.

    Stage errors are embedded; independent later stages still run.  Raises
    ParseError for bad input text and DegenerateInputError when no Morse
    normalization exists (callers map these to exit codes).
    """
    report = empty_report(config)
    errors: list[str] = report["errors"]

    pair = None
    if config.hamiltonian is not None:
        H = parse_poly(config.hamiltonian)
    elif config.f is not None and config.g is not None:
        fpoly = parse_poly(config.f)
        gpoly = parse_poly(config.g)
        try:
            pair = make_pair(fpoly, gpoly)
        except JacobianPairError as exc:
            raise DegenerateInputError(str(exc)) from exc
        H = induced_hamiltonian(pair)
    else:
        raise ValueError("provide a Hamiltonian or a pair (f, g)")

    report["input"] = {
        "hamiltonian": format_poly(H),
        "degree": H.total_degree(),
        "pair": None if pair is None else {"f": format_poly(pair.f),
                                           "g": format_poly(pair.g),
                                           "jacobian": _qi_json(pair.jac)},
    }

    if pair is not None:
        status, zeros = corollary_verdict(pair)
        report["jacobian"] = {
            "jacobian_constant": _qi_json(pair.jac),
            "common_zeros": _zeros_json(zeros),
            "distinct_count": len(zeros),
            "corollary": status,
        }

    try:
        form = crit.normalize(H)
    except crit.NormalizationError as exc:
        raise DegenerateInputError(str(exc)) from exc
    report["morse"] = {
        "change": _matrix_json(form.change),
        "scale": _qi_json(form.scale),
        "normalized": format_poly(form.normalized),
    }
    Hn = form.normalized

    try:
        t2 = crit.theorem2_check(Hn)
        report["theorem2"] = {"status": t2.status,
                              "max_multiplicity": t2.max_multiplicity,
                              "bound": str(t2.bound),
                              "degree": t2.degree}
    except Exception as exc:           # pragma: no cover - defensive
        errors.append(f"theorem2: {exc}")
        t2 = None

    analyses = crit.analyze_infinity(Hn, order=config.order)
    report["infinity"] = _infinity_json(analyses)
    for idx, record in enumerate(analyses):
        if record.error:
            errors.append(f"infinity point {idx}: {record.error}")

    escapes = []
    accessible = None
    if config.run_numeric:
        directions = [r.point.direction.as_complex() for r in analyses]
        try:
            escapes = escape_analysis(Hn, config.escape_h,
                                      config.escape_starts, directions,
                                      config.flow_options())
            accessible = {r.matched_point for r in escapes
                          if r.outcome == "escaped"
                          and r.matched_point is not None}
        except FlowError as exc:
            errors.append(f"escape: {exc}")

    lin = crit.linearity_check(analyses, accessible)
    report["linearity"] = {"status": lin.status, "witness": lin.witness,
                           "details": lin.details}
    kchk = crit.k_one_check(analyses, escapes)
    report["k_check"] = {"status": kchk.status, "witness": kchk.witness}

    try:
        census = crit.singular_points_on_critical_level(H)
        on_l0 = [pt for pt in census if pt.on_critical_level]
        report["singular"] = {
            "points": _singular_json(census),
            "single_singularity_on_critical_level": len(on_l0) == 1,
        }
    except crit.CensusError as exc:
        errors.append(f"singular census: {exc}")
        report["singular"] = {"points": None,
                              "single_singularity_on_critical_level": None,
                              "error": str(exc)}

    report["jv_flag"] = crit.jv_flag(H)

    verdict = None
    if config.run_numeric:
        h_set = default_h_samples(config.samples, config.h_min, config.h_max,
                                  tuple(config.rays_deg))
        scale = complex(form.scale)
        samples, verdict, sample_errors = sample_periods(
            Hn, [h / scale for h in h_set], config.flow_options(),
            config.iso_tol)
        mapped = [type(s)(h=h, T=s.T / scale, drift=s.drift * abs(scale),
                          steps=s.steps)
                  for s, h in zip(samples, h_set)] if len(samples) == len(h_set) \
            else samples
        report["numeric"] = {
            "verdict": verdict,
            "samples": _samples_json(mapped),
            "errors": sample_errors,
            "escapes": _escapes_json(escapes),
        }

    exact_reason = None
    if t2 is not None and t2.status == "fails":
        exact_reason = "fails_theorem2"
    elif lin.status == "violated":
        exact_reason = "fails_linearity"
    elif kchk.status == "violation_witness":
        exact_reason = "fails_k_check"

    contradiction = False
    if exact_reason is not None:
        overall = "not_isochronous"
        reason = exact_reason
        contradiction = verdict == VERDICT_ISO
    elif verdict == VERDICT_NONISO:
        overall, reason = "not_isochronous", "numeric"
    elif verdict == VERDICT_ISO:
        overall = "numerically_isochronous"
        clean = (t2 is not None and t2.status == "passes"
                 and lin.status == "satisfied"
                 and kchk.status in ("consistent", "skipped"))
        reason = "exact_checks_passed" if clean else "exact_checks_partial"
    else:
        overall, reason = "inconclusive", None

    report["overall"] = overall
    report["overall_reason"] = reason
    report["contradiction"] = contradiction
    return report


def period_report(config: RunConfig) -> dict:
    """Period samples of the input system at its own levels."""
    if config.hamiltonian is None:
        raise ValueError("period requires a Hamiltonian")
    H = parse_poly(config.hamiltonian)
    try:
        form = crit.normalize(H)
    except crit.NormalizationError as exc:
        raise DegenerateInputError(str(exc)) from exc
    h_set = default_h_samples(config.samples, config.h_min, config.h_max,
                              tuple(config.rays_deg))
    scale = complex(form.scale)
    samples, verdict, errors = sample_periods(
        form.normalized, [h / scale for h in h_set], config.flow_options(),
        config.iso_tol)
    mapped = [type(s)(h=h, T=s.T / scale, drift=s.drift * abs(scale),
                      steps=s.steps)
              for s, h in zip(samples, h_set)] if len(samples) == len(h_set) \
        else samples
    report = empty_report(config)
    report["input"] = {"hamiltonian": format_poly(H),
                       "degree": H.total_degree(), "pair": None}
    report["morse"] = {"change": _matrix_json(form.change),
                       "scale": _qi_json(form.scale),
                       "normalized": format_poly(form.normalized)}
    report["numeric"] = {"verdict": verdict,
                         "samples": _samples_json(mapped),
                         "errors": errors, "escapes": []}
    report["overall"] = verdict
    report["overall_reason"] = "numeric"
    return report


def infinity_report(config: RunConfig) -> dict:
    """Points at infinity, Puiseux branches and branch dynamics."""
    if config.hamiltonian is None:
        raise ValueError("infinity analysis requires a Hamiltonian")
    H = parse_poly(config.hamiltonian)
    try:
        form = crit.normalize(H)
    except crit.NormalizationError as exc:
        raise DegenerateInputError(str(exc)) from exc
    analyses = crit.analyze_infinity(form.normalized, order=config.order)
    report = empty_report(config)
    report["input"] = {"hamiltonian": format_poly(H),
                       "degree": H.total_degree(), "pair": None}
    report["morse"] = {"change": _matrix_json(form.change),
                       "scale": _qi_json(form.scale),
                       "normalized": format_poly(form.normalized)}
    report["infinity"] = _infinity_json(analyses)
    for idx, record in enumerate(analyses):
        if record.error:
            report["errors"].append(f"infinity point {idx}: {record.error}")
    return report


def necessary_report(config: RunConfig) -> dict:
    """Top-form multiplicity condition and the parity flag."""
    if config.hamiltonian is None:
        raise ValueError("necessary-condition check requires a Hamiltonian")
    H = parse_poly(config.hamiltonian)
    t2 = crit.theorem2_check(H)
    report = empty_report(config)
    report["input"] = {"hamiltonian": format_poly(H),
                       "degree": H.total_degree(), "pair": None}
    report["theorem2"] = {"status": t2.status,
                          "max_multiplicity": t2.max_multiplicity,
                          "bound": str(t2.bound),
                          "degree": t2.degree}
    report["jv_flag"] = crit.jv_flag(H)
    if t2.status == "fails":
        report["overall"] = "not_isochronous"
        report["overall_reason"] = "fails_theorem2"
        report["text"] = (f"FAILS Theorem 2: max multiplicity "
                          f"{t2.max_multiplicity} < {t2.bound} => not isochronous")
    else:
        report["overall"] = "inconclusive"
        report["overall_reason"] = None
        report["text"] = (f"passes Theorem 2: max multiplicity "
                          f"{t2.max_multiplicity} >= {t2.bound} (inconclusive)")
    return report


def jacobian_report(config: RunConfig) -> dict:
    """Jacobian-pair acceptance, induced Hamiltonian, intersection count."""
    if config.f is None or config.g is None:
        raise ValueError("jacobian analysis requires --f and --g")
    fpoly = parse_poly(config.f)
    gpoly = parse_poly(config.g)
    kind, value = jacobian_det(fpoly, gpoly)
    report = empty_report(config)
    if kind != "constant" or not value:
        raise DegenerateInputError(
            "Jacobian determinant is not a nonzero constant: "
            + (format_poly(value) if isinstance(value, BiPoly) else str(value)))
    pair = PolyPair(f=fpoly, g=gpoly, jac=value)
    H = induced_hamiltonian(pair)
    status, zeros = corollary_verdict(pair)
    report["input"] = {"hamiltonian": format_poly(H),
                       "degree": H.total_degree(),
                       "pair": {"f": format_poly(fpoly),
                                "g": format_poly(gpoly),
                                "jacobian": _qi_json(value)}}
    report["jacobian"] = {"jacobian_constant": _qi_json(value),
                          "common_zeros": _zeros_json(zeros),
                          "distinct_count": len(zeros),
                          "corollary": status}
    report["text"] = (f"Jacobian constant {value}; common zeros: {len(zeros)}; "
                      f"Corollary criterion: "
                      f"{'met' if status == 'criterion_met' else status}")
    return report


def singular_report(config: RunConfig) -> dict:
    """Critical points of H and which lie on the critical level."""
    if config.hamiltonian is None:
        raise ValueError("singular census requires a Hamiltonian")
    H = parse_poly(config.hamiltonian)
    try:
        census = crit.singular_points_on_critical_level(H)
    except crit.CensusError as exc:
        raise DegenerateInputError(str(exc)) from exc
    on_l0 = [pt for pt in census if pt.on_critical_level]
    report = empty_report(config)
    report["input"] = {"hamiltonian": format_poly(H),
                       "degree": H.total_degree(), "pair": None}
    report["singular"] = {
        "points": _singular_json(census),
        "single_singularity_on_critical_level": len(on_l0) == 1,
    }
    return report


def report_to_json(report: dict) -> str:
    """Canonical serialization: fixed key order, stable float formatting."""
    return json.dumps(report, indent=2, allow_nan=False)


def period_csv(samples, errors=()) -> str:
    """CSV rows h_re,h_im,T_re,T_im,drift for external plotting."""
    lines = ["h_re,h_im,T_re,T_im,drift"]
    for s in samples:
        h = complex(s.h)
        t = complex(s.T)
        lines.append(f"{h.real!r},{h.imag!r},{t.real!r},{t.imag!r},{s.drift!r}")
    for err in errors:
        lines.append(f"# error: {err}")
    return "\n".join(lines) + "\n"
