"""Command-line front end.

Every subcommand builds one request and renders one deterministic report.
By default the request is executed in-process through the same handlers the
HTTP service uses; with --server URL it is sent to a running isochk service
instead and the response is rendered identically.

Exit codes: 0 success, 2 parse error, 3 degenerate input (no Morse point,
non-constant Jacobian, common component), 4 numeric failure.  Mathematical
verdicts are never encoded in exit codes.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .flow import FlowError
from .report import (DegenerateInputError, RunConfig, combined_report,
                     infinity_report, jacobian_report, necessary_report,
                     period_csv, period_report, report_to_json,
                     singular_report)
from .textio import ParseError

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DEGENERATE = 3
EXIT_NUMERIC = 4

_BUILDERS = {
    "analyze": combined_report,
    "period": period_report,
    "infinity": infinity_report,
    "necessary": necessary_report,
    "jacobian": jacobian_report,
    "singular": singular_report,
}


def _add_common(parser: argparse.ArgumentParser, pair_ok: bool = False,
                hamiltonian: bool = True) -> None:
    if hamiltonian:
        parser.add_argument("-H", "--hamiltonian", help="polynomial H(x,y), "
                            "exact rational/Gaussian-rational coefficients")
    if pair_ok:
        parser.add_argument("--f", help="first polynomial of the pair")
        parser.add_argument("--g", help="second polynomial of the pair")
    parser.add_argument("--samples", type=int, default=8,
                        help="number of |h| samples per ray")
    parser.add_argument("--h-min", type=float, default=1e-3,
                        help="smallest |h| sample")
    parser.add_argument("--h-max", type=float, default=1e-1,
                        help="largest |h| sample")
    parser.add_argument("--ray", type=float, action="append", default=None,
                        metavar="DEG", help="ray angle in the h plane, "
                        "degrees (repeatable; default 0)")
    parser.add_argument("--order", type=int, default=16,
                        help="Puiseux truncation order")
    parser.add_argument("--iso-tol", type=float, default=1e-6,
                        help="relative period spread declaring isochronicity")
    parser.add_argument("--rtol", type=float, default=1e-10,
                        help="integrator relative tolerance")
    parser.add_argument("--atol", type=float, default=1e-12,
                        help="integrator absolute tolerance")
    parser.add_argument("--cluster-tol", type=float, default=1e-8,
                        help="root clustering tolerance")
    parser.add_argument("--no-numeric", action="store_true",
                        help="skip period sampling and escape runs")
    parser.add_argument("--json", metavar="OUT",
                        help="write the full JSON report to OUT")
    parser.add_argument("--csv", metavar="OUT",
                        help="write period samples as CSV to OUT")
    parser.add_argument("--server", metavar="URL",
                        help="send the request to a running isochk service")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isochk",
        description="Isochronicity analysis of planar polynomial "
                    "Hamiltonian systems.  Env: ISOCHK_THREADS caps the "
                    "parallelism of period sampling.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)
    specs = [
        ("analyze", "full exact + numeric analysis and combined verdict", True),
        ("period", "sample the period function; CSV on stdout", False),
        ("infinity", "points at infinity, Puiseux branches, dynamics", False),
        ("necessary", "top-form multiplicity necessary condition", False),
        ("jacobian", "Jacobian-pair acceptance and intersection criterion", True),
        ("singular", "singular points and the critical level census", False),
    ]
    for name, help_text, pair_ok in specs:
        p = sub.add_parser(name, help=help_text,
                           formatter_class=argparse.ArgumentDefaultsHelpFormatter)
        _add_common(p, pair_ok=pair_ok)
    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def _config_from_args(args) -> RunConfig:
    rays = tuple(args.ray) if args.ray else (0.0,)
    return RunConfig(command=args.command,
                     hamiltonian=getattr(args, "hamiltonian", None),
                     f=getattr(args, "f", None), g=getattr(args, "g", None),
                     samples=args.samples, h_min=args.h_min, h_max=args.h_max,
                     rays_deg=rays, order=args.order, iso_tol=args.iso_tol,
                     rtol=args.rtol, atol=args.atol,
                     cluster_tol=args.cluster_tol,
                     run_numeric=not args.no_numeric)


def _run_remote(args, config: RunConfig):
    import httpx
    payload = config.to_jsonable()
    payload["rays_deg"] = list(config.rays_deg)
    for drop in ("command",):
        payload.pop(drop, None)
    url = args.server.rstrip("/") + f"/v1/{config.command}"
    response = httpx.post(url, json=payload, timeout=600.0)
    if response.status_code == 200:
        return json.loads(response.text), response.text
    try:
        error = response.json()["error"]
    except Exception:
        print(f"service error: HTTP {response.status_code}", file=sys.stderr)
        raise SystemExit(EXIT_NUMERIC)
    kind = error.get("kind", "")
    print(f"error: {error.get('message', '')}", file=sys.stderr)
    raise SystemExit({"parse_error": EXIT_PARSE,
                      "degenerate_input": EXIT_DEGENERATE,
                      "numeric_failure": EXIT_NUMERIC}.get(kind, EXIT_NUMERIC))


def _samples_from_report(report: dict):
    from .flow import PeriodSample
    numeric = report.get("numeric") or {}
    out = []
    for row in numeric.get("samples", []):
        out.append(PeriodSample(h=complex(row["h"]["re"], row["h"]["im"]),
                                T=complex(row["T"]["re"], row["T"]["im"]),
                                drift=row["drift"], steps=row["steps"]))
    return out, numeric.get("errors", [])


def _render_text(report: dict) -> str:
    lines = []
    command = (report.get("config") or {}).get("command", "")
    if "text" in report and report["text"]:
        lines.append(report["text"])
    if command == "period":
        samples, errors = _samples_from_report(report)
        return period_csv(samples, errors).rstrip("\n")
    if report.get("input"):
        lines.append(f"H = {report['input']['hamiltonian']}")
    if report.get("theorem2") and command == "analyze":
        t2 = report["theorem2"]
        lines.append(f"theorem2: {t2['status']} (max multiplicity "
                     f"{t2['max_multiplicity']}, bound {t2['bound']})")
    if report.get("linearity"):
        lines.append(f"linearity: {report['linearity']['status']}")
    if report.get("k_check"):
        lines.append(f"k_check: {report['k_check']['status']}")
    if report.get("infinity"):
        for pt in report["infinity"]["points"]:
            head = (f"point {pt['direction']} multiplicity {pt['multiplicity']}")
            if pt.get("error"):
                lines.append(f"{head}: {pt['error']}")
                continue
            lines.append(head)
            for b in pt["branches"]:
                lines.append(
                    f"  branch p={b['p']} q={b['q']} places={b['places']} "
                    f"k={b['k']} lambda={b['lambda']} class={b['class']} "
                    f"omega_order={b['omega_order']}")
    if report.get("singular"):
        points = report["singular"].get("points")
        if points is not None:
            for pt in points:
                lines.append(
                    f"singular point x={pt['x']['re']:+.6g}{pt['x']['im']:+.6g}i "
                    f"y={pt['y']['re']:+.6g}{pt['y']['im']:+.6g}i "
                    f"H={pt['h_value'] if pt['h_value'] is not None else pt['h_numeric']} "
                    f"on_L0={pt['on_critical_level']}")
            lines.append("single singularity on critical level: "
                         f"{report['singular']['single_singularity_on_critical_level']}")
    if report.get("jacobian") and "text" not in report:
        jac = report["jacobian"]
        lines.append(f"jacobian: {jac['corollary']} "
                     f"({jac['distinct_count']} common zero(s))")
    if report.get("numeric"):
        lines.append(f"numeric verdict: {report['numeric']['verdict']}")
        for err in report["numeric"].get("errors", []):
            lines.append(f"  numeric error: {err}")
    if report.get("jv_flag"):
        lines.append(f"parity flag: {report['jv_flag']}")
    if report.get("overall"):
        reason = report.get("overall_reason")
        suffix = f" ({reason})" if reason else ""
        lines.append(f"overall: {report['overall']}{suffix}")
    return "\n".join(lines)


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "serve":
        import uvicorn
        uvicorn.run("isochk.service:app", host=args.host, port=args.port)
        return EXIT_OK
    config = _config_from_args(args)
    if getattr(args, "server", None):
        report, canonical = _run_remote(args, config)
    else:
        builder = _BUILDERS[config.command]
        try:
            report = builder(config)
        except ParseError as exc:
            print(f"parse error: {exc}", file=sys.stderr)
            return EXIT_PARSE
        except DegenerateInputError as exc:
            print(f"degenerate input: {exc}", file=sys.stderr)
            return EXIT_DEGENERATE
        except FlowError as exc:
            print(f"numeric failure: {exc}", file=sys.stderr)
            return EXIT_NUMERIC
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_PARSE
        canonical = report_to_json(report)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(canonical + "\n")
    if getattr(args, "csv", None):
        samples, errors = _samples_from_report(report)
        with open(args.csv, "w") as fh:
            fh.write(period_csv(samples, errors))
    print(_render_text(report))
    numeric = report.get("numeric") or {}
    if config.command == "period":
        samples, errors = _samples_from_report(report)
        if errors and not samples:
            return EXIT_NUMERIC
    if config.command == "analyze" and config.run_numeric:
        samples, errors = _samples_from_report(report)
        if errors and not samples:
            return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
