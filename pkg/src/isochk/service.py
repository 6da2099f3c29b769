"""HTTP service exposing the analysis operations.

Thin FastAPI layer over the report builders: request bodies are validated
by pydantic models mirroring the run configuration; responses are the
canonical JSON reports, serialized by the same writer the CLI uses so the
bytes match across transports.

Error mapping: malformed polynomial text -> 422, mathematically degenerate
input (no Morse point, common component, bad pair) -> 400, numeric
integration failure -> 500; response bodies carry a ``kind`` field that
clients map back to process exit codes.
"""

from __future__ import annotations

from typing import List, Optional

from fastapi import FastAPI
from fastapi.responses import Response
from pydantic import BaseModel, Field, field_validator

from . import __version__
from .flow import FlowError
from .report import (DegenerateInputError, RunConfig, combined_report,
                     infinity_report, jacobian_report, necessary_report,
                     period_report, report_to_json, singular_report)
from .textio import ParseError

app = FastAPI(title="isochk", version=__version__,
              description="Isochronicity analysis of planar polynomial "
                          "Hamiltonian systems")


class AnalysisRequest(BaseModel):
    hamiltonian: Optional[str] = None
    f: Optional[str] = None
    g: Optional[str] = None
    samples: int = Field(default=8, ge=1, le=256)
    h_min: float = Field(default=1e-3, gt=0)
    h_max: float = Field(default=1e-1, gt=0)
    rays_deg: List[float] = Field(default_factory=lambda: [0.0])
    order: int = Field(default=16, ge=2, le=64)
    iso_tol: float = Field(default=1e-6, gt=0)
    rtol: float = Field(default=1e-10, gt=0)
    atol: float = Field(default=1e-12, gt=0)
    cluster_tol: float = Field(default=1e-8, gt=0)
    escape_starts: int = Field(default=8, ge=1, le=64)
    escape_h: float = Field(default=0.05, gt=0)
    run_numeric: bool = True

    @field_validator("rays_deg")
    @classmethod
    def _rays_nonempty(cls, v):
        if not v:
            raise ValueError("at least one ray is required")
        return v

    def to_config(self, command: str) -> RunConfig:
        return RunConfig(command=command, hamiltonian=self.hamiltonian,
                         f=self.f, g=self.g, samples=self.samples,
                         h_min=self.h_min, h_max=self.h_max,
                         rays_deg=tuple(self.rays_deg), order=self.order,
                         iso_tol=self.iso_tol, rtol=self.rtol,
                         atol=self.atol, cluster_tol=self.cluster_tol,
                         escape_starts=self.escape_starts,
                         escape_h=self.escape_h,
                         run_numeric=self.run_numeric)


class HealthResponse(BaseModel):
    status: str
    version: str


def _json_response(report: dict, status_code: int = 200) -> Response:
    return Response(content=report_to_json(report),
                    media_type="application/json", status_code=status_code)


def _error_response(kind: str, message: str, status_code: int,
                    position: Optional[int] = None) -> Response:
    body = {"error": {"kind": kind, "message": message}}
    if position is not None:
        body["error"]["position"] = position
    import json
    return Response(content=json.dumps(body, indent=2),
                    media_type="application/json", status_code=status_code)


def run_builder(builder, config: RunConfig):
    """Shared execution and error classification for all endpoints."""
    try:
        return _json_response(builder(config))
    except ParseError as exc:
        return _error_response("parse_error", str(exc), 422, exc.position)
    except DegenerateInputError as exc:
        return _error_response("degenerate_input", str(exc), 400)
    except FlowError as exc:
        return _error_response("numeric_failure", str(exc), 500)
    except ValueError as exc:
        return _error_response("invalid_request", str(exc), 422)


@app.get("/v1/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.post("/v1/analyze")
def analyze(request: AnalysisRequest) -> Response:
    return run_builder(combined_report, request.to_config("analyze"))


@app.post("/v1/period")
def period(request: AnalysisRequest) -> Response:
    return run_builder(period_report, request.to_config("period"))


@app.post("/v1/infinity")
def infinity(request: AnalysisRequest) -> Response:
    return run_builder(infinity_report, request.to_config("infinity"))


@app.post("/v1/necessary")
def necessary(request: AnalysisRequest) -> Response:
    return run_builder(necessary_report, request.to_config("necessary"))


@app.post("/v1/jacobian")
def jacobian(request: AnalysisRequest) -> Response:
    return run_builder(jacobian_report, request.to_config("jacobian"))


@app.post("/v1/singular")
def singular(request: AnalysisRequest) -> Response:
    return run_builder(singular_report, request.to_config("singular"))
