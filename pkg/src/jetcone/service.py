"""HTTP service exposing the pipeline.

Every endpoint is a POST taking ``{"problem": {...}, "seed": n}``; results
are plain JSON reports.  Batch-item failures (inadmissible jets, directions
outside the cone) live inside the report entries; only file-level
validation problems produce an error response (HTTP 422).
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__
from .errors import JetconeError
from .runner import (
    cmd_classify,
    cmd_initial,
    cmd_lift,
    cmd_optimality,
    cmd_sample,
    cmd_sweep,
    cmd_t2a,
    cmd_tangent_cone,
)
from .schemas import (
    AnalysisRequest,
    ClassifyReport,
    HealthResponse,
    InitialReport,
    LiftReport,
    OptimalityRunReport,
    SampleReport,
    SweepReport,
    T2aReport,
    TangentConeReport,
)

app = FastAPI(
    title="jetcone",
    version=__version__,
    description=(
        "Directional second-order tangent sets of polynomial varieties: exact "
        "affine descriptions, certificates, jet lifting, membership sampling, "
        "and second-order optimality reports."
    ),
)


@app.exception_handler(JetconeError)
async def _domain_error(_request: Request, exc: JetconeError) -> JSONResponse:
    return JSONResponse(
        status_code=422,
        content={"error": type(exc).__name__, "detail": str(exc)},
    )


@app.get("/healthz", response_model=HealthResponse)
def healthz() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.post("/v1/initial", response_model=InitialReport)
def initial(request: AnalysisRequest) -> InitialReport:
    return cmd_initial(request)


@app.post("/v1/tangent-cone", response_model=TangentConeReport)
def tangent_cone(request: AnalysisRequest) -> TangentConeReport:
    return cmd_tangent_cone(request)


@app.post("/v1/t2a", response_model=T2aReport)
def t2a(request: AnalysisRequest) -> T2aReport:
    return cmd_t2a(request)


@app.post("/v1/classify", response_model=ClassifyReport)
def classify_endpoint(request: AnalysisRequest) -> ClassifyReport:
    return cmd_classify(request)


@app.post("/v1/lift", response_model=LiftReport)
def lift(request: AnalysisRequest) -> LiftReport:
    return cmd_lift(request)


@app.post("/v1/sample", response_model=SampleReport)
def sample(request: AnalysisRequest) -> SampleReport:
    return cmd_sample(request)


@app.post("/v1/optimality", response_model=OptimalityRunReport)
def optimality(request: AnalysisRequest) -> OptimalityRunReport:
    return cmd_optimality(request)


@app.post("/v1/sweep", response_model=SweepReport)
def sweep(request: AnalysisRequest) -> SweepReport:
    return cmd_sweep(request)
