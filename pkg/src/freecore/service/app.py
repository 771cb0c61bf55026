"""HTTP surface for the engine.

POST endpoints mirror the CLI subcommands one to one.  Validation
failures map to 400, structurally sound but unrecognized inputs to 422,
so clients can tell "fix your request" from "outside the calculus".
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import OUT_OF_SCOPE, EngineError
from . import handlers
from .models import (
    FdimRequest,
    HealthResponse,
    OracleRequest,
    PairRequest,
    ReportResponse,
    ScenarioRequest,
)


def create_app() -> FastAPI:
    app = FastAPI(title="freecore", version=__version__)

    @app.exception_handler(EngineError)
    async def engine_error(_: Request, exc: EngineError) -> JSONResponse:
        status = 422 if isinstance(exc, OUT_OF_SCOPE) else 400
        return JSONResponse(
            status_code=status,
            content={"error": exc.rule, "message": exc.message},
        )

    @app.get("/v1/health", response_model=HealthResponse)
    async def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/v1/compute", response_model=ReportResponse)
    async def compute(req: PairRequest) -> ReportResponse:
        payload, text = handlers.handle_compute(
            req.spec1.document(), req.spec2.document(), oracle=req.oracle
        )
        return ReportResponse(payload=payload, text=text)

    @app.post("/v1/compress", response_model=ReportResponse)
    async def compress(req: ScenarioRequest) -> ReportResponse:
        payload, text = handlers.handle_compute(
            req.document(), None, gamma_choice=req.gamma_choice
        )
        return ReportResponse(payload=payload, text=text)

    @app.post("/v1/core", response_model=ReportResponse)
    async def core(req: PairRequest) -> ReportResponse:
        payload, text = handlers.handle_core(
            req.spec1.document(), req.spec2.document(), req.height
        )
        return ReportResponse(payload=payload, text=text)

    @app.post("/v1/centralizer", response_model=ReportResponse)
    async def centralizer(req: PairRequest) -> ReportResponse:
        payload, text = handlers.handle_centralizer(
            req.spec1.document(), req.spec2.document(), req.height
        )
        return ReportResponse(payload=payload, text=text)

    @app.post("/v1/sd", response_model=ReportResponse)
    async def sd(req: PairRequest) -> ReportResponse:
        payload, text = handlers.handle_sd(
            req.spec1.document(), req.spec2.document(), req.height
        )
        return ReportResponse(payload=payload, text=text)

    @app.post("/v1/fdim", response_model=ReportResponse)
    async def fdim(req: FdimRequest) -> ReportResponse:
        payload, text = handlers.handle_fdim([s.document() for s in req.specs])
        return ReportResponse(payload=payload, text=text)

    @app.post("/v1/oracle-check", response_model=ReportResponse)
    async def oracle_check(req: OracleRequest) -> ReportResponse:
        payload, text = handlers.handle_oracle_check(
            req.steps, req.samples, req.simulate
        )
        return ReportResponse(payload=payload, text=text)

    return app


app = create_app()
