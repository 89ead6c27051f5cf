"""HTTP service exposing the experiment driver.

Endpoints mirror the driver commands: POST /run, /enumerate, /compare.
Errors are reported as HTTP 400 with a machine-readable ``code`` field
("usage", "size-limit", "unsolvable") so clients can map them to exit
statuses.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .errors import AlsimError, SizeLimitError, UnsolvableInstanceError, UsageError
from .runner import RunConfig, cmd_compare, cmd_enumerate, cmd_run


class RunRequest(BaseModel):
    graph: str
    task: str
    algo: str
    model: str = "local"
    transform: bool = False
    schedule: str = "sync"
    N: int | None = Field(default=None, description="declared id bound")
    seed: int = 0
    output_format: str = "json"

    def to_config(self) -> RunConfig:
        return RunConfig.from_dict(self.model_dump())


class EnumerateRequest(RunRequest):
    max_wake: int = 0
    include_never: bool = False
    include_crash: bool = False

    def to_config(self) -> RunConfig:
        data = self.model_dump(
            exclude={"max_wake", "include_never", "include_crash"}
        )
        return RunConfig.from_dict(data)


class CompareRequest(RunRequest):
    repeat: int = 1

    def to_config(self) -> RunConfig:
        return RunConfig.from_dict(self.model_dump(exclude={"repeat"}))


class NodeReport(BaseModel):
    node: int
    id: int
    wake: int | str
    fate: str
    output: int | str | None


class RunResponse(BaseModel):
    config: dict
    verdict: str
    witness: int | None
    nodes: list[NodeReport]
    tau: int | None
    snapshot_radius: int | None
    schedule: dict
    wall_time_s: float


class EnumerateResponse(BaseModel):
    config: dict
    max_wake: int
    include_never: bool
    include_crash: bool
    total: int
    passes: int
    failures: int
    first_counterexample: dict | None
    tau: int | None
    snapshot_radius: int | None
    wall_time_s: float


class CompareResponse(BaseModel):
    config: dict
    runs: int
    mismatches: int
    identical: bool
    first_mismatch: dict | None
    tau: int | None
    snapshot_radius: int | None
    wall_time_s: float


def create_app() -> FastAPI:
    app = FastAPI(title="alsim", version="0.1.0")

    @app.exception_handler(AlsimError)
    async def _alsim_error(request: Request, exc: AlsimError):
        if isinstance(exc, SizeLimitError):
            code = "size-limit"
        elif isinstance(exc, UnsolvableInstanceError):
            code = "unsolvable"
        elif isinstance(exc, UsageError):
            code = "usage"
        else:
            code = "usage"
        return JSONResponse(
            status_code=400, content={"code": code, "detail": str(exc)}
        )

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/run", response_model=RunResponse)
    def run(req: RunRequest):
        return cmd_run(req.to_config())

    @app.post("/enumerate", response_model=EnumerateResponse)
    def enumerate_(req: EnumerateRequest):
        return cmd_enumerate(
            req.to_config(),
            max_wake=req.max_wake,
            include_never=req.include_never,
            include_crash=req.include_crash,
        )

    @app.post("/compare", response_model=CompareResponse)
    def compare(req: CompareRequest):
        return cmd_compare(req.to_config(), repeat=req.repeat)

    return app


app = create_app()
