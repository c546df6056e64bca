"""HTTP surface of the embedding sidecar.

``POST /v1/embed`` takes ``{request_id, model, sequences}`` and returns one
vector per input token per sequence; ``GET /v1/health`` reports readiness,
the served model, its dimension, and the selected layer. Handlers are
stateless and safe under concurrent requests; responses echo the request id
so clients can match them.

Error mapping: unknown model -> 404, malformed body -> 400, too many tokens
in a sequence or too many sequences in a batch -> 413 naming the configured
limit (never silent truncation).
"""

from __future__ import annotations

from dataclasses import dataclass

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .model import DEFAULT_MODEL, MiniTransformerEncoder, UnknownModelError


@dataclass(frozen=True)
class ServiceSettings:
    model: str = DEFAULT_MODEL
    layer: int = -1
    max_tokens: int = 512
    batch_limit: int = 64


class EmbedRequest(BaseModel):
    request_id: str = Field(min_length=1)
    model: str = Field(min_length=1)
    sequences: list[list[str]] = Field(min_length=1)


class EmbedResponse(BaseModel):
    request_id: str
    model: str
    dim: int
    vectors: list[list[list[float]]]


def create_app(settings: ServiceSettings | None = None, defer_load: bool = False) -> FastAPI:
    """Build the service; ``defer_load`` leaves the model unloaded (503s)."""
    settings = settings or ServiceSettings()
    app = FastAPI(title="embed-service")
    app.state.settings = settings
    app.state.encoder = None if defer_load else MiniTransformerEncoder(settings.model)

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    @app.get("/v1/health")
    def health():
        encoder = app.state.encoder
        if encoder is None:
            return JSONResponse(
                status_code=503,
                content={"status": "loading", "model": settings.model},
            )
        return {
            "status": "ok",
            "model": encoder.name,
            "dim": encoder.dim,
            "layer": settings.layer,
        }

    @app.post("/v1/embed", response_model=EmbedResponse)
    def embed(request: EmbedRequest) -> EmbedResponse:
        encoder = app.state.encoder
        if encoder is None:
            raise HTTPException(status_code=503, detail="model is still loading")
        if request.model != encoder.name:
            raise HTTPException(
                status_code=404,
                detail=f"unknown model {request.model!r}; serving {encoder.name!r}",
            )
        if len(request.sequences) > settings.batch_limit:
            raise HTTPException(
                status_code=413,
                detail=f"batch of {len(request.sequences)} sequences exceeds limit "
                f"{settings.batch_limit}",
            )
        for index, sequence in enumerate(request.sequences):
            if not sequence:
                raise HTTPException(status_code=400, detail=f"sequence {index} is empty")
            if any(not token for token in sequence):
                raise HTTPException(
                    status_code=400, detail=f"sequence {index} contains an empty token"
                )
            if len(sequence) > settings.max_tokens:
                raise HTTPException(
                    status_code=413,
                    detail=f"sequence {index} has {len(sequence)} tokens, "
                    f"limit is {settings.max_tokens}",
                )
        vectors = [
            encoder.encode(sequence, layer=settings.layer).tolist()
            for sequence in request.sequences
        ]
        return EmbedResponse(
            request_id=request.request_id,
            model=encoder.name,
            dim=encoder.dim,
            vectors=vectors,
        )

    return app


def load_model(app: FastAPI) -> None:
    """Finish a deferred load (used by tests exercising the loading state)."""
    settings: ServiceSettings = app.state.settings
    try:
        app.state.encoder = MiniTransformerEncoder(settings.model)
    except UnknownModelError as exc:
        raise SystemExit(str(exc)) from exc
