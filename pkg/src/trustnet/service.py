"""HTTP shell over the application core.

Every handler authenticates (where required), forwards raw inputs to the
matching App method, and serializes its dict result with the canonical
JSON encoder; no business logic lives here. Error classes map onto
400/401/403/404/409.
"""

from __future__ import annotations

import json

from fastapi import FastAPI, Request, Response

from .app import App, canonical_json
from .errors import (
    AuthenticationError,
    AuthorizationError,
    ConflictError,
    NotFoundError,
    TrustnetError,
    ValidationError,
)

_STATUS = {
    ValidationError: 400,
    AuthenticationError: 401,
    AuthorizationError: 403,
    NotFoundError: 404,
    ConflictError: 409,
}


def _status_for(exc: TrustnetError) -> int:
    for cls, status in _STATUS.items():
        if isinstance(exc, cls):
            return status
    return 500


def _json_response(payload, status: int = 200) -> Response:
    return Response(
        content=canonical_json(payload),
        status_code=status,
        media_type="application/json",
    )


async def _body_json(request: Request) -> dict:
    raw = await request.body()
    if not raw:
        raise ValidationError("request body is required")
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON body: {exc.msg}") from None


async def _body_text(request: Request) -> str:
    raw = await request.body()
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError:
        raise ValidationError("request body must be UTF-8 text") from None


def create_service(app: App) -> FastAPI:
    service = FastAPI(title="trustnet", docs_url=None, redoc_url=None)

    @service.exception_handler(TrustnetError)
    async def _handle_error(_request: Request, exc: TrustnetError):
        return _json_response(
            {"error": {"type": exc.kind, "message": str(exc)}},
            status=_status_for(exc),
        )

    def _session(request: Request):
        header = request.headers.get("authorization", "")
        token = header[7:] if header.lower().startswith("bearer ") else None
        return app.authenticate(token)

    # -- accounts ---------------------------------------------------------

    @service.post("/register")
    async def register(request: Request):
        return _json_response(app.api_register(await _body_json(request)))

    @service.post("/validate")
    async def validate(request: Request):
        return _json_response(app.api_validate(await _body_json(request)))

    @service.post("/login")
    async def login(request: Request):
        return _json_response(app.api_login(await _body_json(request)))

    # -- trust --------------------------------------------------------------

    @service.put("/trust/{contact}")
    async def put_trust(contact: str, request: Request):
        session = _session(request)
        return _json_response(
            app.api_set_trust(session.user, contact, await _body_json(request))
        )

    @service.get("/trust/{contact}")
    async def get_trust(contact: str, request: Request):
        session = _session(request)
        return _json_response(app.api_get_trust(session.user, contact))

    @service.put("/topic-trust/{contact}/{topic}")
    async def put_topic_trust(contact: str, topic: str, request: Request):
        session = _session(request)
        return _json_response(
            app.api_set_topic_trust(session.user, contact, topic, await _body_json(request))
        )

    @service.get("/topic-trust/{contact}/{topic}")
    async def get_topic_trust(contact: str, topic: str, request: Request):
        session = _session(request)
        return _json_response(app.api_get_topic_trust(session.user, contact, topic))

    @service.get("/experts")
    async def experts(request: Request):
        session = _session(request)
        params = request.query_params
        topic = params.get("topic")
        if not topic:
            raise ValidationError("query parameter topic is required")
        return _json_response(
            app.api_experts(session.user, topic, params.get("threshold"))
        )

    # -- ingest --------------------------------------------------------------

    @service.post("/ingest/posts")
    async def ingest_posts(request: Request):
        _session(request)
        return _json_response(app.api_ingest_posts(await _body_text(request)))

    @service.post("/ingest/events")
    async def ingest_events(request: Request):
        _session(request)
        return _json_response(app.api_ingest_events(await _body_text(request)))

    # -- search ----------------------------------------------------------------

    @service.get("/search")
    async def search(request: Request):
        session = _session(request)
        params = dict(request.query_params)
        return _json_response(app.api_search(session.user, params))

    # -- coefficients -------------------------------------------------------------

    @service.get("/admin/coefficients")
    async def get_coefficients(request: Request):
        session = _session(request)
        return _json_response(app.api_get_coefficients(session.user))

    @service.put("/admin/coefficients")
    async def put_coefficients(request: Request):
        session = _session(request)
        return _json_response(
            app.api_set_coefficients(session.user, await _body_json(request))
        )

    # -- quarantine ------------------------------------------------------------------

    @service.post("/quarantine/submit")
    async def quarantine_submit(request: Request):
        return _json_response(app.api_quarantine_submit(await _body_json(request)))

    @service.post("/quarantine/{candidate}/approve")
    async def quarantine_approve(candidate: str, request: Request):
        session = _session(request)
        return _json_response(app.api_quarantine_approve(session.user, candidate))

    @service.post("/quarantine/{candidate}/flag")
    async def quarantine_flag(candidate: str, request: Request):
        session = _session(request)
        return _json_response(app.api_quarantine_flag(session.user, candidate))

    @service.get("/quarantine")
    async def quarantine_list(request: Request):
        session = _session(request)
        return _json_response(app.api_quarantine_list(session.user))

    # -- forecast ----------------------------------------------------------------------

    @service.get("/forecast/{stream}")
    async def forecast(stream: str, request: Request):
        _session(request)
        return _json_response(app.api_forecast(stream))

    return service


__all__ = ["create_service"]
