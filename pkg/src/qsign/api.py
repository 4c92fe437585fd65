"""HTTP surface: webhook ingest, public wall, admin moderation, health.

Field names on the wire match the persisted record encoding (snake_case);
the full contract lives in docs/api-contract.md.
"""
from __future__ import annotations

import asyncio
import hmac
import secrets
import time
from dataclasses import dataclass, field

from fastapi import Depends, FastAPI, HTTPException, Query, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from . import backends, ingest
from .store import MessageRecord, MessageStore

DEFAULT_SECRET_HEADER = "X-Telegram-Bot-Api-Secret-Token"
DEFAULT_TOKEN_TTL_S = 12 * 3600


@dataclass
class ServiceConfig:
    data_dir: str
    webhook_secret: str
    admin_password: str
    bot_handle: str = "qsign_bot"
    backend_kind: str = "local_simulator"
    backend_endpoint: str = ""
    backend_credentials: str = ""
    timeout_s: float = backends.DEFAULT_TIMEOUT_S
    ui_origin: str = ""
    secret_header: str = DEFAULT_SECRET_HEADER
    token_ttl_s: int = DEFAULT_TOKEN_TTL_S
    login_fail_delay_s: float = 0.5


class TokenRegistry:
    """In-memory bearer tokens with TTL."""

    def __init__(self, ttl_s: int):
        self.ttl_s = ttl_s
        self._tokens: dict[str, float] = {}

    def issue(self) -> str:
        token = secrets.token_hex(32)
        self._tokens[token] = time.monotonic() + self.ttl_s
        return token

    def valid(self, token: str) -> bool:
        expiry = self._tokens.get(token)
        if expiry is None:
            return False
        if time.monotonic() > expiry:
            del self._tokens[token]
            return False
        return True


class PositionPatch(BaseModel):
    id: str
    x_pct: float = Field(ge=0.0, le=100.0)
    y_pct: float = Field(ge=0.0, le=100.0)


class AdminLogin(BaseModel):
    password: str


def public_projection(rec: MessageRecord) -> dict:
    d = rec.to_dict()
    del d["hidden"]
    if d["photo_ref"]:
        d["photo_url"] = f"/api/photos/{d['photo_ref']}"
    else:
        d["photo_url"] = None
    return d


def admin_projection(rec: MessageRecord) -> dict:
    d = rec.to_dict()
    d["photo_url"] = f"/api/photos/{d['photo_ref']}" if d["photo_ref"] else None
    return d


def create_app(
    config: ServiceConfig,
    store: MessageStore | None = None,
    backend: backends.QuantumBackend | None = None,
    ingest_cfg: ingest.IngestConfig | None = None,
) -> FastAPI:
    store = store or MessageStore(config.data_dir)
    backend = backend or backends.make_backend(
        config.backend_kind, config.backend_endpoint, config.backend_credentials
    )
    ingest_cfg = ingest_cfg or ingest.IngestConfig(
        bot_handle=config.bot_handle,
        store=store,
        backend=backend,
        timeout_s=config.timeout_s,
    )
    tokens = TokenRegistry(config.token_ttl_s)
    started = time.monotonic()

    app = FastAPI(title="qsign", docs_url=None, redoc_url=None)
    app.state.store = store
    app.state.backend = backend
    app.state.ingest_cfg = ingest_cfg
    app.state.tokens = tokens

    if config.ui_origin:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=[config.ui_origin],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    def require_bearer(request: Request) -> None:
        auth = request.headers.get("Authorization", "")
        if not auth.startswith("Bearer ") or not tokens.valid(auth[7:]):
            raise HTTPException(status_code=401, detail="invalid or missing bearer token")

    @app.post("/api/webhook/{group_id}")
    async def webhook(group_id: str, request: Request):
        provided = request.headers.get(config.secret_header, "")
        if not hmac.compare_digest(provided, config.webhook_secret):
            raise HTTPException(status_code=401, detail="bad webhook secret")
        try:
            update = await request.json()
            if not isinstance(update, dict):
                raise ValueError("update must be a JSON object")
        except ValueError:
            raise HTTPException(status_code=400, detail="malformed update body")
        status = await ingest.handle_update(group_id, update, ingest_cfg)
        return {"status": status}

    @app.get("/api/messages/{group_id}")
    async def get_messages(group_id: str, since: int | None = Query(default=None)):
        records = store.list_messages(group_id, since_ms=since)
        summary = store.group_summary(group_id)
        return {
            "messages": [public_projection(r) for r in records],
            "leaderboard": summary["leaderboard"],
        }

    @app.delete("/api/messages/{group_id}", dependencies=[Depends(require_bearer)])
    async def delete_message(group_id: str, id: str = Query(...)):
        try:
            store.soft_delete(group_id, id)
        except KeyError:
            raise HTTPException(status_code=404, detail="unknown message id")
        return {"status": "deleted"}

    @app.patch("/api/messages/{group_id}", dependencies=[Depends(require_bearer)])
    async def patch_position(group_id: str, patch: PositionPatch):
        try:
            store.set_position(group_id, patch.id, patch.x_pct, patch.y_pct)
        except KeyError:
            raise HTTPException(status_code=404, detail="unknown message id")
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {"status": "positioned"}

    @app.get("/api/groups")
    async def get_groups():
        return {"groups": [store.group_summary(g) for g in store.group_ids()]}

    @app.post("/api/admin")
    async def admin_login(body: AdminLogin):
        if not hmac.compare_digest(body.password, config.admin_password):
            await asyncio.sleep(config.login_fail_delay_s)
            raise HTTPException(status_code=401, detail="wrong password")
        return {"token": tokens.issue(), "expires_in_s": config.token_ttl_s}

    @app.get("/api/health")
    async def health():
        return {
            "status": "ok",
            "backend": backend.kind,
            "uptime_s": int(time.monotonic() - started),
        }

    @app.get("/api/admin/messages/{group_id}", dependencies=[Depends(require_bearer)])
    async def admin_messages(group_id: str):
        return {"messages": [admin_projection(r) for r in store.admin_list(group_id)]}

    @app.get("/api/photos/{key}")
    async def get_photo(key: str):
        blob = store.get_blob(key)
        if blob is None:
            raise HTTPException(status_code=404, detail="unknown photo")
        data, media_type = blob
        return Response(content=data, media_type=media_type)

    return app
