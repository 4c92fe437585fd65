from __future__ import annotations

import itertools

import pytest

from qsign import backends, ingest
from qsign.api import ServiceConfig, create_app
from qsign.store import MessageStore

WEBHOOK_SECRET = "test-webhook-secret"
ADMIN_PASSWORD = "test-admin-password"
BOT_HANDLE = "qsign_bot"


def make_update(
    message_id: int = 1,
    text: str | None = None,
    entities: list | None = None,
    caption: str | None = None,
    caption_entities: list | None = None,
    photo: list | None = None,
    username: str | None = "alice_c",
    first_name: str = "Alice",
    date_s: int = 1700000000,
    chat_id: int = -100123,
) -> dict:
    message: dict = {
        "message_id": message_id,
        "date": date_s,
        "chat": {"id": chat_id},
        "from": {"first_name": first_name},
    }
    if username is not None:
        message["from"]["username"] = username
    if text is not None:
        message["text"] = text
    if entities is not None:
        message["entities"] = entities
    if caption is not None:
        message["caption"] = caption
    if caption_entities is not None:
        message["caption_entities"] = caption_entities
    if photo is not None:
        message["photo"] = photo
    return {"update_id": message_id, "message": message}


def mention_update(message_id: int = 1, text: str = f"hi @{BOT_HANDLE}", **kw) -> dict:
    at = text.index("@")
    handle_len = len(f"@{BOT_HANDLE}")
    return make_update(
        message_id=message_id,
        text=text,
        entities=[{"type": "mention", "offset": at, "length": handle_len}],
        **kw,
    )


@pytest.fixture
def store(tmp_path) -> MessageStore:
    return MessageStore(tmp_path / "data")


_seed_counter = itertools.count(1)


def make_ingest_cfg(
    store: MessageStore,
    backend=None,
    timeout_s: float = 10.0,
    photo_fetcher=None,
) -> ingest.IngestConfig:
    """Deterministic ingest config: fixed nonce, sequential seeds."""
    return ingest.IngestConfig(
        bot_handle=BOT_HANDLE,
        store=store,
        backend=backend or backends.LocalSimulatorBackend(),
        timeout_s=timeout_s,
        photo_fetcher=photo_fetcher,
        nonce_source=lambda: bytes(32),
        seed_source=lambda: next(_seed_counter),
        clock_ms=lambda: 1700000000000,
    )


def make_app(tmp_path, backend=None, timeout_s: float = 10.0, **config_kw):
    config = ServiceConfig(
        data_dir=str(tmp_path / "data"),
        webhook_secret=WEBHOOK_SECRET,
        admin_password=ADMIN_PASSWORD,
        bot_handle=BOT_HANDLE,
        timeout_s=timeout_s,
        login_fail_delay_s=0.05,
        **config_kw,
    )
    store = MessageStore(config.data_dir)
    ingest_cfg = make_ingest_cfg(store, backend=backend, timeout_s=timeout_s)
    app = create_app(config, store=store, backend=ingest_cfg.backend, ingest_cfg=ingest_cfg)
    return app, store, ingest_cfg
