"""Webhook update parsing, mention gating, sanitization, and dispatch.

An update is persisted only when one of its mention entities matches the
configured bot handle (the consent gate). The phase-1 record is written
before the webhook acks; the quantum pipeline runs as a detached task and
attaches the badge in phase 2. Pipeline failure degrades to the local
fallback, never to a lost record or a webhook error.
"""
from __future__ import annotations

import asyncio
import logging
import secrets
import time
from dataclasses import dataclass, field
from typing import Awaitable, Callable, Protocol

from . import backends, sig
from .store import (
    MAX_TEXT_CHARS,
    BlobTooLarge,
    MessageRecord,
    MessageStore,
    Provenance,
)

logger = logging.getLogger(__name__)

ACK_OK = "ok"
ACK_IGNORED = "ignored"

_ENTITY_TABLE = str.maketrans(
    {"&": "&amp;", "<": "&lt;", ">": "&gt;", '"': "&quot;", "'": "&#x27;"}
)


@dataclass(frozen=True)
class MentionDecision:
    mentioned: bool
    matched_text: str | None = None


def sanitize(text: str) -> str:
    """HTML-entity encode user text, then truncate to the storage limit."""
    return text.translate(_ENTITY_TABLE)[:MAX_TEXT_CHARS]


def _utf16_slice(text: str, offset: int, length: int) -> str | None:
    """Slice by UTF-16 code units (the bot platform's entity convention)."""
    units = text.encode("utf-16-le")
    start, end = offset * 2, (offset + length) * 2
    if offset < 0 or length < 0 or end > len(units):
        return None
    try:
        return units[start:end].decode("utf-16-le")
    except UnicodeDecodeError:
        return None


def _scan_entities(text: str | None, entities: list | None, handle: str) -> MentionDecision:
    if not text or not entities:
        return MentionDecision(False)
    wanted = f"@{handle}".casefold()
    for ent in entities:
        if not isinstance(ent, dict) or ent.get("type") != "mention":
            continue
        piece = _utf16_slice(text, int(ent.get("offset", -1)), int(ent.get("length", -1)))
        if piece is None:
            logger.warning("malformed mention entity %r ignored", ent)
            continue
        if piece.casefold() == wanted:
            return MentionDecision(True, piece)
    return MentionDecision(False)


def detect_mention(update: dict, bot_handle: str) -> MentionDecision:
    """Check text entities and photo-caption entities for an @bot mention."""
    message = update.get("message") or {}
    decision = _scan_entities(message.get("text"), message.get("entities"), bot_handle)
    if decision.mentioned:
        return decision
    return _scan_entities(
        message.get("caption"), message.get("caption_entities"), bot_handle
    )


class PhotoFetcher(Protocol):
    """Downloads a platform file by id; returns (bytes, media_type)."""

    async def fetch(self, file_id: str) -> tuple[bytes, str]: ...


class FixturePhotoFetcher:
    """Test fetcher serving from an in-memory mapping."""

    def __init__(self, files: dict[str, bytes] | None = None, media_type: str = "image/jpeg"):
        self.files = files or {}
        self.media_type = media_type

    async def fetch(self, file_id: str) -> tuple[bytes, str]:
        return self.files[file_id], self.media_type


@dataclass
class IngestConfig:
    bot_handle: str
    store: MessageStore
    backend: backends.QuantumBackend
    timeout_s: float = backends.DEFAULT_TIMEOUT_S
    photo_fetcher: PhotoFetcher | None = None
    # injectable for deterministic tests
    nonce_source: Callable[[], bytes] = field(default=lambda: secrets.token_bytes(32))
    seed_source: Callable[[], int] = field(
        default=lambda: secrets.randbits(63)
    )
    clock_ms: Callable[[], int] = field(default=lambda: time.time_ns() // 1_000_000)
    # completed pipeline tasks, kept so tests can await quiescence
    tasks: set = field(default_factory=set)


def _sender_identity(message: dict) -> tuple[str, str]:
    frm = message.get("from") or {}
    first_name = str(frm.get("first_name") or "")
    handle = str(frm.get("username") or "") or first_name
    return first_name, handle


async def _download_photo(update_msg: dict, cfg: IngestConfig) -> str | None:
    photos = update_msg.get("photo") or []
    if not photos or cfg.photo_fetcher is None:
        return None
    best = max(photos, key=lambda p: p.get("file_size", 0))
    declared = best.get("file_size")
    if declared is not None and declared > 20 * 2**20:
        logger.warning("photo %s exceeds the 20 MB limit; stored without photo", best.get("file_id"))
        return None
    try:
        data, media_type = await cfg.photo_fetcher.fetch(best["file_id"])
        return cfg.store.put_blob(data, media_type).key
    except BlobTooLarge:
        logger.warning("downloaded photo exceeds the 20 MB limit; stored without photo")
        return None
    except Exception as exc:
        logger.warning("photo download failed (%s); stored without photo", exc)
        return None


async def _run_pipeline(
    cfg: IngestConfig, group_id: str, message_id: str, username: str, text: str
) -> None:
    qr = await backends.execute_pipeline(
        username, cfg.backend, timeout_s=cfg.timeout_s, rng_seed=cfg.seed_source()
    )
    badge = sig.derive_badge(username, text, qr, cfg.nonce_source())
    provenance = Provenance(
        device=qr.device,
        algorithm=qr.algorithm,
        duration_ms=qr.duration_ms,
        bell=qr.bell.as_list(),
        q_num=qr.q_num,
    )
    try:
        cfg.store.complete_signature(group_id, message_id, badge, provenance)
    except KeyError:
        logger.warning("record %s/%s vanished before completion; dropped", group_id, message_id)


async def handle_update(group_id: str, update: dict, cfg: IngestConfig) -> str:
    """Process one webhook update for a group. Never awaits quantum work."""
    message = update.get("message") or {}
    decision = detect_mention(update, cfg.bot_handle)
    if not decision.mentioned:
        return ACK_IGNORED

    raw_text = message.get("text") or message.get("caption") or ""
    text = sanitize(str(raw_text))
    first_name, handle = _sender_identity(message)
    message_id = str(message.get("message_id", ""))
    if not message_id:
        return ACK_IGNORED
    date_s = message.get("date")
    timestamp_ms = int(date_s) * 1000 if date_s is not None else cfg.clock_ms()

    photo_ref = await _download_photo(message, cfg)

    record = MessageRecord(
        group_id=group_id,
        message_id=message_id,
        timestamp_ms=timestamp_ms,
        sender_name=first_name,
        sender_handle=handle,
        text=text,
        photo_ref=photo_ref,
    )
    cfg.store.put_phase1(record)

    task = asyncio.create_task(_run_pipeline(cfg, group_id, message_id, handle, text))
    cfg.tasks.add(task)
    task.add_done_callback(cfg.tasks.discard)
    return ACK_OK
