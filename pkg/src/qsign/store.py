"""File-backed, group-scoped message and blob persistence.

Layout under the data directory:

    messages/<group>/<messageId>.json   one UTF-8 JSON document per record
    blobs/<sha256> + <sha256>.meta      content-addressed photo bytes

Records carry a two-phase signature status: phase 1 writes the message
with status "generating"; phase 2 atomically attaches the badge and
provenance and flips the status to "completed". Soft delete only sets
hidden=true; the record, badge and provenance are preserved for audit.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path
from urllib.parse import quote, unquote

from .sig import Badge

logger = logging.getLogger(__name__)

MAX_TEXT_CHARS = 4096
MAX_BLOB_BYTES = 20 * 2**20

STATUS_GENERATING = "generating"
STATUS_COMPLETED = "completed"


@dataclass(frozen=True)
class Provenance:
    device: str
    algorithm: str
    duration_ms: int
    bell: list[float]
    q_num: int

    def to_dict(self) -> dict:
        return {
            "device": self.device,
            "algorithm": self.algorithm,
            "duration_ms": self.duration_ms,
            "bell": self.bell,
            "q_num": self.q_num,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Provenance":
        return cls(d["device"], d["algorithm"], d["duration_ms"], list(d["bell"]), d["q_num"])


@dataclass
class MessageRecord:
    group_id: str
    message_id: str
    timestamp_ms: int
    sender_name: str
    sender_handle: str
    text: str
    photo_ref: str | None = None
    position: dict | None = None  # {"x_pct": float, "y_pct": float}
    hidden: bool = False
    signature_status: str = STATUS_GENERATING
    badge: Badge | None = None
    provenance: Provenance | None = None

    def sort_key(self) -> tuple[int, str]:
        return (self.timestamp_ms, self.message_id)

    def to_dict(self) -> dict:
        return {
            "group_id": self.group_id,
            "message_id": self.message_id,
            "timestamp_ms": self.timestamp_ms,
            "sender_name": self.sender_name,
            "sender_handle": self.sender_handle,
            "text": self.text,
            "photo_ref": self.photo_ref,
            "position": self.position,
            "hidden": self.hidden,
            "signature_status": self.signature_status,
            "badge": self.badge.to_dict() if self.badge else None,
            "provenance": self.provenance.to_dict() if self.provenance else None,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MessageRecord":
        return cls(
            group_id=d["group_id"],
            message_id=d["message_id"],
            timestamp_ms=d["timestamp_ms"],
            sender_name=d["sender_name"],
            sender_handle=d["sender_handle"],
            text=d["text"],
            photo_ref=d.get("photo_ref"),
            position=d.get("position"),
            hidden=d.get("hidden", False),
            signature_status=d.get("signature_status", STATUS_GENERATING),
            badge=Badge.from_dict(d["badge"]) if d.get("badge") else None,
            provenance=Provenance.from_dict(d["provenance"]) if d.get("provenance") else None,
        )


@dataclass(frozen=True)
class BlobRef:
    key: str
    size_bytes: int
    media_type: str


class BlobTooLarge(ValueError):
    pass


class MessageStore:
    """Single-node store; safe for concurrent readers, serialized writes."""

    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.messages_dir = self.data_dir / "messages"
        self.blobs_dir = self.data_dir / "blobs"
        self.messages_dir.mkdir(parents=True, exist_ok=True)
        self.blobs_dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.RLock()
        self._records: dict[tuple[str, str], MessageRecord] = {}
        self._load()

    def _load(self) -> None:
        for group_dir in self.messages_dir.iterdir():
            if not group_dir.is_dir():
                continue
            group_id = unquote(group_dir.name)
            for path in group_dir.glob("*.json"):
                try:
                    rec = MessageRecord.from_dict(json.loads(path.read_text("utf-8")))
                except (ValueError, KeyError) as exc:
                    logger.error("skipping unreadable record %s: %s", path, exc)
                    continue
                self._records[(group_id, rec.message_id)] = rec

    def _record_path(self, group_id: str, message_id: str) -> Path:
        gdir = self.messages_dir / quote(group_id, safe="")
        gdir.mkdir(parents=True, exist_ok=True)
        return gdir / f"{quote(message_id, safe='')}.json"

    def _persist(self, rec: MessageRecord) -> None:
        path = self._record_path(rec.group_id, rec.message_id)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(rec.to_dict(), ensure_ascii=False, sort_keys=True), "utf-8")
        os.replace(tmp, path)

    # -- message operations -------------------------------------------------

    def put_phase1(self, record: MessageRecord) -> None:
        if record.signature_status != STATUS_GENERATING or record.badge is not None:
            raise ValueError("phase-1 records must be badge-less and 'generating'")
        if len(record.text) > MAX_TEXT_CHARS:
            raise ValueError("text exceeds the ingest limit")
        with self._lock:
            key = (record.group_id, record.message_id)
            if key in self._records:  # webhook retry
                return
            self._records[key] = record
            self._persist(record)

    def complete_signature(
        self, group_id: str, message_id: str, badge: Badge, provenance: Provenance
    ) -> None:
        with self._lock:
            rec = self._records.get((group_id, message_id))
            if rec is None:
                raise KeyError(f"no record {group_id}/{message_id}")
            if rec.signature_status == STATUS_COMPLETED:
                return
            rec.signature_status = STATUS_COMPLETED
            rec.badge = badge
            rec.provenance = provenance
            self._persist(rec)

    def get(self, group_id: str, message_id: str) -> MessageRecord | None:
        with self._lock:
            return self._records.get((group_id, message_id))

    def list_messages(self, group_id: str, since_ms: int | None = None) -> list[MessageRecord]:
        with self._lock:
            recs = [
                r
                for (g, _), r in self._records.items()
                if g == group_id and not r.hidden and (since_ms is None or r.timestamp_ms > since_ms)
            ]
        return sorted(recs, key=MessageRecord.sort_key)

    def admin_list(self, group_id: str) -> list[MessageRecord]:
        with self._lock:
            recs = [r for (g, _), r in self._records.items() if g == group_id]
        return sorted(recs, key=MessageRecord.sort_key)

    def soft_delete(self, group_id: str, message_id: str) -> None:
        with self._lock:
            rec = self._records.get((group_id, message_id))
            if rec is None:
                raise KeyError(f"no record {group_id}/{message_id}")
            if not rec.hidden:
                rec.hidden = True
                self._persist(rec)

    def set_position(self, group_id: str, message_id: str, x_pct: float, y_pct: float) -> None:
        if not (0.0 <= x_pct <= 100.0 and 0.0 <= y_pct <= 100.0):
            raise ValueError("position percentages must be in [0,100]")
        with self._lock:
            rec = self._records.get((group_id, message_id))
            if rec is None:
                raise KeyError(f"no record {group_id}/{message_id}")
            rec.position = {"x_pct": x_pct, "y_pct": y_pct}
            self._persist(rec)

    def record_count(self, group_id: str | None = None) -> int:
        with self._lock:
            if group_id is None:
                return len(self._records)
            return sum(1 for (g, _) in self._records if g == group_id)

    def group_ids(self) -> list[str]:
        with self._lock:
            return sorted({g for (g, _) in self._records})

    def group_summary(self, group_id: str) -> dict:
        visible = self.list_messages(group_id)
        counts: dict[str, int] = {}
        for rec in visible:
            counts[rec.sender_handle] = counts.get(rec.sender_handle, 0) + 1
        leaderboard = [
            {"sender_handle": h, "count": c}
            for h, c in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
        ]
        return {
            "group_id": group_id,
            "message_count": len(visible),
            "leaderboard": leaderboard,
        }

    # -- blob operations -----------------------------------------------------

    def put_blob(self, data: bytes, media_type: str) -> BlobRef:
        if len(data) > MAX_BLOB_BYTES:
            raise BlobTooLarge(f"blob of {len(data)} bytes exceeds the 20 MB limit")
        key = hashlib.sha256(data).hexdigest()
        with self._lock:
            path = self.blobs_dir / key
            if not path.exists():
                tmp = path.with_suffix(".tmp")
                tmp.write_bytes(data)
                os.replace(tmp, path)
                (self.blobs_dir / f"{key}.meta").write_text(media_type, "utf-8")
        return BlobRef(key=key, size_bytes=len(data), media_type=media_type)

    def get_blob(self, key: str) -> tuple[bytes, str] | None:
        if "/" in key or "\\" in key or "." in key:
            return None
        path = self.blobs_dir / key
        if not path.exists():
            return None
        meta = self.blobs_dir / f"{key}.meta"
        media_type = meta.read_text("utf-8") if meta.exists() else "application/octet-stream"
        return path.read_bytes(), media_type
