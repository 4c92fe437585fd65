"""Badge derivation: hash-chain signature plus HSL color encoding.

The badge is a display artifact, not a cryptographic signature: it can be
recomputed (verified) from the stored (username, text, q_num, nonce) but
carries no key pair.
"""
from __future__ import annotations

import base64
import hashlib
import re
from dataclasses import dataclass

from .backends import QuantumResult

GOLDEN_ANGLE_DEG = 137.5

PK_HASH_RE = re.compile(r"^[0-9A-F]{12}$")
SIGNATURE_RE = re.compile(r"^[A-Za-z0-9+/]{24}$")


@dataclass(frozen=True)
class HslColor:
    h: float  # degrees, [0, 360)
    s: float  # percent, [70, 100]
    l: float  # percent, [45, 65]

    def css(self) -> str:
        return f"hsl({self.h:g}, {self.s:g}%, {self.l:g}%)"

    def to_dict(self) -> dict:
        return {"h": self.h, "s": self.s, "l": self.l, "css": self.css()}


@dataclass(frozen=True)
class Badge:
    q_num: int
    pk_hash: str
    signature: str
    color: HslColor
    nonce_hex: str

    def render(self) -> str:
        return f"Q#{self.q_num} | {self.pk_hash}"

    def to_dict(self) -> dict:
        return {
            "q_num": self.q_num,
            "pk_hash": self.pk_hash,
            "signature": self.signature,
            "color": self.color.to_dict(),
            "nonce_hex": self.nonce_hex,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Badge":
        c = d["color"]
        return cls(
            q_num=d["q_num"],
            pk_hash=d["pk_hash"],
            signature=d["signature"],
            color=HslColor(c["h"], c["s"], c["l"]),
            nonce_hex=d["nonce_hex"],
        )


def encode_color(q_num: int, bell: list[float]) -> HslColor:
    """Golden-angle hue from q_num; saturation/lightness from the Bell ends."""
    h = (q_num * GOLDEN_ANGLE_DEG) % 360.0
    s = 70.0 + bell[0] * 30.0
    l = 45.0 + bell[3] * 20.0
    return HslColor(h, s, l)


def signature_material(username: str, message_text: str, q_num: int, nonce: bytes) -> tuple[str, str]:
    """Compute (pk_hash, signature) from the four badge inputs."""
    if len(nonce) != 32:
        raise ValueError("nonce must be exactly 32 bytes")
    seed = hashlib.shake_256(
        username.encode("utf-8") + int(q_num).to_bytes(2, "big") + nonce
    ).digest(64)
    pk_hash = hashlib.sha256(seed[:32]).digest()[:6].hex().upper()
    h_msg = hashlib.sha256(message_text.encode("utf-8")).hexdigest()
    h_ent = hashlib.sha256(str(q_num).encode("ascii")).hexdigest()
    g = hashlib.sha256(f"{h_msg}:{h_ent}:{pk_hash}".encode("ascii")).digest()
    signature = base64.b64encode(g[:18]).decode("ascii")
    return pk_hash, signature


def derive_badge(username: str, message_text: str, qr: QuantumResult, nonce: bytes) -> Badge:
    pk_hash, signature = signature_material(username, message_text, qr.q_num, nonce)
    return Badge(
        q_num=qr.q_num,
        pk_hash=pk_hash,
        signature=signature,
        color=encode_color(qr.q_num, qr.bell.as_list()),
        nonce_hex=nonce.hex(),
    )


def verify_badge(username: str, message_text: str, badge: Badge) -> bool:
    """Recompute pk_hash and signature from the stored inputs and compare."""
    nonce = bytes.fromhex(badge.nonce_hex)
    pk_hash, signature = signature_material(username, message_text, badge.q_num, nonce)
    return pk_hash == badge.pk_hash and signature == badge.signature
