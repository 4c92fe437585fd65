"""Quantum-execution backends and the timeout-raced pipeline.

`execute_pipeline` runs Circuit A then Circuit B against a backend and
races the pair against a timeout. Any failure or timeout degrades to a
locally derived result; the caller never sees an exception. Provenance
(device, algorithm, duration, seed) records which path produced the
numbers.
"""
from __future__ import annotations

import asyncio
import hashlib
import logging
import time
from dataclasses import dataclass, field
from typing import Protocol, runtime_checkable

import httpx

from . import qsim

logger = logging.getLogger(__name__)

DEVICE_EMBEDDED = "SV1-embedded"
DEVICE_FALLBACK = "local-fallback"
ALGORITHM_PRIMARY = "ToyLWE-Braket-SV1"
ALGORITHM_FALLBACK = "ToyLWE-local-fallback"

DEFAULT_TIMEOUT_S = 30.0


@dataclass(frozen=True)
class BellVector:
    p00: float
    p01: float
    p10: float
    p11: float

    def __post_init__(self):
        total = self.p00 + self.p01 + self.p10 + self.p11
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"bell probabilities sum to {total}, not 1")
        for p in self.as_list():
            if not 0.0 <= p <= 1.0:
                raise ValueError("bell probabilities must be in [0,1]")

    def as_list(self) -> list[float]:
        return [self.p00, self.p01, self.p10, self.p11]


@dataclass(frozen=True)
class QuantumResult:
    q_num: int
    bell: BellVector
    hist_a: dict[str, int]
    hist_b: dict[str, int]
    device: str
    algorithm: str
    duration_ms: int
    rng_seed: int

    @property
    def is_fallback(self) -> bool:
        return self.device == DEVICE_FALLBACK


@runtime_checkable
class QuantumBackend(Protocol):
    """Async circuit executor returning a shot histogram."""

    kind: str
    device_name: str

    async def run(self, circuit: qsim.Circuit, rng_seed: int) -> dict[str, int]: ...


class LocalSimulatorBackend:
    """In-process state-vector execution; the default backend."""

    kind = "local_simulator"
    device_name = DEVICE_EMBEDDED

    async def run(self, circuit: qsim.Circuit, rng_seed: int) -> dict[str, int]:
        return qsim.run_circuit(circuit, rng_seed)


class AlwaysFailBackend:
    """Test double: every run raises."""

    kind = "always_fail"
    device_name = "never"

    async def run(self, circuit: qsim.Circuit, rng_seed: int) -> dict[str, int]:
        raise RuntimeError("backend configured to fail")


class HangingBackend:
    """Test double: never completes (cancellable)."""

    kind = "hanging"
    device_name = "never"

    async def run(self, circuit: qsim.Circuit, rng_seed: int) -> dict[str, int]:
        await asyncio.sleep(3600)
        raise RuntimeError("unreachable")


class RemoteBackend:
    """Client for the job-submit/poll HTTP contract.

    POST <endpoint>/tasks {num_qubits, gates, shots, seed} -> {task_id}
    GET  <endpoint>/tasks/{task_id} -> {status, counts?}
    """

    kind = "remote_client"

    def __init__(
        self,
        endpoint: str,
        credentials: str = "",
        device_id: str | None = None,
        poll_interval_s: float = 0.25,
        transport: httpx.AsyncBaseTransport | None = None,
    ):
        self.endpoint = endpoint.rstrip("/")
        self.credentials = credentials
        self.device_name = device_id or f"remote:{httpx.URL(endpoint).host}"
        self.poll_interval_s = poll_interval_s
        self._transport = transport

    @staticmethod
    def serialize_circuit(circuit: qsim.Circuit, rng_seed: int) -> dict:
        gates = []
        for g in circuit.gates:
            if isinstance(g, qsim.Hadamard):
                gates.append({"kind": "h", "target": g.target})
            elif isinstance(g, qsim.CNot):
                gates.append({"kind": "cnot", "target": g.target, "control": g.control})
            elif isinstance(g, qsim.RotY):
                gates.append({"kind": "ry", "target": g.target, "theta": g.theta})
        return {
            "num_qubits": circuit.num_qubits,
            "gates": gates,
            "shots": circuit.shots,
            "seed": rng_seed,
        }

    async def run(self, circuit: qsim.Circuit, rng_seed: int) -> dict[str, int]:
        headers = {}
        if self.credentials:
            headers["Authorization"] = f"Bearer {self.credentials}"
        async with httpx.AsyncClient(transport=self._transport, headers=headers) as client:
            resp = await client.post(
                f"{self.endpoint}/tasks", json=self.serialize_circuit(circuit, rng_seed)
            )
            resp.raise_for_status()
            task_id = resp.json()["task_id"]
            while True:
                resp = await client.get(f"{self.endpoint}/tasks/{task_id}")
                resp.raise_for_status()
                body = resp.json()
                status = body["status"]
                if status == "completed":
                    return {str(k): int(v) for k, v in body["counts"].items()}
                if status == "failed":
                    raise RuntimeError(f"remote task {task_id} failed")
                await asyncio.sleep(self.poll_interval_s)


def make_backend(kind: str, endpoint: str = "", credentials: str = "") -> QuantumBackend:
    if kind == "local_simulator":
        return LocalSimulatorBackend()
    if kind == "remote_client":
        if not endpoint:
            raise ValueError("remote_client backend needs an endpoint")
        return RemoteBackend(endpoint, credentials)
    if kind == "always_fail":
        return AlwaysFailBackend()
    raise ValueError(f"unknown backend kind {kind!r}")


def fallback_result(username: str, nonce: bytes, timestamp_ms: int) -> QuantumResult:
    """Locally derived stand-in when the backend fails or times out.

    D = SHAKE-256(utf8(username) ++ be64(timestamp) ++ nonce), 64 bytes;
    q_num = (D[0]*256 + D[1]) mod 1001; bell = normalize(D[2..5]), with an
    all-zero slice mapped to [0.5, 0, 0, 0.5]. Pure function of its inputs.
    """
    if len(nonce) != 32:
        raise ValueError("nonce must be exactly 32 bytes")
    material = username.encode("utf-8") + int(timestamp_ms).to_bytes(8, "big") + nonce
    d = hashlib.shake_256(material).digest(64)
    q_num = (d[0] * 256 + d[1]) % 1001
    raw = [float(d[2]), float(d[3]), float(d[4]), float(d[5])]
    total = sum(raw)
    if total == 0.0:
        bell = BellVector(0.5, 0.0, 0.0, 0.5)
    else:
        bell = BellVector(*(v / total for v in raw))
    return QuantumResult(
        q_num=q_num,
        bell=bell,
        hist_a={},
        hist_b={},
        device=DEVICE_FALLBACK,
        algorithm=ALGORITHM_FALLBACK,
        duration_ms=0,
        rng_seed=0,
    )


async def execute_pipeline(
    username: str,
    backend: QuantumBackend,
    timeout_s: float = DEFAULT_TIMEOUT_S,
    rng_seed: int = 0,
    *,
    fallback_nonce: bytes | None = None,
    now_ms: int | None = None,
) -> QuantumResult:
    """Run Circuit A then B on the backend, racing the pair against the timeout.

    Never raises: any backend failure or timeout yields a fallback result
    flagged with local-fallback provenance.
    """
    if timeout_s <= 0:
        raise ValueError("timeout must be positive")
    start = time.monotonic()
    thetas = qsim.derive_rotation_angles(username)

    async def _run_both() -> tuple[dict[str, int], dict[str, int]]:
        hist_a = await backend.run(qsim.circuit_a(thetas), rng_seed)
        hist_b = await backend.run(qsim.circuit_b(), rng_seed + 1)
        return hist_a, hist_b

    try:
        hist_a, hist_b = await asyncio.wait_for(_run_both(), timeout=timeout_s)
        q_num = qsim.extract_qnum(hist_a)
        bell = BellVector(*qsim.bell_probabilities(hist_b))
        duration_ms = int((time.monotonic() - start) * 1000)
        return QuantumResult(
            q_num=q_num,
            bell=bell,
            hist_a=hist_a,
            hist_b=hist_b,
            device=backend.device_name,
            algorithm=ALGORITHM_PRIMARY,
            duration_ms=duration_ms,
            rng_seed=rng_seed,
        )
    except (Exception, asyncio.TimeoutError) as exc:
        logger.warning("quantum backend degraded to local fallback: %s", exc)
        ts = now_ms if now_ms is not None else time.time_ns() // 1_000_000
        if fallback_nonce is None:
            fallback_nonce = hashlib.shake_256(
                b"qsign-fallback" + rng_seed.to_bytes(8, "big", signed=False)
            ).digest(32)
        result = fallback_result(username, fallback_nonce, ts)
        duration_ms = int((time.monotonic() - start) * 1000)
        return QuantumResult(
            q_num=result.q_num,
            bell=result.bell,
            hist_a={},
            hist_b={},
            device=DEVICE_FALLBACK,
            algorithm=ALGORITHM_FALLBACK,
            duration_ms=duration_ms,
            rng_seed=rng_seed,
        )
