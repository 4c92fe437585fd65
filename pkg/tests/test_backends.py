import asyncio
import hashlib
import json
import time

import httpx
import pytest

from qsign import backends, qsim
from qsign.backends import (
    ALGORITHM_FALLBACK,
    ALGORITHM_PRIMARY,
    DEVICE_EMBEDDED,
    DEVICE_FALLBACK,
    AlwaysFailBackend,
    BellVector,
    HangingBackend,
    LocalSimulatorBackend,
    RemoteBackend,
    execute_pipeline,
    fallback_result,
)

GOLDEN_FALLBACK = {
    # fallback_result("alice", bytes(range(32)), 1700000000000), frozen on first run
    "q_num": 186,
    "bell": [0.1, 0.46176470588235297, 0.31176470588235294, 0.1264705882352941],
}


class TestBellVector:
    def test_rejects_bad_sum(self):
        with pytest.raises(ValueError):
            BellVector(0.5, 0.5, 0.5, 0.5)

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            BellVector(1.5, -0.5, 0.0, 0.0)


class TestExecutePipeline:
    def test_local_success(self):
        qr = asyncio.run(
            execute_pipeline("alice", LocalSimulatorBackend(), timeout_s=30.0, rng_seed=7)
        )
        assert qr.device == DEVICE_EMBEDDED
        assert qr.algorithm == ALGORITHM_PRIMARY
        assert 0 <= qr.q_num <= 1000
        assert qr.bell.p01 == 0.0 and qr.bell.p10 == 0.0
        assert sum(qr.hist_a.values()) == 100
        assert sum(qr.hist_b.values()) == 200
        assert qr.rng_seed == 7

    def test_determinism(self):
        run = lambda: asyncio.run(
            execute_pipeline("bob", LocalSimulatorBackend(), timeout_s=30.0, rng_seed=11)
        )
        a, b = run(), run()
        assert (a.q_num, a.hist_a, a.hist_b, a.bell) == (b.q_num, b.hist_a, b.hist_b, b.bell)

    def test_failure_degrades_to_fallback(self):
        qr = asyncio.run(
            execute_pipeline("alice", AlwaysFailBackend(), timeout_s=30.0, rng_seed=7)
        )
        assert qr.device == DEVICE_FALLBACK
        assert qr.algorithm == ALGORITHM_FALLBACK
        assert 0 <= qr.q_num <= 1000
        assert abs(sum(qr.bell.as_list()) - 1.0) <= 1e-9

    def test_hanging_backend_respects_timeout(self):
        start = time.monotonic()
        qr = asyncio.run(
            execute_pipeline("alice", HangingBackend(), timeout_s=0.05, rng_seed=7)
        )
        elapsed = time.monotonic() - start
        assert elapsed < 0.2
        assert qr.device == DEVICE_FALLBACK

    def test_rejects_nonpositive_timeout(self):
        with pytest.raises(ValueError):
            asyncio.run(execute_pipeline("a", LocalSimulatorBackend(), timeout_s=0.0))


class TestFallbackResult:
    def test_golden_determinism(self):
        qr = fallback_result("alice", bytes(range(32)), 1700000000000)
        assert qr.q_num == GOLDEN_FALLBACK["q_num"]
        assert qr.bell.as_list() == pytest.approx(GOLDEN_FALLBACK["bell"], abs=1e-15)
        again = fallback_result("alice", bytes(range(32)), 1700000000000)
        assert (qr.q_num, qr.bell) == (again.q_num, again.bell)

    def test_provenance_fields(self):
        qr = fallback_result("x", bytes(32), 0)
        assert qr.device == DEVICE_FALLBACK
        assert qr.algorithm == ALGORITHM_FALLBACK

    def test_nonce_length_checked(self):
        with pytest.raises(ValueError):
            fallback_result("alice", b"short", 0)

    @pytest.mark.parametrize("i", range(20))
    def test_range_and_normalization(self, i):
        nonce = hashlib.sha256(str(i).encode()).digest()
        qr = fallback_result(f"user{i}", nonce, 1000 + i)
        assert 0 <= qr.q_num <= 1000
        assert abs(sum(qr.bell.as_list()) - 1.0) <= 1e-9

    def test_all_zero_bell_bytes_map_to_bell_ends(self, monkeypatch):
        class ZeroDigest:
            def digest(self, n):
                return bytes(n)

        monkeypatch.setattr(backends.hashlib, "shake_256", lambda _: ZeroDigest())
        qr = fallback_result("alice", bytes(32), 0)
        assert qr.bell.as_list() == [0.5, 0.0, 0.0, 0.5]
        assert qr.q_num == 0

    def test_derivation_matches_independent_oracle(self):
        username, ts, nonce = "carol", 123456789, bytes(reversed(range(32)))
        d = hashlib.shake_256(username.encode() + ts.to_bytes(8, "big") + nonce).digest(64)
        qr = fallback_result(username, nonce, ts)
        assert qr.q_num == (d[0] * 256 + d[1]) % 1001
        total = d[2] + d[3] + d[4] + d[5]
        assert qr.bell.as_list() == pytest.approx([d[i] / total for i in (2, 3, 4, 5)])


class FakeRemoteServer:
    """Implements the submit/poll wire contract inside a MockTransport."""

    def __init__(self, fail: bool = False, queued_polls: int = 1):
        self.tasks: dict[str, dict] = {}
        self.fail = fail
        self.queued_polls = queued_polls
        self.polls: dict[str, int] = {}

    def handler(self, request: httpx.Request) -> httpx.Response:
        if request.method == "POST" and request.url.path == "/tasks":
            spec = json.loads(request.content)
            task_id = f"t{len(self.tasks)}"
            self.tasks[task_id] = spec
            self.polls[task_id] = 0
            return httpx.Response(200, json={"task_id": task_id})
        if request.method == "GET" and request.url.path.startswith("/tasks/"):
            task_id = request.url.path.rsplit("/", 1)[1]
            if self.fail:
                return httpx.Response(200, json={"status": "failed"})
            self.polls[task_id] += 1
            if self.polls[task_id] <= self.queued_polls:
                return httpx.Response(200, json={"status": "queued"})
            spec = self.tasks[task_id]
            circuit = self._deserialize(spec)
            counts = qsim.run_circuit(circuit, spec["seed"])
            return httpx.Response(200, json={"status": "completed", "counts": counts})
        return httpx.Response(404)

    @staticmethod
    def _deserialize(spec: dict) -> qsim.Circuit:
        gates = []
        for g in spec["gates"]:
            if g["kind"] == "h":
                gates.append(qsim.Hadamard(g["target"]))
            elif g["kind"] == "cnot":
                gates.append(qsim.CNot(g["control"], g["target"]))
            elif g["kind"] == "ry":
                gates.append(qsim.RotY(g["target"], g["theta"]))
        return qsim.Circuit(spec["num_qubits"], tuple(gates), spec["shots"])


class TestRemoteBackend:
    def make_backend(self, server: FakeRemoteServer) -> RemoteBackend:
        return RemoteBackend(
            "http://quantum.example/",
            credentials="tok",
            poll_interval_s=0.01,
            transport=httpx.MockTransport(server.handler),
        )

    def test_successful_remote_run(self):
        server = FakeRemoteServer()
        qr = asyncio.run(
            execute_pipeline("alice", self.make_backend(server), timeout_s=10.0, rng_seed=5)
        )
        assert qr.device == "remote:quantum.example"
        assert qr.algorithm == ALGORITHM_PRIMARY
        assert sum(qr.hist_a.values()) == 100
        # remote results equal a local run with the same seeds
        local = asyncio.run(
            execute_pipeline("alice", LocalSimulatorBackend(), timeout_s=10.0, rng_seed=5)
        )
        assert qr.hist_a == local.hist_a and qr.hist_b == local.hist_b

    def test_remote_failure_degrades(self):
        server = FakeRemoteServer(fail=True)
        qr = asyncio.run(
            execute_pipeline("alice", self.make_backend(server), timeout_s=10.0, rng_seed=5)
        )
        assert qr.device == DEVICE_FALLBACK

    def test_serialization_shape(self):
        spec = RemoteBackend.serialize_circuit(qsim.circuit_b(), 3)
        assert spec == {
            "num_qubits": 2,
            "gates": [
                {"kind": "h", "target": 0},
                {"kind": "cnot", "target": 1, "control": 0},
            ],
            "shots": 200,
            "seed": 3,
        }


class TestMakeBackend:
    def test_kinds(self):
        assert backends.make_backend("local_simulator").kind == "local_simulator"
        assert backends.make_backend("always_fail").kind == "always_fail"
        assert backends.make_backend("remote_client", "http://x").kind == "remote_client"

    def test_remote_requires_endpoint(self):
        with pytest.raises(ValueError):
            backends.make_backend("remote_client")

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            backends.make_backend("qpu")
