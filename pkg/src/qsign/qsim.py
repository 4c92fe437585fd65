"""State-vector simulation of the two fixed identity circuits.

Convention: qubit 0 is the most-significant bit of every bitstring and of
every state-vector index. Circuit A is the 4-qubit RNG (H on all wires,
CNOT chain 0->1->2->3, then a username-seeded Ry on each wire, 100 shots).
Circuit B prepares the Bell pair (H(0), CNOT(0->1), 200 shots).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

MAX_QUBITS = 4
NORM_TOL = 1e-12

CIRCUIT_A_SHOTS = 100
CIRCUIT_B_SHOTS = 200


@dataclass(frozen=True)
class Hadamard:
    target: int


@dataclass(frozen=True)
class CNot:
    control: int
    target: int


@dataclass(frozen=True)
class RotY:
    target: int
    theta: float


Gate = Hadamard | CNot | RotY


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    gates: tuple[Gate, ...]
    shots: int

    def __post_init__(self):
        if not 1 <= self.num_qubits <= MAX_QUBITS:
            raise ValueError(f"num_qubits must be in [1,{MAX_QUBITS}], got {self.num_qubits}")
        if self.shots <= 0:
            raise ValueError("shots must be positive")


class StateVector:
    """Normalized complex amplitude array over 2^n basis states."""

    __slots__ = ("num_qubits", "amplitudes")

    def __init__(self, num_qubits: int, amplitudes: np.ndarray | None = None):
        if not 1 <= num_qubits <= MAX_QUBITS:
            raise ValueError(f"num_qubits must be in [1,{MAX_QUBITS}]")
        self.num_qubits = num_qubits
        if amplitudes is None:
            amps = np.zeros(1 << num_qubits, dtype=np.complex128)
            amps[0] = 1.0
        else:
            amps = np.asarray(amplitudes, dtype=np.complex128).copy()
            if amps.shape != (1 << num_qubits,):
                raise ValueError("amplitude length must be 2^num_qubits")
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"state not normalized: |psi|^2 = {norm}")
        self.amplitudes = amps

    def probabilities(self) -> np.ndarray:
        p = np.abs(self.amplitudes) ** 2
        return p / p.sum()

    def _bit_mask(self, qubit: int) -> int:
        # qubit 0 = MSB
        return 1 << (self.num_qubits - 1 - qubit)


def _check_index(state: StateVector, qubit: int) -> None:
    if not 0 <= qubit < state.num_qubits:
        raise IndexError(f"qubit index {qubit} out of range for {state.num_qubits} qubits")


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    """Return a new state transformed by the gate's unitary."""
    amps = state.amplitudes.copy()
    n = state.num_qubits

    if isinstance(gate, (Hadamard, RotY)):
        _check_index(state, gate.target)
        if isinstance(gate, Hadamard):
            u = np.array([[1, 1], [1, -1]], dtype=np.complex128) / math.sqrt(2)
        else:
            if not math.isfinite(gate.theta):
                raise ValueError("theta must be finite")
            c, s = math.cos(gate.theta / 2), math.sin(gate.theta / 2)
            u = np.array([[c, -s], [s, c]], dtype=np.complex128)
        mask = state._bit_mask(gate.target)
        idx = np.arange(1 << n)
        i0 = idx[(idx & mask) == 0]
        i1 = i0 | mask
        a0, a1 = amps[i0].copy(), amps[i1].copy()
        amps[i0] = u[0, 0] * a0 + u[0, 1] * a1
        amps[i1] = u[1, 0] * a0 + u[1, 1] * a1
    elif isinstance(gate, CNot):
        _check_index(state, gate.control)
        _check_index(state, gate.target)
        if gate.control == gate.target:
            raise ValueError("CNOT control and target must differ")
        cmask = state._bit_mask(gate.control)
        tmask = state._bit_mask(gate.target)
        idx = np.arange(1 << n)
        src = idx[((idx & cmask) != 0) & ((idx & tmask) == 0)]
        dst = src | tmask
        amps[src], amps[dst] = amps[dst].copy(), amps[src].copy()
    else:
        raise TypeError(f"unknown gate {gate!r}")

    norm = float(np.sum(np.abs(amps) ** 2))
    assert abs(norm - 1.0) <= 1e-9, "gate broke normalization"
    amps /= math.sqrt(norm)
    return StateVector(n, amps)


def run_state(circuit: Circuit) -> StateVector:
    """Apply all gates to |0...0> and return the final state."""
    state = StateVector(circuit.num_qubits)
    for gate in circuit.gates:
        state = apply_gate(state, gate)
    return state


def run_circuit(circuit: Circuit, rng_seed: int) -> dict[str, int]:
    """Sample `shots` outcomes from the final Born distribution.

    Deterministic: identical (circuit, seed) gives an identical histogram.
    Keys are bitstrings with qubit 0 as the most-significant bit; zero-count
    outcomes are omitted.
    """
    state = run_state(circuit)
    probs = state.probabilities()
    rng = np.random.default_rng(rng_seed)
    counts = rng.multinomial(circuit.shots, probs)
    n = circuit.num_qubits
    return {format(i, f"0{n}b"): int(c) for i, c in enumerate(counts) if c > 0}


def derive_rotation_angles(username: str) -> list[float]:
    """Map a username to the four Ry angles, pi*(code mod 128)/128 each.

    Usernames shorter than four characters index cyclically; an empty
    username yields all-zero angles.
    """
    if not username:
        return [0.0, 0.0, 0.0, 0.0]
    return [math.pi * (ord(username[i % len(username)]) % 128) / 128 for i in range(4)]


def circuit_a(thetas: list[float], shots: int = CIRCUIT_A_SHOTS) -> Circuit:
    """4-qubit RNG circuit: H x4, CNOT chain, seeded Ry x4."""
    if len(thetas) != 4:
        raise ValueError("circuit A needs exactly 4 rotation angles")
    gates: list[Gate] = [Hadamard(q) for q in range(4)]
    gates += [CNot(q, q + 1) for q in range(3)]
    gates += [RotY(q, thetas[q]) for q in range(4)]
    return Circuit(num_qubits=4, gates=tuple(gates), shots=shots)


def circuit_b(shots: int = CIRCUIT_B_SHOTS) -> Circuit:
    """2-qubit Bell-pair circuit: H(0), CNOT(0->1)."""
    return Circuit(num_qubits=2, gates=(Hadamard(0), CNot(0, 1)), shots=shots)


def extract_qnum(hist: dict[str, int]) -> int:
    """Most-frequent bitstring as an integer, mod 1001.

    Ties break toward the lexicographically smallest bitstring, so the
    result is a pure function of the histogram shape (count scaling does
    not change it).
    """
    if not hist:
        raise ValueError("histogram is empty")
    top = min(hist, key=lambda b: (-hist[b], b))
    return int(top, 2) % 1001


def bell_probabilities(hist: dict[str, int]) -> list[float]:
    """[P(00), P(01), P(10), P(11)] from a 2-qubit histogram."""
    shots = sum(hist.values())
    if shots <= 0:
        raise ValueError("histogram has no shots")
    return [hist.get(b, 0) / shots for b in ("00", "01", "10", "11")]
