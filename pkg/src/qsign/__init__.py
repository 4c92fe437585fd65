"""Quantum-randomness-seeded identity badges for chat-event participants."""

from .backends import (
    BellVector,
    LocalSimulatorBackend,
    QuantumResult,
    RemoteBackend,
    execute_pipeline,
    fallback_result,
)
from .qsim import (
    Circuit,
    StateVector,
    bell_probabilities,
    circuit_a,
    circuit_b,
    derive_rotation_angles,
    extract_qnum,
    run_circuit,
)
from .sig import Badge, HslColor, derive_badge, encode_color, verify_badge
from .store import MessageRecord, MessageStore, Provenance

__all__ = [
    "Badge",
    "BellVector",
    "Circuit",
    "HslColor",
    "LocalSimulatorBackend",
    "MessageRecord",
    "MessageStore",
    "Provenance",
    "QuantumResult",
    "RemoteBackend",
    "StateVector",
    "bell_probabilities",
    "circuit_a",
    "circuit_b",
    "derive_badge",
    "derive_rotation_angles",
    "encode_color",
    "execute_pipeline",
    "extract_qnum",
    "fallback_result",
    "run_circuit",
    "verify_badge",
]
