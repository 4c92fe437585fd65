"""Randomness-quality checks: chi-square uniformity, min-entropy, Bell symmetry."""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import qsim


def _gamma_q(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x), scalar.

    Series for x < a+1, Lentz continued fraction otherwise (the standard
    split; both converge fast in that regime).
    """
    if a <= 0:
        raise ValueError("a must be positive")
    if x < 0:
        raise ValueError("x must be non-negative")
    if x == 0:
        return 1.0
    lg = math.lgamma(a)
    if x < a + 1.0:
        # P(a,x) by series, Q = 1 - P
        term = 1.0 / a
        total = term
        n = a
        for _ in range(500):
            n += 1.0
            term *= x / n
            total += term
            if abs(term) < abs(total) * 1e-15:
                break
        p = total * math.exp(-x + a * math.log(x) - lg)
        return max(0.0, min(1.0, 1.0 - p))
    # Q(a,x) by continued fraction
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 500):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-15:
            break
    q = h * math.exp(-x + a * math.log(x) - lg)
    return max(0.0, min(1.0, q))


def chi_square_uniformity(hist: dict[str, int], bins: int) -> dict[str, float]:
    """Pearson chi-square of a shot histogram against uniform over `bins`."""
    if bins < 2:
        raise ValueError("need at least 2 bins")
    shots = sum(hist.values())
    if shots <= 0:
        raise ValueError("histogram has no shots")
    expected = shots / bins
    n = bins.bit_length() - 1
    if 1 << n != bins:
        raise ValueError("bins must be a power of two (2^num_qubits)")
    statistic = sum(
        (hist.get(format(i, f"0{n}b"), 0) - expected) ** 2 / expected for i in range(bins)
    )
    p_value = _gamma_q((bins - 1) / 2.0, statistic / 2.0)
    return {"statistic": statistic, "p_value": p_value}


def min_entropy_estimate(samples: list[int]) -> float:
    """Most-common-value min-entropy: -log2(max empirical frequency)."""
    if not samples:
        raise ValueError("no samples")
    counts: dict[int, int] = {}
    for s in samples:
        counts[s] = counts.get(s, 0) + 1
    p_max = max(counts.values()) / len(samples)
    return -math.log2(p_max)


def bell_symmetry_report(hist_b: dict[str, int]) -> dict[str, float]:
    """Summarize a Bell-pair histogram: end probabilities and cross mass."""
    p = qsim.bell_probabilities(hist_b)
    return {"p00": p[0], "p11": p[3], "cross_mass": p[1] + p[2]}


def run_report(shots: int, seed: int, qnum_runs: int = 100) -> dict:
    """Run both circuits at scale and bundle the quality checks.

    Circuit A runs with zero rotations (the analytically uniform case);
    min-entropy is estimated over q_num draws from seeded random usernames.
    """
    hist_a = qsim.run_circuit(qsim.circuit_a([0.0] * 4, shots=shots), seed)
    hist_b = qsim.run_circuit(qsim.circuit_b(shots=shots), seed + 1)

    import numpy as np

    rng = np.random.default_rng(seed)
    qnums = []
    for i in range(qnum_runs):
        name = "".join(chr(int(c)) for c in rng.integers(33, 127, size=8))
        angles = qsim.derive_rotation_angles(name)
        h = qsim.run_circuit(qsim.circuit_a(angles), int(rng.integers(0, 2**62)))
        qnums.append(qsim.extract_qnum(h))

    return {
        "shots": shots,
        "seed": seed,
        "chi_square_circuit_a": chi_square_uniformity(hist_a, 16),
        "bell_symmetry_circuit_b": bell_symmetry_report(hist_b),
        "min_entropy_qnum_bits": min_entropy_estimate(qnums),
        "qnum_runs": qnum_runs,
    }


def format_report(report: dict) -> str:
    chi = report["chi_square_circuit_a"]
    bell = report["bell_symmetry_circuit_b"]
    lines = [
        f"shots: {report['shots']}  seed: {report['seed']}",
        f"circuit A chi-square (16 bins): statistic={chi['statistic']:.4f} p={chi['p_value']:.6f}",
        f"circuit B bell symmetry: p00={bell['p00']:.4f} p11={bell['p11']:.4f} cross={bell['cross_mass']:.4f}",
        f"q_num min-entropy over {report['qnum_runs']} runs: {report['min_entropy_qnum_bits']:.3f} bits",
    ]
    return "\n".join(lines)
