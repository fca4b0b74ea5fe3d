"""Ground truth by brute force: statevector simulation with sampled Haar
gates, estimating Z with no trajectory machinery at all.

Deliberately desk-scale (memory guard on q^n): this module exists to
validate the mapping the rest of the toolkit relies on, not to compete
with it.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import rng
from .arch import CircuitDiagram
from .errors import GuardError
from .records import CollisionEstimate
from .theory import log_z_haar

STATE_GUARD = 1 << 26
CHUNK_INSTANCES = 8192
# cap on simultaneously held amplitudes (states per sub-batch times q^n)
BATCH_AMPLITUDES = 1 << 23


def _haar_batch(dim: int, count: int, rng_gen) -> np.ndarray:
    """count independent Haar unitaries of the given dimension, stacked.

    Ginibre matrix, QR, then each column rotated by the phase that makes the
    R diagonal real positive; that correction makes the QR factor exactly
    Haar rather than merely column-orthonormal.
    """
    g = rng_gen.standard_normal((count, dim, dim)) \
        + 1j * rng_gen.standard_normal((count, dim, dim))
    qmat, rmat = np.linalg.qr(g)
    d = np.diagonal(rmat, axis1=-2, axis2=-1)
    return qmat * (d / np.abs(d))[:, None, :]


def sample_haar_gate(q: int, rng_gen) -> np.ndarray:
    """One Haar-random two-qudit gate, a q^2 x q^2 complex unitary."""
    if q < 2:
        raise ValueError("q must be >= 2")
    return _haar_batch(q * q, 1, rng_gen)[0]


def apply_gate(state: np.ndarray, gate: np.ndarray, pair: tuple[int, int]) -> np.ndarray:
    """Contract a two-qudit gate against legs (a, b) of a flat statevector."""
    m = gate.shape[0]
    q = math.isqrt(m)
    if q * q != m or gate.shape != (m, m):
        raise ValueError("gate must be a q^2 x q^2 matrix")
    n = round(math.log(state.size, q))
    if q ** n != state.size:
        raise ValueError("state length is not a power of q")
    a, b = pair
    if not (0 <= a < n and 0 <= b < n and a != b):
        raise ValueError(f"pair ({a}, {b}) invalid for n={n}")
    arr = np.moveaxis(state.reshape((q,) * n), (a, b), (n - 2, n - 1))
    arr = np.einsum("ijkl,...kl->...ij", gate.reshape(q, q, q, q), arr)
    return np.moveaxis(arr, (n - 2, n - 1), (a, b)).reshape(-1)


def _apply_two_qudit_batch(states, gates, a, b, n, q):
    arr = np.moveaxis(states.reshape((-1,) + (q,) * n), (1 + a, 1 + b), (n - 1, n))
    arr = np.einsum("bijkl,b...kl->b...ij", gates.reshape(-1, q, q, q, q), arr)
    return np.moveaxis(arr, (n - 1, n), (1 + a, 1 + b)).reshape(states.shape)


def _apply_single_qudit_batch(states, gates, i, n, q):
    arr = np.moveaxis(states.reshape((-1,) + (q,) * n), 1 + i, n)
    arr = np.einsum("bij,b...j->b...i", gates, arr)
    return np.moveaxis(arr, n, 1 + i).reshape(states.shape)


def estimate_z_haar_mc(diagram: CircuitDiagram, instances: int, seed: int,
                       threads: int | None = None) -> CollisionEstimate:
    """Z from direct simulation: q^n times the mean of p^2, where p is the
    return probability of the start basis state under one sampled circuit
    instance (fresh single-qudit Haar layer, then the diagram's gates)."""
    n, q = diagram.params.n, diagram.params.q
    dim = q ** n
    if dim > STATE_GUARD:
        raise GuardError(f"q^n = {dim} exceeds the statevector guard {STATE_GUARD}")
    if instances < 1:
        raise ValueError("instances must be positive")

    sizes = [CHUNK_INSTANCES] * (instances // CHUNK_INSTANCES)
    if instances % CHUNK_INSTANCES:
        sizes.append(instances % CHUNK_INSTANCES)
    batch = max(1, min(CHUNK_INSTANCES, BATCH_AMPLITUDES // dim))

    def run_chunk(k: int):
        g = rng.stream(seed, rng.DOMAIN_ORACLE, k)
        total = 0.0
        total_sq = 0.0
        left = sizes[k]
        while left:
            b = min(batch, left)
            left -= b
            states = np.zeros((b, dim), dtype=np.complex128)
            states[:, 0] = 1.0
            for i in range(n):
                states = _apply_single_qudit_batch(
                    states, _haar_batch(q, b, g), i, n, q)
            for a, bq in diagram.gates:
                states = _apply_two_qudit_batch(
                    states, _haar_batch(q * q, b, g), a, bq, n, q)
            p = np.abs(states[:, 0]) ** 2
            w = dim * p * p
            total += float(w.sum())
            total_sq += float((w * w).sum())
        return total, total_sq

    workers = rng.resolve_threads(threads)
    if workers == 1 or len(sizes) == 1:
        parts = [run_chunk(k) for k in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run_chunk, range(len(sizes))))

    total = sum(p[0] for p in parts)
    total_sq = sum(p[1] for p in parts)
    mean = total / instances
    var = max(total_sq / instances - mean * mean, 0.0) \
        * instances / max(instances - 1, 1)
    stderr = math.sqrt(var / instances)
    zh = math.exp(log_z_haar(diagram.params))
    return CollisionEstimate(
        log_Z=float(math.log(mean)),
        ratio_to_haar=float(mean / zh),
        method="oracle-haar",
        stderr_ratio=float(stderr / zh),
        samples=instances,
        seed=seed,
    )
