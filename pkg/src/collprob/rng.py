"""Deterministic, splittable random streams.

The generator is pinned: PCG64 seeded through numpy's SeedSequence with
spawn_key=(domain, index).  Sampling work is partitioned into fixed-size
chunks of CHUNK samples; the stream for a chunk is keyed by the chunk index,
which is a pure function of the sample index.  Worker threads only schedule
chunks, so results depend on (seed, samples) alone, never on thread count.
"""
from __future__ import annotations

import os

from numpy.random import Generator, PCG64, SeedSequence

CHUNK = 1 << 16

# domain codes keep streams for different subsystems disjoint
DOMAIN_WALK = 1
DOMAIN_ORACLE = 2
DOMAIN_ARCH = 3
DOMAIN_TRAJECTORY = 4

THREADS_ENV = "COLLPROB_THREADS"


def stream(seed: int, domain: int, index: int = 0) -> Generator:
    """The pinned generator for (seed, domain, index)."""
    return Generator(PCG64(SeedSequence(entropy=seed, spawn_key=(domain, index))))


def chunk_sizes(total: int) -> list[int]:
    """Sizes of the fixed chunks covering `total` samples, in chunk order."""
    if total < 0:
        raise ValueError("total must be non-negative")
    full, rem = divmod(total, CHUNK)
    sizes = [CHUNK] * full
    if rem:
        sizes.append(rem)
    return sizes


def resolve_threads(threads: int | None) -> int:
    """Explicit value, else the COLLPROB_THREADS variable, else 1."""
    if threads is not None:
        if threads < 1:
            raise ValueError("threads must be positive")
        return threads
    env = os.environ.get(THREADS_ENV)
    if env:
        n = int(env)
        if n < 1:
            raise ValueError(f"{THREADS_ENV} must be positive")
        return n
    return 1
