"""Configuration-space Markov chains and Monte Carlo estimators of Z.

A configuration is a length-n uint8 vector, 0 for I and 1 for S.  Two chains
share the same skeleton (a gate resolves a disagreeing pair, agreeing pairs
freeze): the unbiased chain flips either side fairly and weights a trajectory
by (2q/(q^2+1))^flips, the biased chain resolves toward II with probability
q^2/(q^2+1) and weights by q^(final Hamming weight).  Both expectations equal
Z after the appropriate prefactor.

Estimators are chunked: samples are split into fixed blocks of rng.CHUNK,
each with its own pinned stream, so the result depends only on (seed,
samples) no matter how chunks are scheduled across threads.  All per-sample
weights live in log space.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import rng
from .arch import CircuitDiagram, QuditParams
from .records import CollisionEstimate
from .theory import absorption_probabilities, log_z_haar

CHAINS = ("unbiased", "biased")


@dataclass(frozen=True)
class WalkSpec:
    """What to simulate: the diagram, which chain, and the master seed.

    With annealed=True the diagram's gate list supplies only the step count;
    every trajectory redraws each step's pair uniformly (the complete-graph
    architecture average, the ensemble the Hamming DP computes).
    """

    diagram: CircuitDiagram
    chain: str
    seed: int
    annealed: bool = False

    def __post_init__(self):
        if self.chain not in CHAINS:
            raise ValueError(f"chain must be one of {CHAINS}, got {self.chain!r}")
        if self.annealed and self.diagram.params.n < 2:
            raise ValueError("annealed sampling needs n >= 2")


@dataclass(frozen=True, eq=False)
class Trajectory:
    steps: tuple

    @property
    def flips(self) -> int:
        return sum(
            int(np.any(a != b)) for a, b in zip(self.steps, self.steps[1:])
        )


def sample_initial(params: QuditParams, chain: str, rng_gen) -> np.ndarray:
    """Draw a starting configuration: uniform for the unbiased chain, each
    site independently S with probability 1/(q+1) for the biased one."""
    if chain == "unbiased":
        return rng_gen.integers(0, 2, size=params.n, dtype=np.uint8)
    if chain == "biased":
        return (rng_gen.random(params.n) < 1.0 / (params.q + 1)).astype(np.uint8)
    raise ValueError(f"chain must be one of {CHAINS}, got {chain!r}")


def step_unbiased(config: np.ndarray, gate: tuple[int, int], rng_gen) -> np.ndarray:
    a, b = gate
    out = config.copy()
    if out[a] != out[b]:
        if rng_gen.integers(0, 2):
            out[a] = out[b]
        else:
            out[b] = out[a]
    return out


def step_biased(config: np.ndarray, gate: tuple[int, int], q: int, rng_gen) -> np.ndarray:
    a, b = gate
    out = config.copy()
    if out[a] != out[b]:
        val = 0 if rng_gen.random() < q * q / (q * q + 1.0) else 1
        out[a] = val
        out[b] = val
    return out


# ---------------------------------------------------------------------------
# chunked estimators

def _chunk_logweights(spec: WalkSpec, chunk_index: int, size: int) -> np.ndarray:
    """Log-weights of one chunk of trajectories, fully vectorized."""
    params = spec.diagram.params
    n, q = params.n, params.q
    g = rng.stream(spec.seed, rng.DOMAIN_WALK, chunk_index)
    biased = spec.chain == "biased"

    if biased:
        bits = (g.random((size, n)) < 1.0 / (q + 1)).astype(np.uint8)
    else:
        bits = g.integers(0, 2, size=(size, n), dtype=np.uint8)
    flips = np.zeros(size, dtype=np.int64)
    rows = np.arange(size)

    for a, b in spec.diagram.gates:
        if spec.annealed:
            av = g.integers(0, n, size=size)
            bv = g.integers(0, n - 1, size=size)
            bv = bv + (bv >= av)
            left = bits[rows, av]
            right = bits[rows, bv]
        else:
            left = bits[:, a]
            right = bits[:, b]
        dis = left != right
        if biased:
            val = (g.random(size) >= q * q / (q * q + 1.0)).astype(np.uint8)
        else:
            keep_left = g.integers(0, 2, size=size, dtype=np.uint8)
            val = np.where(keep_left, left, right)
        if spec.annealed:
            hit = rows[dis]
            bits[hit, av[dis]] = val[dis]
            bits[hit, bv[dis]] = val[dis]
        else:
            bits[dis, a] = val[dis]
            bits[dis, b] = val[dis]
        flips += dis

    if biased:
        return bits.sum(axis=1, dtype=np.int64) * math.log(q)
    return flips * math.log(2.0 * q / (q * q + 1.0))


def _run_chunks(spec: WalkSpec, samples: int, threads) -> list[tuple]:
    sizes = rng.chunk_sizes(samples)
    workers = rng.resolve_threads(threads)

    def summarize(k: int) -> tuple:
        logw = _chunk_logweights(spec, k, sizes[k])
        m = float(logw.max())
        shifted = np.exp(logw - m)
        return m, float(shifted.sum()), float((shifted * shifted).sum()), len(logw)

    if workers == 1 or len(sizes) == 1:
        return [summarize(k) for k in range(len(sizes))]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(summarize, range(len(sizes))))


def _combine(parts: list[tuple], log_prefactor: float, spec: WalkSpec,
             samples: int, method: str) -> CollisionEstimate:
    m = max(p[0] for p in parts)
    s1 = sum(p[1] * math.exp(p[0] - m) for p in parts)
    s2 = sum(p[2] * math.exp(2.0 * (p[0] - m)) for p in parts)
    total = sum(p[3] for p in parts)
    mean = s1 / total
    var = max(s2 / total - mean * mean, 0.0) * total / max(total - 1, 1)
    log_zh = log_z_haar(spec.diagram.params)
    log_z = log_prefactor + m + math.log(mean)
    scale = math.exp(m + log_prefactor - log_zh)
    return CollisionEstimate(
        log_Z=float(log_z),
        ratio_to_haar=float(math.exp(log_z - log_zh)),
        method=method,
        stderr_ratio=float(math.sqrt(var / total) * scale),
        samples=samples,
        seed=spec.seed,
    )


def estimate_z_unbiased(spec: WalkSpec, samples: int, threads: int | None = None) -> CollisionEstimate:
    """Monte Carlo Z from the unbiased chain: mean of (2q/(q^2+1))^flips
    times 2^n/(q+1)^n.  Deterministic given (seed, samples)."""
    if spec.chain != "unbiased":
        raise ValueError("spec.chain must be 'unbiased'")
    if samples < 1:
        raise ValueError("samples must be positive")
    params = spec.diagram.params
    n, q = params.n, params.q
    log_prefactor = n * math.log(2.0) - n * math.log(q + 1.0)
    parts = _run_chunks(spec, samples, threads)
    return _combine(parts, log_prefactor, spec, samples, "mc-unbiased")


def estimate_z_biased(spec: WalkSpec, samples: int, threads: int | None = None) -> CollisionEstimate:
    """Monte Carlo Z from the biased chain: q^(-n) times the mean of
    q^(final Hamming weight).

    Caveat: the relative variance grows exponentially with n; past n of
    about 30 (q=2, 10^7 samples) the reported stderr is itself unreliable.
    """
    if spec.chain != "biased":
        raise ValueError("spec.chain must be 'biased'")
    if samples < 1:
        raise ValueError("samples must be positive")
    params = spec.diagram.params
    log_prefactor = -params.n * math.log(params.q)
    parts = _run_chunks(spec, samples, threads)
    return _combine(parts, log_prefactor, spec, samples, "mc-biased")


# ---------------------------------------------------------------------------
# Hamming-weight chain (complete-graph dynamics is permutation symmetric,
# so the weight is itself Markov; trajectories are stored as weight series)

def _kernel(params: QuditParams) -> tuple[np.ndarray, np.ndarray]:
    n, q = params.n, params.q
    x = np.arange(n + 1, dtype=float)
    p_move = 2.0 * x * (n - x) / (n * (n - 1.0))
    return p_move * q * q / (q * q + 1.0), p_move / (q * q + 1.0)


def _doob_kernel(params: QuditParams, endpoint: str) -> tuple[np.ndarray, np.ndarray]:
    """Biased kernel conditioned (via its harmonic function) on absorbing at
    the given endpoint; the other fixed point becomes unreachable."""
    n = params.n
    p_down, p_up = _kernel(params)
    h = np.array([absorption_probabilities(x, params)[0] for x in range(n + 1)])
    if endpoint == "S":
        h = 1.0 - h
    with np.errstate(divide="ignore", invalid="ignore"):
        d = np.where(h > 0, p_down * np.roll(h, 1) / h, 0.0)
        u = np.where(h > 0, p_up * np.roll(h, -1) / h, 0.0)
    d[0] = u[n] = 0.0
    return d, u


def _evolve(x: np.ndarray, p_down: np.ndarray, p_up: np.ndarray, n: int,
            max_steps: int, rng_gen, record: bool):
    """Advance all walkers to absorption or max_steps.  Fixed points hold
    themselves (their move probabilities vanish), so no masking is needed."""
    series = [x.copy()] if record else None
    for _ in range(max_steps):
        u = rng_gen.random(x.shape[0])
        down = u < p_down[x]
        up = ~down & (u < p_down[x] + p_up[x])
        x = x - down + up
        if record:
            series.append(x.copy())
        if np.all((x == 0) | (x == n)):
            break
    return x, series


def sample_absorption_trajectories(params: QuditParams, count: int, max_steps: int,
                                   rng_gen, conditioning: str = "none",
                                   start_weight: int | None = None) -> list[np.ndarray]:
    """Hamming-weight time series of biased complete-graph walks.

    conditioning "none": start from the biased product distribution (or the
    fixed start_weight) and run the plain chain.  "endpoint-balanced": pick
    the I or S fixed point by fair coin, draw the start from the matching
    binomial, and run the chain conditioned on that endpoint.  Each returned
    series ends at its absorption step; a series of full length max_steps+1
    whose last weight is interior is an unabsorbed trajectory.
    """
    n, q = params.n, params.q
    if count < 0:
        raise ValueError("count must be non-negative")
    if count == 0:
        return []
    if conditioning not in ("none", "endpoint-balanced"):
        raise ValueError(f"unknown conditioning {conditioning!r}")

    if conditioning == "none":
        if start_weight is None:
            x = rng_gen.binomial(n, 1.0 / (q + 1), size=count)
        else:
            if not 0 <= start_weight <= n:
                raise ValueError("start_weight out of range")
            x = np.full(count, start_weight, dtype=np.int64)
        p_down, p_up = _kernel(params)
        _, series = _evolve(x.astype(np.int64), p_down, p_up, n, max_steps,
                            rng_gen, record=True)
    else:
        to_s = rng_gen.random(count) < 0.5
        x = rng_gen.binomial(n, 1.0 / (q + 1), size=count)
        x_s = rng_gen.binomial(n, q / (q + 1.0), size=count)
        x = np.where(to_s, x_s, x)
        # the opposite fixed point has zero conditioned mass; redraw it
        while True:
            bad_i = ~to_s & (x == n)
            bad_s = to_s & (x == 0)
            bad = bad_i | bad_s
            if not bad.any():
                break
            redraw_i = rng_gen.binomial(n, 1.0 / (q + 1), size=count)
            redraw_s = rng_gen.binomial(n, q / (q + 1.0), size=count)
            x = np.where(bad, np.where(to_s, redraw_s, redraw_i), x)
        di, ui = _doob_kernel(params, "I")
        ds, us = _doob_kernel(params, "S")
        p_down = np.where(to_s[:, None], ds[None, :], di[None, :])
        p_up = np.where(to_s[:, None], us[None, :], ui[None, :])
        # per-walker kernels: gather with the walker's own row
        series = [x.copy()]
        rows = np.arange(count)
        x = x.astype(np.int64)
        for _ in range(max_steps):
            u = rng_gen.random(count)
            pd = p_down[rows, x]
            down = u < pd
            up = ~down & (u < pd + p_up[rows, x])
            x = x - down + up
            series.append(x.copy())
            if np.all((x == 0) | (x == n)):
                break

    mat = np.stack(series, axis=1)
    out = []
    for row in mat:
        hit = np.flatnonzero((row == 0) | (row == n))
        out.append(row[: hit[0] + 1] if hit.size else row)
    return out


def absorption_counts(params: QuditParams, start_weight: int, trials: int,
                      rng_gen, max_steps: int = 100_000) -> tuple[int, int, int]:
    """(absorbed at I, absorbed at S, unabsorbed) for the plain biased chain
    from a fixed start weight.  Series are not stored; use this for large
    trial counts."""
    n = params.n
    if not 0 <= start_weight <= n:
        raise ValueError("start_weight out of range")
    p_down, p_up = _kernel(params)
    x = np.full(trials, start_weight, dtype=np.int64)
    x, _ = _evolve(x, p_down, p_up, n, max_steps, rng_gen, record=False)
    n_i = int(np.count_nonzero(x == 0))
    n_s = int(np.count_nonzero(x == n))
    return n_i, n_s, trials - n_i - n_s
