"""Shared test fixtures: an independent reduced-walk enumerator and a CLI runner."""
import os
import subprocess
import sys

import numpy as np
import pytest


def _reduced_walk_sums(n: int, v: int, a: float, q: int = 2):
    """Independently enumerate the two reduced-walk sums by brute force.

    Walks live on the strip {v, ..., n-v} and carry a factor
    f = (q/(q^2+1)) / g per step, g = 1 - lambda_x (1 - e^-a) with
    lambda_x evaluated at x = v.  The first sum weights walks from v by
    f^length over first exits from the strip; the second weights confined
    walks of any length (the empty walk counts 1).  Lengths <= 40 are
    enumerated explicitly via adjacency-matrix powers; the geometric
    remainder is summed exactly with a resolvent so the truncation itself
    introduces no error.
    """
    lam = n * (n - 1) / (2.0 * v * (n - v))
    g = 1.0 - lam * (1.0 - np.exp(-a))
    f = (q / (q ** 2 + 1.0)) / g

    interior = list(range(v, n - v + 1))
    m = len(interior)
    pos = {x: i for i, x in enumerate(interior)}
    adj = np.zeros((m, m))
    for x in interior:
        for y in (x - 1, x + 1):
            if y in pos:
                adj[pos[y], pos[x]] = 1.0

    exit_row = np.zeros(m)
    exit_row[pos[v]] += 1.0      # step v -> v-1 leaves the strip
    exit_row[pos[n - v]] += 1.0  # step n-v -> n-v+1 leaves the strip

    u = np.zeros(m)
    u[pos[v]] = 1.0
    cutoff = 40
    lam_sum = 0.0
    xi_sum = 0.0
    fpow = 1.0
    for _ in range(cutoff):
        xi_sum += fpow * u.sum()
        lam_sum += fpow * f * (exit_row @ u)
        u = adj @ u
        fpow *= f
    xi_sum += fpow * u.sum()

    # exact geometric tails: sum_{k>=1} f^k A^k u = ((I - fA)^-1 - I) u for
    # the confined walks; exits at length 41+j pay f^(41+j) on A^j u_40
    resolvent = np.linalg.inv(np.eye(m) - f * adj)
    xi_sum += fpow * ((resolvent - np.eye(m)) @ u).sum()
    lam_sum += fpow * f * (exit_row @ (resolvent @ u))
    return lam_sum, xi_sum


@pytest.fixture(scope="session")
def reduced_walk_sums():
    return _reduced_walk_sums


def _run_cli(*args, env_extra=None, cwd=None):
    env = os.environ.copy()
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "collprob", *map(str, args)],
        capture_output=True, text=True, env=env, cwd=cwd)


@pytest.fixture(scope="session")
def run_cli():
    return _run_cli
