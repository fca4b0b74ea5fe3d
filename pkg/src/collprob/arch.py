"""Circuit diagrams: construction, depth, and JSON round-tripping.

A diagram is an ordered sequence of two-qudit gate pairs on n qudits of local
dimension q.  Indices are 0-based everywhere (files included).  The implicit
first layer of n single-qudit gates that every architecture carries is not
stored in the diagram; the configuration-walk modules bake it into their
initial distributions, and the statevector oracle applies it explicitly.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from . import rng


@dataclass(frozen=True)
class QuditParams:
    n: int
    q: int

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError("n must be a positive integer")
        if not isinstance(self.q, int) or self.q < 2:
            raise ValueError("q must be an integer >= 2")


def normalize_gate(a: int, b: int, n: int) -> tuple[int, int]:
    """Validate and order an unordered qudit pair."""
    if a == b:
        raise ValueError(f"gate pair must be two distinct qudits, got ({a}, {b})")
    lo, hi = (a, b) if a < b else (b, a)
    if lo < 0 or hi >= n:
        raise ValueError(f"gate ({a}, {b}) out of range for n={n}")
    return (lo, hi)


@dataclass(frozen=True)
class CircuitDiagram:
    params: QuditParams
    gates: tuple[tuple[int, int], ...]

    def __post_init__(self):
        gates = tuple(normalize_gate(a, b, self.params.n) for a, b in self.gates)
        object.__setattr__(self, "gates", gates)

    @property
    def size(self) -> int:
        return len(self.gates)


def generate_1d(params: QuditParams, s: int) -> CircuitDiagram:
    """Ring of n qudits, alternating brickwork layers of n/2 disjoint gates.

    Layer j (0-based) holds gates {2t-2, 2t-1} for even j and {2t-1, 2t mod n}
    for odd j, t = 1..n/2; requires n even and s a multiple of n/2 so the
    depth d = 2s/n is an integer.
    """
    n = params.n
    if n % 2 != 0:
        raise ValueError("1d architecture requires even n")
    if n < 2:
        raise ValueError("1d architecture requires n >= 2")
    if s < 0 or (s % (n // 2)) != 0:
        raise ValueError("1d architecture requires s to be a multiple of n/2")
    gates = []
    for j in range(2 * s // n):
        for t in range(1, n // 2 + 1):
            if j % 2 == 0:
                gates.append((2 * t - 2, 2 * t - 1))
            else:
                gates.append((2 * t - 1, (2 * t) % n))
    return CircuitDiagram(params, tuple(gates))


def generate_complete_graph(params: QuditParams, s: int, seed: int) -> CircuitDiagram:
    """s gates drawn independently and uniformly from the n(n-1)/2 pairs."""
    n = params.n
    if n < 2:
        raise ValueError("complete-graph architecture requires n >= 2")
    if s < 0:
        raise ValueError("s must be non-negative")
    gen = rng.stream(seed, rng.DOMAIN_ARCH)
    a = gen.integers(0, n, size=s)
    b = gen.integers(0, n - 1, size=s)
    b = b + (b >= a)  # uniform over the n-1 partners distinct from a
    gates = tuple(normalize_gate(int(x), int(y), n) for x, y in zip(a, b))
    return CircuitDiagram(params, gates)


def depth(diagram: CircuitDiagram) -> int:
    """Minimum number of consecutive blocks of pairwise-disjoint gates.

    Greedy left-to-right packing: a gate opens a new block exactly when it
    overlaps the current one.  An exchange argument shows greedy is optimal
    for consecutive-cut partitions, so this equals the true depth.
    """
    blocks = 0
    busy: set[int] = set()
    for a, b in diagram.gates:
        if a in busy or b in busy:
            blocks += 1
            busy = {a, b}
        elif not busy:
            blocks += 1
            busy = {a, b}
        else:
            busy.update((a, b))
    return blocks


def diagram_to_dict(diagram: CircuitDiagram) -> dict:
    return {
        "n": diagram.params.n,
        "q": diagram.params.q,
        "gates": [[a, b] for a, b in diagram.gates],
    }


def diagram_from_dict(doc: dict) -> CircuitDiagram:
    try:
        n = doc["n"]
        q = doc["q"]
        raw = doc["gates"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"diagram document missing field: {exc}") from exc
    params = QuditParams(n, q)
    gates = []
    for entry in raw:
        if len(entry) != 2:
            raise ValueError(f"gate entry must have exactly two indices, got {entry}")
        gates.append(normalize_gate(int(entry[0]), int(entry[1]), n))
    return CircuitDiagram(params, tuple(gates))


def load_diagram(path) -> CircuitDiagram:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"malformed diagram JSON in {path}: {exc}") from exc
    return diagram_from_dict(doc)


def save_diagram(diagram: CircuitDiagram, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(diagram_to_dict(diagram), fh, indent=2)
        fh.write("\n")
