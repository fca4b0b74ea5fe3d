"""Result records shared by the exact, stochastic, oracle, and bound evaluators.

All collision-probability results are reported both as a natural log and as a
ratio to the Haar value, so that results stay meaningful when Z itself
underflows double precision.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class CollisionEstimate:
    """A single collision-probability result.

    stderr_ratio is the standard error of ratio_to_haar and is absent (None)
    for exact methods; seed and samples are absent for exact methods too.
    """

    log_Z: float
    ratio_to_haar: float
    method: str
    stderr_ratio: float | None = None
    samples: int | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.ratio_to_haar < 0:
            raise ValueError("ratio_to_haar must be non-negative")

    def to_dict(self) -> dict:
        d = {"log_Z": self.log_Z, "ratio_to_haar": self.ratio_to_haar,
             "method": self.method}
        if self.stderr_ratio is not None:
            d["stderr_ratio"] = self.stderr_ratio
        if self.samples is not None:
            d["samples"] = self.samples
        if self.seed is not None:
            d["seed"] = self.seed
        return d


@dataclass(frozen=True)
class BoundReport:
    """An evaluated theorem bound at a single (n, q, s) point.

    constants holds the architecture constants actually used (a, s_star, A,
    A_prime, c, r as applicable).  applicable is False whenever the theorem's
    stated precondition fails at the queried point; the raw value is still
    reported.
    """

    theorem: str
    constants: dict = field(default_factory=dict)
    log_bound: float = math.nan
    ratio_to_haar_bound: float = math.nan
    applicable: bool = False

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "constants": dict(self.constants),
            "log_bound": self.log_bound,
            "ratio_to_haar_bound": self.ratio_to_haar_bound,
            "applicable": self.applicable,
        }


@dataclass(frozen=True)
class RunRecord:
    """Self-describing record of one CLI invocation."""

    command: str
    parameters: dict
    result: object
    wall_time: float
    toolkit_version: str

    def to_dict(self) -> dict:
        result = self.result
        if isinstance(result, (CollisionEstimate, BoundReport)):
            result = result.to_dict()
        return {
            "command": self.command,
            "parameters": dict(self.parameters),
            "result": result,
            "wall_time": self.wall_time,
            "toolkit_version": self.toolkit_version,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False)
