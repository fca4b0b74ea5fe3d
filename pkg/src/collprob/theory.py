"""Closed-form quantities: the Haar collision value, fixed-point weights,
strip trajectory sums, absorption probabilities, the tilted branching factor
qbar with its reduced-walk sums, the six architecture bound evaluators, and
the Paley-Zygmund fraction.

Everything here is a pure function of (n, q) and a handful of reals.  Bounds
are evaluated in log space and reported relative to the Haar value, so they
stay finite far past the range where Z itself underflows.
"""
from __future__ import annotations

import math

import numpy as np

from .arch import QuditParams
from .records import BoundReport

THEOREMS = ("gen-ub", "gen-lb", "1d-ub", "1d-lb", "cg-ub", "cg-lb")


def log_z_haar(params: QuditParams) -> float:
    """log of the global-Haar collision probability 2/(q^n + 1)."""
    n, q = params.n, params.q
    return math.log(2.0) - np.logaddexp(n * math.log(q), 0.0)


def z_haar(params: QuditParams) -> float:
    return math.exp(log_z_haar(params))


def fixed_point_weight_Q(x: int, params: QuditParams) -> float:
    """Total weight of trajectories from weight x into either fixed point.

    Boundary-consistent solution of the weight recursion: Q(0) = Q(n) = 1,
    interior Q(x) = (q^x + q^(n-x))/(q^n + 1).
    """
    n, q = params.n, params.q
    if not 0 <= x <= n:
        raise ValueError(f"x must lie in [0, {n}], got {x}")
    # log-space: Q can underflow mid-strip for large n, but the ratio form
    # (q^x + q^(n-x))/(q^n + 1) keeps exponents paired
    num = np.logaddexp(x * math.log(q), (n - x) * math.log(q))
    den = np.logaddexp(n * math.log(q), 0.0)
    return float(math.exp(num - den))


def trajectory_sum(x: int, y: int, m: int, params: QuditParams) -> float:
    """Weighted sum over trajectories from weight x that reach y before y+m,
    for an unbounded gate supply.

    Requires y <= x < y + m.
    """
    q = params.q
    if not y <= x < y + m:
        raise ValueError(f"need y <= x < y+m, got x={x}, y={y}, m={m}")
    lq = math.log(q)
    num = math.exp(-(x - y) * lq) - math.exp((-2 * m + x - y) * lq)
    den = -math.expm1(-2 * m * lq)
    return num / den


def reach_probability(x: int, y: int, m: int, params: QuditParams) -> float:
    """Probability the biased walk started at x hits weight y before y+m."""
    q = params.q
    if not y <= x < y + m:
        raise ValueError(f"need y <= x < y+m, got x={x}, y={y}, m={m}")
    lq = math.log(q)
    num = -math.expm1((-2 * m + 2 * (x - y)) * lq)
    den = -math.expm1(-2 * m * lq)
    return num / den


def absorption_probabilities(x: int, params: QuditParams) -> tuple[float, float]:
    """(P_I, P_S): chance the biased walk from weight x is absorbed at the
    all-identity / all-swap fixed point."""
    n, q = params.n, params.q
    if not 0 <= x <= n:
        raise ValueError(f"x must lie in [0, {n}], got {x}")
    lq = math.log(q)
    p_i = math.expm1((-2 * n + 2 * x) * lq) / math.expm1(-2 * n * lq)
    return p_i, 1.0 - p_i


def _lambda_x(x: int, n: int) -> float:
    if not 0 < x < n:
        raise ValueError(f"x must lie strictly inside (0, {n}), got {x}")
    return n * (n - 1) / (2.0 * x * (n - x))


def qbar(x: int, a: float, params: QuditParams) -> float:
    """Tilted local dimension for the complete-graph walk at weight x.

    Solves qbar/(qbar^2+1) = (q/(q^2+1)) / (1 - lambda_x (1 - e^-a)); real
    only while e^a <= (1 - (q-1)^2/((q^2+1) lambda_x))^-1.
    """
    n, q = params.n, params.q
    lam = _lambda_x(x, n)
    if a < 0:
        raise ValueError("a must be non-negative")
    cap = 1.0 / (1.0 - (q - 1) ** 2 / ((q * q + 1) * lam))
    if math.exp(a) > cap * (1 + 1e-12):
        raise ValueError(
            f"e^a = {math.exp(a):.6g} exceeds {cap:.6g}; qbar would be complex"
        )
    g = 1.0 - lam * (-math.expm1(-a))
    rad = 1.0 - 4.0 * q * q / ((q * q + 1) ** 2 * g * g)
    rad = max(rad, 0.0)  # clamp the precondition-tolerance sliver
    return (q * q + 1) / (2.0 * q) * g * (1.0 + math.sqrt(rad))


def lemma_sums(v: int, a: float, params: QuditParams) -> tuple[float, float]:
    """Closed forms of the two reduced-walk sums over the strip [v, n-v].

    lambda_sum weights first-exit walks, xi_sum weights confined walks (the
    empty walk included); both are geometric in qbar(v, a).
    """
    n = params.n
    qb = qbar(v, a, params)
    lqb = math.log(qb)
    lam_sum = (
        math.exp(-lqb)
        * (1.0 + math.exp((-n + 2 * v) * lqb))
        / (1.0 + math.exp((-n + 2 * v - 2) * lqb))
    )
    xi_sum = (qb * qb + 1.0) / (qb - 1.0) ** 2 * (1.0 - lam_sum)
    return lam_sum, xi_sum


def paley_zygmund_fraction(alpha: float, beta: float) -> float:
    """Lower bound alpha (1-beta)^2 on the heavy-output mass."""
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    if not 0 <= beta <= 1:
        raise ValueError("beta must lie in [0, 1]")
    return alpha * (1.0 - beta) ** 2


# ---------------------------------------------------------------------------
# theorem bound evaluators

def _ub_report(theorem, params, s, a, s_star, constants) -> BoundReport:
    # upper bounds share the shape Z <= Z_H (1 + e^(-(2a/n)(s - s*)))
    n = params.n
    excess = -(2.0 * a / n) * (s - s_star)
    log_ratio = np.logaddexp(0.0, excess)
    return BoundReport(
        theorem=theorem,
        constants=constants,
        log_bound=float(log_z_haar(params) + log_ratio),
        ratio_to_haar_bound=float(math.exp(log_ratio)),
        applicable=bool(s >= s_star),
    )


def _lb_report(theorem, params, term, constants, applicable) -> BoundReport:
    # lower bounds share the shape Z >= (Z_H/2) exp(term), term >= 0
    log_ratio = term - math.log(2.0)
    ratio = math.exp(log_ratio) if log_ratio < 700 else math.inf
    return BoundReport(
        theorem=theorem,
        constants=constants,
        log_bound=float(log_z_haar(params) + log_ratio),
        ratio_to_haar_bound=float(ratio),
        applicable=applicable,
    )


def _one_d_constants(n: int, q: int) -> tuple[float, float]:
    a = math.log((q * q + 1) / (2.0 * q))
    s_star = n * math.log(n) / (2 * a) + n * (math.log(math.e - 1) / (2 * a) + 0.5)
    return a, s_star


def bound(theorem: str, params: QuditParams, s: float, *, r: float | None = None,
          slack: float = 0.0) -> BoundReport:
    """Evaluate one of the six architecture bounds on Z at circuit size s.

    gen-ub needs the connectivity parameter r (and accepts an additive slack
    on its s*, default 0).  Preconditions are reported, not enforced: an
    out-of-range query returns applicable=False with the raw value.
    """
    n, q = params.n, params.q
    if s < 0:
        raise ValueError("s must be non-negative")

    if theorem == "1d-ub":
        a, s_star = _one_d_constants(n, q)
        return _ub_report(theorem, params, s, a, s_star,
                          {"a": a, "s_star": s_star})

    if theorem == "1d-lb":
        a, s_star = _one_d_constants(n, q)
        c = 3.0 * math.exp(10)
        big_a = 1.0 / (8 * c * math.e)
        a_prime = math.log(8 * c * math.e * (math.e - 1)) / (2 * a) + 0.5
        term = big_a * math.exp(math.log(n) - 2 * a * s / n)
        return _lb_report(theorem, params, term,
                          {"a": a, "s_star": s_star, "c": c, "A": big_a,
                           "A_prime": a_prime},
                          applicable=bool(s_star - s >= a_prime * n))

    if theorem == "gen-ub":
        if r is None:
            raise ValueError("gen-ub requires the connectivity parameter r")
        if r <= 0:
            raise ValueError("r must be positive")
        a = math.log(2.0 * (q * q + 1) / (q + 1) ** 2) / (2 * r)
        s_star = math.log(2.0 * q / (q + 1)) / (2 * a) * n * n + slack
        return _ub_report(theorem, params, s, a, s_star,
                          {"a": a, "s_star": s_star, "r": r, "slack": slack})

    if theorem == "gen-lb":
        coef = math.log(q) / (q + 1)
        term = coef * math.exp(math.log(n) - (2.0 * s / n) * math.log(q * q + 1))
        return _lb_report(theorem, params, term, {"coefficient": coef},
                          applicable=True)

    if theorem == "cg-ub":
        a = (q - 1) ** 2 / (2.0 * (q * q + 1))
        # the proof's additive constant; the (q^n+1)/q^n factor is evaluated
        # at the queried n, where it is within 2^-n of 1
        log_corr = math.log(320 * (q - 1) / 9.0) + np.logaddexp(n * math.log(q), 0.0) - n * math.log(q)
        c = (
            (q * q + 1) / (2.0 * (q * q - 1))
            + (q * q + 1) ** 3 * (q - 1) ** 2 / (q * q - 1) ** 3 * (math.pi ** 2 / 6)
            + (q * q + 1) / (q - 1) ** 2
            * (log_corr + q * q / (q * q - 1.0) + 4 * math.log(q))
        )
        s_star = (q * q + 1) / (2.0 * (q * q - 1)) * n * math.log(n) + c * n
        return _ub_report(theorem, params, s, a, s_star,
                          {"a": a, "s_star": s_star, "c": float(c)})

    if theorem == "cg-lb":
        coef = math.log(q) / (q + 1)
        shrink = 1.0 - 2.0 * (q * q - 1) / (n * (q * q + 1))
        term = coef * math.exp(math.log(n) + s * math.log(shrink))
        return _lb_report(theorem, params, term,
                          {"coefficient": coef, "shrink": shrink},
                          applicable=True)

    raise ValueError(f"unknown theorem {theorem!r}; expected one of {THEOREMS}")


def coefficient_table(q: int) -> list[dict]:
    """Leading-order anti-concentration size coefficients at local dimension q.

    One row per architecture/side: the complete-graph and 1D sizes scale as
    coefficient * n log n, the general upper bound as coefficient * r * n^2,
    and the general lower bound as coefficient * n log n.
    """
    if q < 2:
        raise ValueError("q must be >= 2")
    a_1d = math.log((q * q + 1) / (2.0 * q))
    return [
        {"architecture": "general", "side": "upper", "scaling": "r*n^2",
         "coefficient": math.log(2.0 * q / (q + 1))
                        / math.log(2.0 * (q * q + 1) / (q + 1) ** 2)},
        {"architecture": "general", "side": "lower", "scaling": "n*log(n)",
         "coefficient": 1.0 / (2 * math.log(q * q + 1))},
        {"architecture": "1d", "side": "upper", "scaling": "n*log(n)",
         "coefficient": 1.0 / (2 * a_1d)},
        {"architecture": "1d", "side": "lower", "scaling": "n*log(n)",
         "coefficient": 1.0 / (2 * a_1d)},
        {"architecture": "complete-graph", "side": "upper", "scaling": "n*log(n)",
         "coefficient": (q * q + 1) / (2.0 * (q * q - 1))},
        {"architecture": "complete-graph", "side": "lower", "scaling": "n*log(n)",
         "coefficient": (q * q + 1) / (2.0 * (q * q - 1))},
    ]
