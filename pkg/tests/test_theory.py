import math

import numpy as np
import pytest

from collprob import (QuditParams, absorption_probabilities, bound,
                      coefficient_table, fixed_point_weight_Q, lemma_sums,
                      log_z_haar, paley_zygmund_fraction, qbar,
                      reach_probability, trajectory_sum,
                      z_complete_graph_exact, z_haar)


def test_z_haar_values():
    assert z_haar(QuditParams(1, 2)) == pytest.approx(2 / 3, rel=1e-15)
    assert z_haar(QuditParams(2, 2)) == pytest.approx(0.4, rel=1e-15)
    ref = math.log(2) - math.log(2 ** 60 + 1)
    assert log_z_haar(QuditParams(60, 2)) == pytest.approx(ref, rel=1e-15)


def test_fixed_point_weight_boundaries_and_symmetry():
    for n, q in ((5, 2), (12, 3)):
        params = QuditParams(n, q)
        assert fixed_point_weight_Q(0, params) == 1.0
        assert fixed_point_weight_Q(n, params) == 1.0
        for x in range(n + 1):
            assert fixed_point_weight_Q(x, params) == \
                fixed_point_weight_Q(n - x, params)


def test_fixed_point_weight_sums_to_haar_value():
    # sum_x C(n,x) Q(x) / (q+1)^n recovers the Haar collision probability
    for n, q in ((2, 2), (5, 2), (10, 3), (50, 2), (200, 2)):
        params = QuditParams(n, q)
        total = sum(
            math.comb(n, x) / float((q + 1) ** n) * fixed_point_weight_Q(x, params)
            for x in range(n + 1))
        assert total == pytest.approx(z_haar(params), rel=1e-12)


def test_trajectory_sum_factors_through_reach_probability():
    for q in (2, 3, 5):
        params = QuditParams(10, q)
        for m in (3, 7):
            for y in (0, 2):
                for x in range(y, y + m):
                    t = trajectory_sum(x, y, m, params)
                    r = reach_probability(x, y, m, params)
                    assert t == pytest.approx(q ** (-(x - y)) * r, rel=1e-12)


def test_trajectory_sum_decomposes_fixed_point_weight():
    # Q(x) splits into the two absorbing contributions over the full strip
    for n, q in ((6, 2), (10, 3), (13, 2)):
        params = QuditParams(n, q)
        for x in range(1, n):
            both = trajectory_sum(x, 0, n, params) + \
                trajectory_sum(n - x, 0, n, params)
            assert both == pytest.approx(
                fixed_point_weight_Q(x, params), rel=1e-12)


def test_absorption_probabilities():
    for n, q in ((12, 2), (9, 3)):
        params = QuditParams(n, q)
        p_i0, p_s0 = absorption_probabilities(0, params)
        assert (p_i0, p_s0) == (1.0, 0.0)
        p_in, p_sn = absorption_probabilities(n, params)
        assert p_in == pytest.approx(0.0, abs=1e-15)
        assert p_sn == pytest.approx(1.0, rel=1e-15)
        prev = 2.0
        for x in range(n + 1):
            p_i, p_s = absorption_probabilities(x, params)
            assert p_i + p_s == pytest.approx(1.0, rel=1e-15)
            assert p_i < prev
            prev = p_i
        # harmonic under the biased kernel: q^2 h(x-1) + h(x+1) = (q^2+1) h(x)
        for x in range(1, n):
            lhs = q * q * absorption_probabilities(x - 1, params)[0] + \
                absorption_probabilities(x + 1, params)[0]
            rhs = (q * q + 1) * absorption_probabilities(x, params)[0]
            assert lhs == pytest.approx(rhs, rel=1e-12)


def test_qbar_reduces_to_q_at_zero_tilt():
    for n in (4, 8, 20):
        params = QuditParams(n, 2)
        for x in range(1, n):
            assert qbar(x, 0.0, params) == pytest.approx(2.0, rel=1e-12)


def test_qbar_solves_its_defining_equation():
    rng = np.random.default_rng(7)
    for _ in range(100):
        n = int(rng.integers(4, 40))
        q = int(rng.integers(2, 6))
        x = int(rng.integers(1, n))
        params = QuditParams(n, q)
        lam = n * (n - 1) / (2.0 * x * (n - x))
        cap = 1.0 / (1.0 - (q - 1) ** 2 / ((q * q + 1) * lam))
        a = float(rng.uniform(0.0, math.log(cap)))
        g = 1.0 - lam * (1.0 - math.exp(-a))
        qb = qbar(x, a, params)
        assert qb / (qb * qb + 1) == pytest.approx(
            (q / (q * q + 1.0)) / g, rel=1e-10)
        # the two roots of the quadratic are reciprocal
        rad = 1.0 - 4.0 * q * q / ((q * q + 1) ** 2 * g * g)
        other = (q * q + 1) / (2.0 * q) * g * (1.0 - math.sqrt(max(rad, 0.0)))
        assert qb * other == pytest.approx(1.0, rel=1e-10)


def test_qbar_precondition():
    params = QuditParams(8, 2)
    # x=4: lambda = 1.75, cap = 1.129...; a = 0.2 exceeds log(cap)
    with pytest.raises(ValueError):
        qbar(4, 0.2, params)
    with pytest.raises(ValueError):
        qbar(4, -0.1, params)


LEMMA_TABLE = {
    # (v, a) -> (lam_sum, xi_sum) at n=8, q=2
    (1, 0.0): (0.5058365758754864, 2.470817120622568),
    (1, 0.01): (0.5455197981542265, 2.7240536771924186),
    (2, 0.0): (0.5230769230769231, 2.3846153846153846),
    (2, 0.01): (0.5477073678702578, 2.4990630649616317),
    (3, 0.0): (0.5882352941176471, 2.0588235294117645),
    (3, 0.01): (0.6103419630768389, 2.107856185424058),
}


def test_lemma_sums_frozen_values():
    params = QuditParams(8, 2)
    for (v, a), (lam_ref, xi_ref) in LEMMA_TABLE.items():
        lam, xi = lemma_sums(v, a, params)
        assert lam == pytest.approx(lam_ref, rel=1e-12)
        assert xi == pytest.approx(xi_ref, rel=1e-12)


def test_lemma_sums_two_site_case():
    # n=2, v=1, a=0: the strip is the single point x=1; the only exits are
    # the two length-1 steps, each weighted 2/5, and the only confined walk
    # is the empty one
    lam, xi = lemma_sums(1, 0.0, QuditParams(2, 2))
    assert lam == pytest.approx(0.8, rel=1e-14)
    assert xi == pytest.approx(1.0, rel=1e-14)


def test_lemma_sums_against_enumeration(reduced_walk_sums):
    params = QuditParams(8, 2)
    lam_ref, xi_ref = reduced_walk_sums(8, 2, 0.01, 2)
    lam, xi = lemma_sums(2, 0.01, params)
    assert lam == pytest.approx(lam_ref, rel=1e-9)
    assert xi == pytest.approx(xi_ref, rel=1e-9)


def test_1d_upper_bound_report():
    params = QuditParams(60, 2)
    rep = bound("1d-ub", params, 700.0)
    assert rep.theorem == "1d-ub"
    assert rep.constants["a"] == pytest.approx(math.log(5 / 4), rel=1e-15)
    assert rep.constants["s_star"] == pytest.approx(653.2314655117465, rel=1e-12)
    assert rep.applicable
    assert rep.ratio_to_haar_bound == pytest.approx(1.7061907485855554, rel=1e-12)
    assert rep.log_bound == pytest.approx(
        math.log(rep.ratio_to_haar_bound) + log_z_haar(params), rel=1e-12)
    assert not bound("1d-ub", params, 500.0).applicable

    rep100 = bound("1d-ub", QuditParams(100, 2), 2000.0)
    assert rep100.constants["a"] == pytest.approx(math.log(5 / 4), rel=1e-15)
    assert rep100.applicable


def test_1d_lower_bound_constants_and_applicability():
    c = 3 * math.e ** 10
    rep = bound("1d-lb", QuditParams(60, 2), 0.0)
    assert rep.constants["A"] == pytest.approx(1 / (8 * c * math.e), rel=1e-12)
    a_prime = math.log(8 * c * math.e * (math.e - 1)) / (2 * math.log(5 / 4)) + 0.5
    assert rep.constants["A_prime"] == pytest.approx(a_prime, rel=1e-12)
    # the explicit constant makes the window empty at any laboratory n
    assert not rep.applicable
    # ... but the window opens once n log n dominates A' n
    assert bound("1d-lb", QuditParams(10 ** 13, 2), 0.0).applicable


def test_cg_bound_constants():
    rep = bound("cg-ub", QuditParams(60, 2), 4000.0)
    assert rep.constants["a"] == pytest.approx(1 / 10, rel=1e-15)  # (q-1)^2/(2(q^2+1))
    assert rep.constants["s_star"] == pytest.approx(3014.748900000367, rel=1e-9)
    assert rep.applicable
    lb = bound("cg-lb", QuditParams(60, 2), 500.0)
    assert lb.applicable
    assert lb.ratio_to_haar_bound == pytest.approx(0.5002844374703938, rel=1e-12)


def test_general_bounds():
    params = QuditParams(60, 2)
    with pytest.raises(ValueError):
        bound("gen-ub", params, 1000.0)
    rep = bound("gen-ub", params, 21000.0, r=2)
    assert rep.constants["s_star"] == pytest.approx(
        2.7304542945297494 * 2 * 60 ** 2, rel=1e-12)
    assert rep.applicable
    assert bound("gen-ub", params, 21000.0, r=2, slack=100.0).constants[
        "s_star"] == pytest.approx(rep.constants["s_star"] + 100.0, rel=1e-12)

    glb = bound("gen-lb", params, 500.0)
    assert glb.applicable
    assert glb.ratio_to_haar_bound == pytest.approx(0.5000000000155356, rel=1e-12)
    # the architecture-specific bound is at least as strong
    clb = bound("cg-lb", params, 500.0)
    assert glb.ratio_to_haar_bound <= clb.ratio_to_haar_bound

    with pytest.raises(ValueError):
        bound("no-such-theorem", params, 1.0)


def test_general_lower_bound_below_exact_everywhere():
    for n in (6, 12, 20):
        params = QuditParams(n, 2)
        _, series = z_complete_graph_exact(params, 30 * n, return_series=True)
        for s in range(0, 30 * n + 1, 5):
            glb = bound("gen-lb", params, float(s))
            assert glb.ratio_to_haar_bound <= series[s] * (1 + 1e-9)


def test_cg_sandwich_small_scale():
    # unit-scale version of the bound sandwich, covering q=3
    for n, q in ((20, 2), (20, 3), (40, 3)):
        params = QuditParams(n, q)
        s_star = bound("cg-ub", params, 0.0).constants["s_star"]
        s_top = int(4 * s_star)
        _, series = z_complete_graph_exact(params, s_top, return_series=True)
        step = max(1, s_top // 400)
        for s in range(0, s_top + 1, step):
            lb = bound("cg-lb", params, float(s))
            assert lb.ratio_to_haar_bound <= series[s] * (1 + 1e-9)
            ub = bound("cg-ub", params, float(s))
            if ub.applicable:
                assert series[s] <= ub.ratio_to_haar_bound * (1 + 1e-9)
            else:
                assert s < s_star


def test_paley_zygmund():
    assert paley_zygmund_fraction(1.0, 0.0) == 1.0
    assert paley_zygmund_fraction(0.5, 0.5) == pytest.approx(0.125, rel=1e-15)
    for alpha, beta in ((0.0, 0.5), (1.5, 0.5), (0.5, -0.1), (0.5, 1.5)):
        with pytest.raises(ValueError):
            paley_zygmund_fraction(alpha, beta)


def test_coefficient_table():
    rows = {(r["architecture"], r["side"]): r for r in coefficient_table(2)}
    assert rows[("general", "upper")]["scaling"] == "r*n^2"
    assert rows[("general", "upper")]["coefficient"] == pytest.approx(
        2.7304542945297494, rel=1e-12)
    assert rows[("general", "lower")]["coefficient"] == pytest.approx(
        0.31066746727980593, rel=1e-12)
    for side in ("upper", "lower"):
        assert rows[("1d", side)]["coefficient"] == pytest.approx(
            1 / (2 * math.log(5 / 4)), rel=1e-12)
        assert rows[("complete-graph", side)]["coefficient"] == pytest.approx(
            5 / 6, rel=1e-12)
        assert rows[("1d", side)]["scaling"] == "n*log(n)"

    rows3 = {(r["architecture"], r["side"]): r for r in coefficient_table(3)}
    assert rows3[("1d", "upper")]["coefficient"] == pytest.approx(
        1 / (2 * math.log(10 / 6)), rel=1e-12)
    assert rows3[("complete-graph", "upper")]["coefficient"] == pytest.approx(
        10 / 16, rel=1e-12)
    assert rows3[("general", "lower")]["coefficient"] == pytest.approx(
        1 / (2 * math.log(10)), rel=1e-12)
