"""SIC ordering, per-rank rates, sum rate, and Jain fairness."""

import math

import numpy as np
import pytest

import helpers
import reference
from pinchsim import (ActiveSet, PowerAllocation, SystemConfig, dbm_to_watts,
                      jain_fairness, make_deployment, rate_report, sic_order,
                      stream_rng, sum_rate, user_rates)


def test_equal_allocation():
    alloc = PowerAllocation.equal(4)
    assert alloc.alpha == (0.25, 0.25, 0.25, 0.25)
    with pytest.raises(ValueError):
        PowerAllocation.equal(0)


def test_allocation_validation():
    with pytest.raises(ValueError):
        PowerAllocation(alpha=(0.5, 0.6))
    with pytest.raises(ValueError):
        PowerAllocation(alpha=(-0.1, 1.1))
    PowerAllocation(alpha=(0.0, 1.0))  # zero fraction is allowed


def test_sic_order_sorts_ascending():
    assert sic_order((3.0, 1.0, 2.0)) == (1, 2, 0)


def test_sic_order_breaks_ties_by_index():
    assert sic_order((2.0, 2.0)) == (0, 1)


def test_sic_order_single_user():
    assert sic_order((5.0,)) == (0,)
    with pytest.raises(ValueError):
        sic_order((-1.0,))


def test_single_user_rate():
    # g equal to the noise power: log2(1 + 1) = 1 bit/s/Hz
    rates = user_rates((1e-12,), PowerAllocation.equal(1), 1e-12)
    assert rates == (1.0,)


def test_two_user_rates():
    alloc = PowerAllocation.equal(2)
    rates = user_rates((1.0, 3.0), alloc, 1.0)
    assert math.isclose(rates[0], 0.41503749927884376, rel_tol=1e-15)  # log2(4/3)
    assert math.isclose(rates[1], 1.3219280948873624, rel_tol=1e-15)   # log2(2.5)


def test_zero_fraction_means_zero_rate():
    rates = user_rates((1.0, 3.0), PowerAllocation(alpha=(0.0, 1.0)), 1.0)
    assert rates[0] == 0.0
    assert rates[1] > 0.0


def test_user_rates_validation():
    with pytest.raises(ValueError):
        user_rates((1.0,), PowerAllocation.equal(2), 1.0)
    with pytest.raises(ValueError):
        user_rates((1.0,), PowerAllocation.equal(1), 0.0)


def test_rates_match_reference_on_random_gains():
    rng = np.random.default_rng(77)
    for _ in range(500):
        n = int(rng.integers(1, 6))
        gains = [float(g) for g in rng.uniform(0.0, 5.0, n)]
        alpha = rng.uniform(0.1, 1.0, n)
        alpha = [float(a) for a in alpha / alpha.sum()]
        noise = float(rng.uniform(0.01, 2.0))
        report = rate_report(gains, PowerAllocation(alpha=tuple(alpha)), noise)
        ref = reference.reference_rates(gains, alpha, noise)
        for got, want in zip(report.rates, ref):
            assert math.isclose(got, want, rel_tol=1e-12, abs_tol=1e-15)


def test_report_indexes_rates_by_user():
    report = rate_report((3.0, 1.0), PowerAllocation.equal(2), 1.0)
    assert report.order == (1, 0)
    assert report.gains == (1.0, 3.0)
    # user 0 has the larger gain, so it holds the top (interference-free) rank
    assert math.isclose(report.rates[0], math.log2(2.5), rel_tol=1e-15)
    assert math.isclose(report.rates[1], math.log2(4.0 / 3.0), rel_tol=1e-15)
    assert math.isclose(report.sum_rate, sum(report.rates), rel_tol=1e-15)


def test_jain_extremes():
    assert math.isclose(jain_fairness((2.0, 2.0, 2.0)), 1.0, rel_tol=1e-12)
    assert math.isclose(jain_fairness((5.0, 0.0, 0.0, 0.0)), 0.25, rel_tol=1e-12)
    assert jain_fairness((1.0, 3.0)) == 0.8
    assert jain_fairness((0.0, 0.0)) == 1.0
    with pytest.raises(ValueError):
        jain_fairness((-1.0, 1.0))


def test_jain_range_random():
    rng = np.random.default_rng(88)
    for _ in range(1000):
        n = int(rng.integers(1, 8))
        rates = rng.uniform(0.0, 10.0, n)
        f = jain_fairness([float(r) for r in rates])
        assert 1.0 / n <= f <= 1.0 + 1e-12


def test_empty_activation_rates():
    cfg = SystemConfig()
    dep = make_deployment(cfg, stream_rng(6, 0, 0))
    report = sum_rate(ActiveSet(), dep, cfg, PowerAllocation.equal(cfg.n_users))
    assert report.sum_rate == 0.0
    assert report.rates == (0.0, 0.0)
    assert report.fairness == 1.0


def test_more_noise_strictly_lowers_sum_rate():
    rng = np.random.default_rng(99)
    for _ in range(300):
        n = int(rng.integers(1, 5))
        gains = [float(g) for g in rng.uniform(0.1, 5.0, n)]
        alloc = PowerAllocation.equal(n)
        noise = float(rng.uniform(0.01, 1.0))
        low = sum(user_rates(sorted(gains), alloc, noise))
        high = sum(user_rates(sorted(gains), alloc, 2.0 * noise))
        assert high < low


def test_sum_rate_matches_reference_pipeline():
    rng = np.random.default_rng(111)
    for _ in range(200):
        cfg, dep, alloc = helpers.random_instance(rng)
        sel = helpers.random_subset(rng, cfg.l_positions, cfg.k_antennas)
        report = sum_rate(ActiveSet(indices=sel), dep, cfg, alloc)
        want = helpers.oracle_sum_rate(
            cfg, dep, [dep.positions[i] for i in sel], alloc)
        assert math.isclose(report.sum_rate, want, rel_tol=1e-12)
