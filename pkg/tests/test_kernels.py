"""Kernel backends: equivalence, selection, and the set evaluator."""

import math

import numpy as np
import pytest

import helpers
from pinchsim import (ActiveSet, PowerAllocation, SetEvaluator, SystemConfig,
                      amplitude_matrix, effective_channel, implementations,
                      make_deployment, stream_rng, sum_rate)

HAVE_COMPILED = "compiled" in implementations()


def test_amplitude_matrix_reproduces_channels():
    rng = np.random.default_rng(300)
    for _ in range(100):
        cfg, dep, _ = helpers.random_instance(rng)
        amp = amplitude_matrix(cfg, dep)
        assert amp.shape == (cfg.n_users, cfg.l_positions)
        sel = helpers.random_subset(rng, cfg.l_positions, cfg.k_antennas)
        eff = effective_channel(dep.users, ActiveSet(indices=sel), dep, cfg)
        pt = 10.0 ** ((cfg.pt_dbm - 30.0) / 10.0)
        h = amp[:, list(sel)].sum(axis=1) * math.sqrt(pt / len(sel))
        for a, b in zip(h, eff.per_user):
            assert abs(a - b) <= 1e-9 * max(abs(b), 1e-300)


def test_evaluator_matches_contract_path():
    rng = np.random.default_rng(301)
    for _ in range(200):
        cfg, dep, alloc = helpers.random_instance(rng)
        ev = SetEvaluator(cfg, dep, alloc)
        sel = helpers.random_subset(rng, cfg.l_positions, cfg.k_antennas)
        report = sum_rate(ActiveSet(indices=sel), dep, cfg, alloc)
        assert math.isclose(ev.utility(sel), report.sum_rate, rel_tol=1e-9)


@pytest.mark.skipif(not HAVE_COMPILED, reason="extension not built")
def test_backends_agree():
    impls = implementations()
    rng = np.random.default_rng(302)
    for _ in range(500):
        n = int(rng.integers(1, 7))
        l_positions = int(rng.integers(2, 16))
        amp = (rng.normal(size=(n, l_positions))
               + 1j * rng.normal(size=(n, l_positions))) * 1e-4
        amp = np.ascontiguousarray(amp)
        size = int(rng.integers(1, l_positions + 1))
        sel = np.sort(rng.choice(l_positions, size=size, replace=False)
                      ).astype(np.intp)
        alpha = rng.uniform(0.1, 1.0, n)
        alpha /= alpha.sum()
        scale = float(rng.uniform(0.1, 10.0))
        noise = float(rng.uniform(1e-13, 1e-9))
        a = impls["python"](amp, sel, scale, noise, alpha)
        b = impls["compiled"](amp, sel, scale, noise, alpha)
        assert math.isclose(a, b, rel_tol=1e-12)


def test_evaluator_counts_calls():
    cfg = SystemConfig(l_positions=12)
    dep = make_deployment(cfg, stream_rng(7, 0, 0))
    ev = SetEvaluator(cfg, dep, PowerAllocation.equal(cfg.n_users))
    assert ev.calls == 0
    ev.utility((0, 1))
    ev.utility((5,))
    assert ev.calls == 2
    assert ev.utility(()) == 0.0
    assert ev.calls == 2  # the empty set is not a kernel call


def test_evaluator_rejects_bad_indices():
    cfg = SystemConfig(l_positions=12)
    dep = make_deployment(cfg, stream_rng(7, 0, 0))
    ev = SetEvaluator(cfg, dep, PowerAllocation.equal(cfg.n_users))
    with pytest.raises(ValueError):
        ev.utility((12,))
    with pytest.raises(ValueError):
        ev.utility((-1,))
    with pytest.raises(ValueError):
        SetEvaluator(cfg, dep, PowerAllocation.equal(3))


def test_evaluator_gains_match_channel():
    rng = np.random.default_rng(303)
    for _ in range(50):
        cfg, dep, alloc = helpers.random_instance(rng)
        ev = SetEvaluator(cfg, dep, alloc)
        sel = helpers.random_subset(rng, cfg.l_positions, cfg.k_antennas)
        eff = effective_channel(dep.users, ActiveSet(indices=sel), dep, cfg)
        for got, want in zip(ev.gains(sel), eff.gains):
            assert math.isclose(got, want, rel_tol=1e-9, abs_tol=1e-300)


def test_utility_is_deterministic():
    cfg = SystemConfig()
    dep = make_deployment(cfg, stream_rng(8, 0, 0))
    ev = SetEvaluator(cfg, dep, PowerAllocation.equal(cfg.n_users))
    assert ev.utility((1, 4)) == ev.utility((1, 4))
    assert ev.utility((4, 1)) == ev.utility((1, 4))  # order-insensitive
