"""Backend selection and the precomputed set evaluator.

The compiled Cython kernel is used when the extension built; otherwise the
numpy twin takes over.  Set PINCHSIM_PURE=1 to force the fallback.  Either way
the evaluator exposes one operation: sum rate of a candidate activation, which
the matching search and exhaustive search call O(C*K*L) times per drop.
"""

from __future__ import annotations

import os

import numpy as np

from .noma import PowerAllocation
from .scenario import Deployment, SystemConfig, dbm_to_watts, derived_rf

from . import _sumrate_py

_IMPLEMENTATIONS = {"python": _sumrate_py.set_sum_rate}
if not os.environ.get("PINCHSIM_PURE"):
    try:
        from . import _sumrate

        _IMPLEMENTATIONS["compiled"] = _sumrate.set_sum_rate
    except ImportError:
        pass

BACKEND = "compiled" if "compiled" in _IMPLEMENTATIONS else "python"
set_sum_rate = _IMPLEMENTATIONS[BACKEND]


def implementations() -> dict:
    """Available kernel backends, for tests and benchmarks."""
    return dict(_IMPLEMENTATIONS)


def amplitude_matrix(config: SystemConfig, deployment: Deployment) -> np.ndarray:
    """(N, L) complex amplitude terms, independent of the active-set size.

    Entry (n, l) is the free-space coefficient between user n and position l,
    rotated by the waveguide phase of l and scaled by the square root of the
    dielectric attenuation at l.  Multiplying by sqrt(P_t/|S|) and summing the
    active columns reproduces the effective channel.
    """
    lam, lam_g, eta = derived_rf(config)
    ux = np.array([u.x for u in deployment.users])
    uy = np.array([u.y for u in deployment.users])
    uz = np.array([u.z for u in deployment.users])
    px = np.array([p.x for p in deployment.positions])
    py = np.array([p.y for p in deployment.positions])
    pz = np.array([p.z for p in deployment.positions])
    f = deployment.feed
    r = np.sqrt(
        (ux[:, None] - px[None, :]) ** 2
        + (uy[:, None] - py[None, :]) ** 2
        + (uz[:, None] - pz[None, :]) ** 2
    )
    d_feed = np.sqrt((px - f.x) ** 2 + (py - f.y) ** 2 + (pz - f.z) ** 2)
    theta = 2.0 * np.pi * d_feed / lam_g
    attenuation = 10.0 ** (-config.kappa_db_per_m * d_feed / 10.0)
    column = np.exp(-1j * theta) * np.sqrt(attenuation)
    return np.ascontiguousarray(
        eta * np.exp(-2j * np.pi * r / lam) / r * column[None, :]
    )


class SetEvaluator:
    """Fast sum-rate oracle for grid activations of one (config, drop) pair.

    Counts its utility calls so searches can report their evaluation budget.
    """

    def __init__(self, config: SystemConfig, deployment: Deployment,
                 alloc: PowerAllocation, kernel=None):
        if len(alloc.alpha) != len(deployment.users):
            raise ValueError("allocation length must match number of users")
        self.config = config
        self.deployment = deployment
        self.alloc = alloc
        self._amp = amplitude_matrix(config, deployment)
        self._alpha = np.array(alloc.alpha)
        self._pt_watts = dbm_to_watts(config.pt_dbm)
        self._noise_watts = dbm_to_watts(config.noise_dbm)
        self._kernel = kernel if kernel is not None else set_sum_rate
        self.calls = 0

    def utility(self, indices) -> float:
        """Sum rate in bits/s/Hz for the given position indices; 0 if empty."""
        sel = np.asarray(sorted(indices), dtype=np.intp)
        if sel.size == 0:
            return 0.0
        self.calls += 1
        if sel[0] < 0 or sel[-1] >= self._amp.shape[1]:
            raise ValueError("position index out of range")
        return self._kernel(self._amp, sel, self._pt_watts / sel.size,
                            self._noise_watts, self._alpha)

    def gains(self, indices) -> np.ndarray:
        """Per-user |h|^2 for the given activation, user order preserved."""
        sel = np.asarray(sorted(indices), dtype=np.intp)
        if sel.size == 0:
            return np.zeros(self._amp.shape[0])
        z = self._amp[:, sel].sum(axis=1)
        return (self._pt_watts / sel.size) * (z.real ** 2 + z.imag ** 2)
