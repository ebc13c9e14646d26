"""Physical channel: free-space coefficients, waveguide phase and loss,
and the effective scalar channel of each user for a set of active antennas.

The effective channel coherently sums, over the activated antennas, the
spherical-wave coefficient times the in-waveguide phase rotation times the
square root of the per-antenna transmit power.  Noise is never folded in here.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .scenario import Deployment, Point3, SystemConfig, dbm_to_watts, derived_rf


@dataclass(frozen=True)
class ActiveSet:
    """Set of activated antennas.

    Normally a set of grid indices into Deployment.positions (0-based,
    distinct).  Baselines that place antennas off the grid supply explicit
    points via `overrides`, which then take precedence over `indices`.
    """

    indices: tuple[int, ...] = ()
    overrides: tuple[Point3, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(self.indices))
        if self.overrides is not None:
            object.__setattr__(self, "overrides", tuple(self.overrides))
        if len(set(self.indices)) != len(self.indices):
            raise ValueError("active positions must be distinct")
        if any(i < 0 for i in self.indices):
            raise ValueError("position indices are 0-based and non-negative")

    @property
    def size(self) -> int:
        if self.overrides is not None:
            return len(self.overrides)
        return len(self.indices)

    def antenna_points(self, deployment: Deployment) -> tuple[Point3, ...]:
        if self.overrides is not None:
            return self.overrides
        n = len(deployment.positions)
        if any(i >= n for i in self.indices):
            raise ValueError("position index out of range")
        return tuple(deployment.positions[i] for i in self.indices)


@dataclass(frozen=True)
class EffectiveChannel:
    """Complex effective channel per user and the corresponding power gains."""

    per_user: tuple[complex, ...]
    gains: tuple[float, ...]


def free_space_coeff(user: Point3, antenna: Point3, lam: float, eta: float) -> complex:
    """Spherical-wave coefficient eta * exp(-j 2 pi r / lambda) / r."""
    r = user.distance_to(antenna)
    if r == 0.0:
        raise ValueError("user and antenna coincide (singular channel)")
    return eta * cmath.exp(-2j * math.pi * r / lam) / r


def waveguide_phase(feed: Point3, antenna: Point3, lam_g: float) -> float:
    """Phase accumulated travelling from the feed to the antenna, radians.

    Not reduced mod 2 pi; reduction happens only inside the complex
    exponential so large feed distances stay exact.
    """
    return 2.0 * math.pi * feed.distance_to(antenna) / lam_g


def antenna_power(pt_watts: float, set_size: int, kappa_db_per_m: float,
                  dist_from_feed: float) -> float:
    """Transmit power of one activated antenna, watts.

    Total power split equally over the active set, then attenuated by
    kappa dB per meter of waveguide travelled.  kappa = 0 is the lossless case.
    """
    if set_size < 1:
        raise ValueError("active set must be nonempty")
    if dist_from_feed < 0:
        raise ValueError("feed distance must be >= 0")
    return (pt_watts / set_size) * 10.0 ** (-kappa_db_per_m * dist_from_feed / 10.0)


def effective_channel(users: tuple[Point3, ...], active: ActiveSet,
                      deployment: Deployment, config: SystemConfig) -> EffectiveChannel:
    """Effective scalar channel h_n of every user for the given activation.

    Empty active set yields all-zero channels (the caller convention for a
    fully deactivated system).
    """
    if active.size == 0:
        zeros = (0j,) * len(users)
        return EffectiveChannel(per_user=zeros, gains=(0.0,) * len(users))
    lam, lam_g, eta = derived_rf(config)
    pt_watts = dbm_to_watts(config.pt_dbm)
    points = active.antenna_points(deployment)
    terms = []
    for p in points:
        d_feed = deployment.feed.distance_to(p)
        theta = waveguide_phase(deployment.feed, p, lam_g)
        p_l = antenna_power(pt_watts, len(points), config.kappa_db_per_m, d_feed)
        terms.append((p, cmath.exp(-1j * theta) * math.sqrt(p_l)))
    per_user = []
    for u in users:
        h = 0j
        for p, weight in terms:
            h += free_space_coeff(u, p, lam, eta) * weight
        per_user.append(h)
    return EffectiveChannel(
        per_user=tuple(per_user),
        gains=tuple(abs(h) ** 2 for h in per_user),
    )
