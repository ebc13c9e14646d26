"""Antenna activation: the matching-based search and the benchmark schemes.

The search treats antennas as the proposing side of a one-sided one-to-one
matching with positions.  Preferences carry externalities, so they are induced
by a single global utility, the sum rate; a move is accepted only on strict
improvement, which makes every trajectory strictly increasing and guarantees
termination on the finite matching space.  Swaps between two antennas never
change the active set, hence never the utility, and are not searched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple

import numpy as np

from .channel import ActiveSet, free_space_coeff
from .kernels import SetEvaluator
from .noma import PowerAllocation, RateReport, rate_report
from .scenario import (Deployment, Point3, SystemConfig, dbm_to_watts,
                       derived_rf)


class Move(NamedTuple):
    """One accepted adjustment: relocate to a free position or deactivate."""

    antenna: int
    source: int | None   # previous position, None if it was inactive
    target: int | None   # new position, None means deactivate


class BudgetExceededError(RuntimeError):
    """Exhaustive enumeration would exceed the candidate budget."""


@dataclass(frozen=True)
class Matching:
    """Assignment of each antenna to a position index or None (inactive).

    Matched positions are distinct: a position holds at most one antenna.
    """

    assignment: tuple[int | None, ...]

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(self.assignment))
        matched = [p for p in self.assignment if p is not None]
        if len(set(matched)) != len(matched):
            raise ValueError("two antennas share a position")
        if any(p < 0 for p in matched):
            raise ValueError("position indices are 0-based and non-negative")

    @property
    def k_antennas(self) -> int:
        return len(self.assignment)

    def active_positions(self) -> tuple[int, ...]:
        return tuple(sorted(p for p in self.assignment if p is not None))

    def active_set(self) -> ActiveSet:
        return ActiveSet(indices=self.active_positions())


@dataclass(frozen=True)
class Trajectory:
    """Instrumentation of one search run.

    utilities[0] is the initial utility; one more entry per accepted move.
    cycles counts complete K-by-L scans, including the final silent one.
    """

    utilities: tuple[float, ...]
    moves: tuple[Move, ...]
    move_cycles: tuple[int, ...]          # 1-based cycle of each accepted move
    cycles: int
    evaluations: int                      # candidate utility calls, total
    evaluations_per_cycle: tuple[int, ...]

    def __post_init__(self):
        if len(self.utilities) != len(self.moves) + 1:
            raise ValueError("need one utility per state")
        for a, b in zip(self.utilities, self.utilities[1:]):
            if not b > a:
                raise ValueError("utilities must be strictly increasing")


def random_matching(config: SystemConfig, deployment: Deployment,
                    rng: np.random.Generator) -> Matching:
    """All K antennas activated at K distinct uniformly-random positions."""
    k = config.k_antennas
    positions = rng.choice(len(deployment.positions), size=k, replace=False)
    return Matching(assignment=tuple(int(p) for p in positions))


def matching_activation(config: SystemConfig, deployment: Deployment,
                        alloc: PowerAllocation, initial: Matching,
                        evaluator: SetEvaluator | None = None,
                        max_cycles: int | None = None
                        ) -> tuple[Matching, Trajectory]:
    """Run the strict-improvement scan until a full cycle accepts nothing.

    Antennas are scanned in ascending index, positions likewise.  A free
    position is a relocation candidate for the current antenna; the antenna's
    own position is its deactivation candidate.  Each candidate costs one
    utility evaluation, so a cycle evaluates at most K*L candidates.
    """
    if initial.k_antennas != config.k_antennas:
        raise ValueError("initial matching has the wrong number of antennas")
    ev = evaluator if evaluator is not None else SetEvaluator(config, deployment, alloc)
    assignment = list(initial.assignment)
    n_positions = len(deployment.positions)
    occupied: dict[int, int] = {}
    for antenna, pos in enumerate(assignment):
        if pos is not None:
            occupied[pos] = antenna

    def active() -> tuple[int, ...]:
        return tuple(sorted(occupied))

    utility = ev.utility(active())
    utilities = [utility]
    moves: list[Move] = []
    move_cycles: list[int] = []
    evals_per_cycle: list[int] = []
    cycles = 0
    improved = True
    while improved:
        improved = False
        cycles += 1
        if max_cycles is not None and cycles > max_cycles:
            raise RuntimeError(f"no convergence within {max_cycles} cycles")
        evals = 0
        for antenna in range(config.k_antennas):
            for pos in range(n_positions):
                holder = occupied.get(pos)
                if holder is None:
                    source = assignment[antenna]
                    candidate = dict(occupied)
                    if source is not None:
                        del candidate[source]
                    candidate[pos] = antenna
                    evals += 1
                    gain = ev.utility(tuple(sorted(candidate)))
                    if gain > utility:
                        if source is not None:
                            del occupied[source]
                        occupied[pos] = antenna
                        assignment[antenna] = pos
                        utility = gain
                        utilities.append(gain)
                        moves.append(Move(antenna, source, pos))
                        move_cycles.append(cycles)
                        improved = True
                elif holder == antenna:
                    candidate = dict(occupied)
                    del candidate[pos]
                    evals += 1
                    gain = ev.utility(tuple(sorted(candidate)))
                    if gain > utility:
                        del occupied[pos]
                        assignment[antenna] = None
                        utility = gain
                        utilities.append(gain)
                        moves.append(Move(antenna, pos, None))
                        move_cycles.append(cycles)
                        improved = True
        evals_per_cycle.append(evals)
    trajectory = Trajectory(
        utilities=tuple(utilities),
        moves=tuple(moves),
        move_cycles=tuple(move_cycles),
        cycles=cycles,
        evaluations=sum(evals_per_cycle),
        evaluations_per_cycle=tuple(evals_per_cycle),
    )
    return Matching(assignment=tuple(assignment)), trajectory


def check_stability(matching: Matching, config: SystemConfig,
                    deployment: Deployment, alloc: PowerAllocation,
                    evaluator: SetEvaluator | None = None
                    ) -> tuple[bool, Move | None]:
    """Brute-force the unilateral move set; return an improving certificate.

    Stable means no single antenna can relocate to a free position or
    deactivate with a strict utility gain.  Swaps are outside the move set.
    """
    ev = evaluator if evaluator is not None else SetEvaluator(config, deployment, alloc)
    occupied = {pos: antenna for antenna, pos in enumerate(matching.assignment)
                if pos is not None}
    utility = ev.utility(tuple(sorted(occupied)))
    for antenna in range(matching.k_antennas):
        source = matching.assignment[antenna]
        for pos in range(len(deployment.positions)):
            holder = occupied.get(pos)
            if holder is None:
                candidate = dict(occupied)
                if source is not None:
                    del candidate[source]
                candidate[pos] = antenna
                if ev.utility(tuple(sorted(candidate))) > utility:
                    return False, Move(antenna, source, pos)
            elif holder == antenna:
                candidate = dict(occupied)
                del candidate[pos]
                if ev.utility(tuple(sorted(candidate))) > utility:
                    return False, Move(antenna, pos, None)
    return True, None


def candidate_count(l_positions: int, k_antennas: int) -> int:
    """Number of nonempty activations with at most K antennas."""
    return sum(math.comb(l_positions, k) for k in range(1, k_antennas + 1))


def exhaustive_search(config: SystemConfig, deployment: Deployment,
                      alloc: PowerAllocation,
                      evaluator: SetEvaluator | None = None,
                      budget: int = 10 ** 6) -> tuple[ActiveSet, float]:
    """Evaluate every nonempty subset of positions up to size K.

    Ties go to the lexicographically smallest index tuple.  Refuses to start
    when the candidate count exceeds the budget.
    """
    n_positions = len(deployment.positions)
    count = candidate_count(n_positions, config.k_antennas)
    if count > budget:
        raise BudgetExceededError(
            f"{count} candidate sets exceed the budget of {budget}")
    ev = evaluator if evaluator is not None else SetEvaluator(config, deployment, alloc)
    best: tuple[int, ...] | None = None
    best_utility = -math.inf
    for size in range(1, config.k_antennas + 1):
        for sel in combinations(range(n_positions), size):
            utility = ev.utility(sel)
            if utility > best_utility or (utility == best_utility
                                          and best is not None and sel < best):
                best = sel
                best_utility = utility
    return ActiveSet(indices=best), best_utility


def distance_based_activation(config: SystemConfig,
                              deployment: Deployment) -> ActiveSet:
    """Place antenna k on the waveguide right above user k's x-coordinate.

    Pairs antenna k with user k for k up to min(K, N); the surplus side stays
    idle.  Coinciding placements collapse to a single antenna.
    """
    n_pairs = min(config.k_antennas, len(deployment.users))
    xs: list[float] = []
    for user in deployment.users[:n_pairs]:
        if user.x not in xs:
            xs.append(user.x)
    points = tuple(Point3(x, 0.0, config.height) for x in xs)
    return ActiveSet(indices=(), overrides=points)


def conventional_positions(config: SystemConfig) -> tuple[Point3, ...]:
    """Fixed half-wavelength array centred over the rectangle, height d."""
    lam, _, _ = derived_rf(config)
    k = config.k_antennas
    return tuple(
        Point3(config.d1 / 2.0 + (i + 1 - (k + 1) / 2.0) * lam / 2.0, 0.0,
               config.height)
        for i in range(k)
    )


def conventional_baseline(config: SystemConfig, deployment: Deployment,
                          alloc: PowerAllocation) -> RateReport:
    """Fixed-antenna benchmark: no waveguide, so no phase shift and no
    dielectric loss; each of the K antennas radiates P_t/K.  Rates go through
    the same SIC stack as the pinching schemes.
    """
    lam, _, eta = derived_rf(config)
    points = conventional_positions(config)
    weight = math.sqrt(dbm_to_watts(config.pt_dbm) / config.k_antennas)
    gains = []
    for user in deployment.users:
        h = 0j
        for p in points:
            h += free_space_coeff(user, p, lam, eta) * weight
        gains.append(abs(h) ** 2)
    return rate_report(gains, alloc, dbm_to_watts(config.noise_dbm))
