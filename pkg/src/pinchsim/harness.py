"""Experiment harness: specs, Monte-Carlo execution, sweeps, CSV/JSON output.

Every trial index maps to one user drop shared by all schemes of that row
(paired comparison), and drops depend only on (seed, trial, geometry), so
sweeping power or attenuation re-uses identical drops across sweep values.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
from dataclasses import dataclass, fields, replace
from pathlib import Path
from statistics import fmean

from .activation import (Matching, candidate_count, conventional_baseline,
                         distance_based_activation, exhaustive_search,
                         matching_activation, random_matching)
from .kernels import SetEvaluator
from .noma import PowerAllocation, sum_rate
from .scenario import (MATCHING_STREAM, USER_STREAM, SystemConfig,
                       config_field_names, make_deployment, stream_rng)

log = logging.getLogger(__name__)

SCHEMES = ("matching", "random", "distance", "exhaustive", "conventional")
SWEEP_PARAMS = ("pt_dbm", "d1", "d2", "kappa_db_per_m", "n_users",
                "k_antennas", "l_positions")
COUNT_PARAMS = ("n_users", "k_antennas", "l_positions")


class ConfigError(ValueError):
    """Bad experiment configuration (file, flags, or spec fields)."""


@dataclass(frozen=True)
class SweepSpec:
    """Inclusive arithmetic sweep over one config parameter."""

    param: str
    start: float
    stop: float
    step: float

    def __post_init__(self):
        if self.param not in SWEEP_PARAMS:
            raise ConfigError(f"cannot sweep {self.param!r}; choose one of "
                              f"{', '.join(SWEEP_PARAMS)}")
        if self.step <= 0:
            raise ConfigError("sweep step must be > 0")
        if self.stop < self.start:
            raise ConfigError("sweep stop must be >= start")

    def values(self) -> tuple[float, ...]:
        out = []
        i = 0
        while True:
            v = self.start + i * self.step
            if v > self.stop * (1 + 1e-12) + 1e-12:
                break
            out.append(v)
            i += 1
        return tuple(out)


@dataclass(frozen=True)
class ExperimentSpec:
    """One experiment: base scenario, schemes to run, trials, optional sweep."""

    base: SystemConfig
    schemes: tuple[str, ...] = ("matching",)
    trials: int = 100
    sweep: SweepSpec | None = None
    output_path: Path | None = None
    exhaustive_budget: int = 10 ** 6

    def __post_init__(self):
        object.__setattr__(self, "schemes", tuple(self.schemes))
        if self.output_path is not None:
            object.__setattr__(self, "output_path", Path(self.output_path))
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not self.schemes:
            raise ConfigError("need at least one scheme")
        for s in self.schemes:
            if s not in SCHEMES:
                raise ConfigError(f"unknown scheme {s!r}; choose from "
                                  f"{', '.join(SCHEMES)}")
        if len(set(self.schemes)) != len(self.schemes):
            raise ConfigError("schemes must be distinct")
        for cfg in self.configs():
            if "exhaustive" in self.schemes:
                count = candidate_count(cfg.l_positions, cfg.k_antennas)
                if count > self.exhaustive_budget:
                    raise ConfigError(
                        f"exhaustive search needs {count} candidates at "
                        f"{self.sweep.param}={getattr(cfg, self.sweep.param)}"
                        if self.sweep else
                        f"exhaustive search needs {count} candidates",
                    )

    def configs(self) -> tuple[SystemConfig, ...]:
        """The swept configurations (just the base when there is no sweep)."""
        if self.sweep is None:
            return (self.base,)
        return tuple(apply_sweep_value(self.base, self.sweep.param, v)
                     for v in self.sweep.values())


@dataclass(frozen=True)
class ResultRow:
    """Aggregated metrics of one (sweep value, scheme) cell."""

    sweep_value: float | None
    scheme: str
    mean_sum_rate: float
    mean_fairness: float
    mean_active_count: float
    mean_cycles: float | None
    mean_ratio_to_exhaustive: float | None
    trials: int


@dataclass(frozen=True)
class TraceRow:
    """One point of a convergence trace, indexed by accepted-move count."""

    trial: int
    step: int
    cycle: int
    utility: float
    optimum: float
    ratio: float


def apply_sweep_value(base: SystemConfig, param: str, value: float) -> SystemConfig:
    if param in COUNT_PARAMS:
        return replace(base, **{param: int(round(value))})
    return replace(base, **{param: value})


def _round9(x: float) -> float:
    """Snap to the 9-significant-digit value the CSV stores, so parsing an
    emitted file reproduces rows exactly."""
    return float(f"{x:.9g}")


def _drop_hash(deployment) -> str:
    coords = ",".join(f"{u.x!r}:{u.y!r}" for u in deployment.users)
    return hashlib.blake2s(coords.encode(), digest_size=8).hexdigest()


def run_experiment(spec: ExperimentSpec) -> list[ResultRow]:
    """Run every scheme over shared user drops; aggregate means per cell.

    Deterministic for a fixed spec: identical specs produce identical rows
    (and therefore byte-identical CSV files).
    """
    rows: list[ResultRow] = []
    sweep_values = spec.sweep.values() if spec.sweep else (None,)
    for value, cfg in zip(sweep_values, spec.configs()):
        metrics = {s: [] for s in spec.schemes}
        for trial in range(spec.trials):
            deployment = make_deployment(cfg, stream_rng(cfg.seed, USER_STREAM, trial))
            log.debug("sweep=%s trial=%d drop=%s", value, trial,
                      _drop_hash(deployment))
            alloc = PowerAllocation.equal(cfg.n_users)
            evaluator = SetEvaluator(cfg, deployment, alloc)
            initial: Matching | None = None
            if "matching" in spec.schemes or "random" in spec.schemes:
                initial = random_matching(
                    cfg, deployment, stream_rng(cfg.seed, MATCHING_STREAM, trial))
            exhaustive_rate: float | None = None
            if "exhaustive" in spec.schemes:
                exh_set, _ = exhaustive_search(cfg, deployment, alloc,
                                               evaluator=evaluator,
                                               budget=spec.exhaustive_budget)
                exh_report = sum_rate(exh_set, deployment, cfg, alloc)
                exhaustive_rate = exh_report.sum_rate
            for scheme in spec.schemes:
                cycles = None
                if scheme == "matching":
                    final, trajectory = matching_activation(
                        cfg, deployment, alloc, initial, evaluator=evaluator)
                    report = sum_rate(final.active_set(), deployment, cfg, alloc)
                    active_count = len(final.active_positions())
                    cycles = trajectory.cycles
                elif scheme == "random":
                    report = sum_rate(initial.active_set(), deployment, cfg, alloc)
                    active_count = len(initial.active_positions())
                elif scheme == "distance":
                    active = distance_based_activation(cfg, deployment)
                    report = sum_rate(active, deployment, cfg, alloc)
                    active_count = active.size
                elif scheme == "exhaustive":
                    report = exh_report
                    active_count = exh_set.size
                else:
                    report = conventional_baseline(cfg, deployment, alloc)
                    active_count = cfg.k_antennas
                ratio = (report.sum_rate / exhaustive_rate
                         if exhaustive_rate is not None else None)
                metrics[scheme].append(
                    (report.sum_rate, report.fairness, active_count, cycles, ratio))
        for scheme in spec.schemes:
            data = metrics[scheme]
            cycle_vals = [m[3] for m in data if m[3] is not None]
            ratio_vals = [m[4] for m in data if m[4] is not None]
            rows.append(ResultRow(
                sweep_value=value if value is None else _round9(value),
                scheme=scheme,
                mean_sum_rate=_round9(fmean(m[0] for m in data)),
                mean_fairness=_round9(fmean(m[1] for m in data)),
                mean_active_count=_round9(fmean(m[2] for m in data)),
                mean_cycles=_round9(fmean(cycle_vals)) if cycle_vals else None,
                mean_ratio_to_exhaustive=(_round9(fmean(ratio_vals))
                                          if ratio_vals else None),
                trials=spec.trials,
            ))
    if spec.output_path is not None:
        write_results(spec.output_path, rows)
        write_spec_sidecar(spec.output_path, spec)
    return rows


def convergence_trace(spec: ExperimentSpec) -> list[TraceRow]:
    """Per-trial utility trajectory normalized by the exhaustive optimum."""
    if spec.sweep is not None:
        raise ConfigError("convergence traces take a single configuration")
    cfg = spec.base
    count = candidate_count(cfg.l_positions, cfg.k_antennas)
    if count > spec.exhaustive_budget:
        raise ConfigError(f"exhaustive baseline needs {count} candidates")
    rows: list[TraceRow] = []
    for trial in range(spec.trials):
        deployment = make_deployment(cfg, stream_rng(cfg.seed, USER_STREAM, trial))
        alloc = PowerAllocation.equal(cfg.n_users)
        evaluator = SetEvaluator(cfg, deployment, alloc)
        initial = random_matching(
            cfg, deployment, stream_rng(cfg.seed, MATCHING_STREAM, trial))
        _, optimum = exhaustive_search(cfg, deployment, alloc,
                                       evaluator=evaluator,
                                       budget=spec.exhaustive_budget)
        _, trajectory = matching_activation(cfg, deployment, alloc, initial,
                                            evaluator=evaluator)
        for step, utility in enumerate(trajectory.utilities):
            cycle = 0 if step == 0 else trajectory.move_cycles[step - 1]
            rows.append(TraceRow(
                trial=trial,
                step=step,
                cycle=cycle,
                utility=_round9(utility),
                optimum=_round9(optimum),
                ratio=_round9(utility / optimum),
            ))
    if spec.output_path is not None:
        write_trace(spec.output_path, rows)
        write_spec_sidecar(spec.output_path, spec)
    return rows


# ---------------------------------------------------------------------------
# serialization

RESULT_FIELDS = tuple(f.name for f in fields(ResultRow))
TRACE_FIELDS = tuple(f.name for f in fields(TraceRow))


def _format(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.9g}"
    return str(value)


def write_results(path: Path | str, rows: list[ResultRow]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RESULT_FIELDS)
        for row in rows:
            writer.writerow([_format(getattr(row, name)) for name in RESULT_FIELDS])


def read_results(path: Path | str) -> list[ResultRow]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != RESULT_FIELDS:
            raise ConfigError(f"unexpected header in {path}")
        rows = []
        for rec in reader:
            vals = dict(zip(RESULT_FIELDS, rec))
            rows.append(ResultRow(
                sweep_value=float(vals["sweep_value"]) if vals["sweep_value"] else None,
                scheme=vals["scheme"],
                mean_sum_rate=float(vals["mean_sum_rate"]),
                mean_fairness=float(vals["mean_fairness"]),
                mean_active_count=float(vals["mean_active_count"]),
                mean_cycles=float(vals["mean_cycles"]) if vals["mean_cycles"] else None,
                mean_ratio_to_exhaustive=(float(vals["mean_ratio_to_exhaustive"])
                                          if vals["mean_ratio_to_exhaustive"] else None),
                trials=int(vals["trials"]),
            ))
    return rows


def write_trace(path: Path | str, rows: list[TraceRow]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRACE_FIELDS)
        for row in rows:
            writer.writerow([_format(getattr(row, name)) for name in TRACE_FIELDS])


def spec_to_dict(spec: ExperimentSpec) -> dict:
    return {
        "base": {name: getattr(spec.base, name) for name in config_field_names()},
        "schemes": list(spec.schemes),
        "trials": spec.trials,
        "sweep": (None if spec.sweep is None else {
            "param": spec.sweep.param,
            "start": spec.sweep.start,
            "stop": spec.sweep.stop,
            "step": spec.sweep.step,
        }),
        "output_path": None if spec.output_path is None else str(spec.output_path),
        "exhaustive_budget": spec.exhaustive_budget,
    }


def write_spec_sidecar(output_path: Path | str, spec: ExperimentSpec) -> Path:
    output_path = Path(output_path)
    sidecar = output_path.with_name(output_path.stem + ".spec.json")
    sidecar.write_text(json.dumps(spec_to_dict(spec), indent=2) + "\n")
    return sidecar


# ---------------------------------------------------------------------------
# flat key-value config files

SPEC_KEYS = config_field_names() + (
    "trials", "schemes", "output_path",
    "sweep_param", "sweep_from", "sweep_to", "sweep_step",
)
_FLOAT_CONFIG_KEYS = tuple(k for k in config_field_names()
                           if k not in COUNT_PARAMS + ("seed",))


def parse_config_file(path: Path | str) -> dict[str, str]:
    """Flat `key = value` lines; `#` starts a comment."""
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected `key = value`")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in SPEC_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        entries[key] = value.strip()
    return entries


def build_spec(entries: dict[str, str], output_default: Path | None = None
               ) -> ExperimentSpec:
    """Assemble an ExperimentSpec from string-valued entries.

    Entries use the same keys as the config file; later sources (CLI flags)
    should be merged into `entries` before calling.
    """
    unknown = set(entries) - set(SPEC_KEYS)
    if unknown:
        raise ConfigError(f"unknown keys: {', '.join(sorted(unknown))}")
    cfg_kwargs = {}
    try:
        for key in COUNT_PARAMS + ("seed",):
            if key in entries:
                cfg_kwargs[key] = int(entries[key])
        for key in _FLOAT_CONFIG_KEYS:
            if key in entries:
                cfg_kwargs[key] = float(entries[key])
        base = SystemConfig(**cfg_kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    sweep = None
    sweep_keys = {"sweep_param", "sweep_from", "sweep_to", "sweep_step"}
    present = sweep_keys & set(entries)
    if present:
        missing = sweep_keys - present
        if missing:
            raise ConfigError(f"incomplete sweep: missing {', '.join(sorted(missing))}")
        sweep = SweepSpec(
            param=entries["sweep_param"],
            start=float(entries["sweep_from"]),
            stop=float(entries["sweep_to"]),
            step=float(entries["sweep_step"]),
        )
    schemes = tuple(s.strip() for s in entries.get("schemes", "matching").split(",")
                    if s.strip())
    output = entries.get("output_path")
    output_path = Path(output) if output else output_default
    try:
        trials = int(entries.get("trials", "100"))
    except ValueError as exc:
        raise ConfigError(f"bad trials value: {entries['trials']!r}") from exc
    return ExperimentSpec(
        base=base,
        schemes=schemes,
        trials=trials,
        sweep=sweep,
        output_path=output_path,
    )
