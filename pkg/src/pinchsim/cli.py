"""Command line front end.

Subcommands: run, sweep, convergence, compare.  Flags mirror the config-file
keys; precedence is built-in defaults < preset < config file < flags.
Relative output paths resolve under PINCHSIM_OUTPUT_DIR when that is set.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .harness import (SCHEMES, SWEEP_PARAMS, ConfigError, ExperimentSpec,
                      build_spec, convergence_trace, parse_config_file,
                      read_results, run_experiment)
from .kernels import BACKEND
from .scenario import config_field_names

# Named parameter bundles for the studies the package is built around.  Trial
# counts are kept modest so each preset finishes in seconds to minutes; raise
# --trials for smoother curves.
PRESETS = {
    "power": {
        "d1": "10", "d2": "6", "n_users": "2", "k_antennas": "2",
        "l_positions": "20", "kappa_db_per_m": "0.1",
        "schemes": "matching,random,distance",
        "trials": "100",
        "sweep_param": "pt_dbm", "sweep_from": "20", "sweep_to": "40",
        "sweep_step": "5",
    },
    "area-length": {
        "d2": "4", "n_users": "4", "k_antennas": "4", "l_positions": "20",
        "pt_dbm": "30", "kappa_db_per_m": "0.1",
        "schemes": "matching,distance,conventional",
        "trials": "100",
        "sweep_param": "d1", "sweep_from": "10", "sweep_to": "30",
        "sweep_step": "10",
    },
    "antenna-count": {
        "d1": "10", "d2": "6", "n_users": "4", "l_positions": "20",
        "pt_dbm": "30", "kappa_db_per_m": "0.1",
        "schemes": "matching,conventional",
        "trials": "50",
        "sweep_param": "k_antennas", "sweep_from": "2", "sweep_to": "8",
        "sweep_step": "2",
    },
    "convergence": {
        "d1": "10", "d2": "6", "n_users": "2", "k_antennas": "2",
        "l_positions": "12", "pt_dbm": "30", "kappa_db_per_m": "0.1",
        "trials": "100",
    },
}

_SWEEP_FLAGS = ("sweep_param", "sweep_from", "sweep_to", "sweep_step")


def _add_spec_flags(parser: argparse.ArgumentParser, sweep: bool) -> None:
    parser.add_argument("--config", type=Path, metavar="FILE",
                        help="key = value file; flags override it")
    parser.add_argument("--preset", choices=sorted(PRESETS),
                        help="named parameter bundle to start from")
    for key in config_field_names():
        parser.add_argument(f"--{key.replace('_', '-')}", dest=key,
                            metavar="V", help=argparse.SUPPRESS)
    parser.add_argument("--trials", metavar="T", help="Monte-Carlo drops per point")
    parser.add_argument("--schemes", metavar="S,S,...",
                        help=f"comma list from: {', '.join(SCHEMES)}")
    parser.add_argument("--output", type=Path, metavar="CSV",
                        help="result file (a .spec.json sidecar is written too)")
    if sweep:
        parser.add_argument("--sweep-param", dest="sweep_param",
                            choices=SWEEP_PARAMS)
        parser.add_argument("--sweep-from", dest="sweep_from", metavar="V")
        parser.add_argument("--sweep-to", dest="sweep_to", metavar="V")
        parser.add_argument("--sweep-step", dest="sweep_step", metavar="V")


def _collect_entries(args: argparse.Namespace, sweep: bool) -> dict[str, str]:
    entries: dict[str, str] = {}
    if args.preset:
        entries.update(PRESETS[args.preset])
    if args.config:
        entries.update(parse_config_file(args.config))
    flag_keys = config_field_names() + ("trials", "schemes")
    if sweep:
        flag_keys += _SWEEP_FLAGS
    for key in flag_keys:
        value = getattr(args, key, None)
        if value is not None:
            entries[key] = str(value)
    if not sweep:
        dropped = [k for k in _SWEEP_FLAGS if k in entries]
        for k in dropped:
            del entries[k]
    return entries


def _resolve_output(path: Path | None, default_name: str) -> Path:
    if path is None:
        path = Path(default_name)
    if not path.is_absolute():
        root = os.environ.get("PINCHSIM_OUTPUT_DIR")
        if root:
            path = Path(root) / path
    return path


def _build_spec(args: argparse.Namespace, sweep: bool, default_name: str
                ) -> ExperimentSpec:
    entries = _collect_entries(args, sweep)
    if "output_path" in entries and args.output is None:
        args.output = Path(entries.pop("output_path"))
    elif "output_path" in entries:
        del entries["output_path"]
    spec = build_spec(entries, output_default=None)
    output = _resolve_output(args.output, default_name)
    return ExperimentSpec(base=spec.base, schemes=spec.schemes,
                          trials=spec.trials, sweep=spec.sweep,
                          output_path=output)


def _cmd_run(args: argparse.Namespace) -> int:
    spec = _build_spec(args, sweep=False, default_name="results.csv")
    rows = run_experiment(spec)
    _print_rows(rows)
    print(f"wrote {len(rows)} rows to {spec.output_path} [{BACKEND} kernel]")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    spec = _build_spec(args, sweep=True, default_name="sweep.csv")
    if spec.sweep is None:
        raise ConfigError("sweep needs --sweep-param/--sweep-from/--sweep-to/"
                          "--sweep-step (or a preset/config that sets them)")
    rows = run_experiment(spec)
    _print_rows(rows)
    print(f"wrote {len(rows)} rows to {spec.output_path} [{BACKEND} kernel]")
    return 0


def _cmd_convergence(args: argparse.Namespace) -> int:
    spec = _build_spec(args, sweep=False, default_name="trace.csv")
    rows = convergence_trace(spec)
    last: dict[int, float] = {}
    for r in rows:
        last[r.trial] = r.ratio
    mean_final = sum(last.values()) / len(last)
    print(f"{spec.trials} trials, mean final utility / optimum = {mean_final:.4f}")
    print(f"wrote {len(rows)} rows to {spec.output_path} [{BACKEND} kernel]")
    return 0


def _print_rows(rows) -> None:
    swept = any(r.sweep_value is not None for r in rows)
    head = ["sweep" if swept else "", "scheme", "sum rate", "fairness",
            "active", "ratio"]
    print(f"{head[0]:>8} {head[1]:>12} {head[2]:>10} {head[3]:>9} "
          f"{head[4]:>7} {head[5]:>7}")
    for r in rows:
        sv = "" if r.sweep_value is None else f"{r.sweep_value:g}"
        ratio = "" if r.mean_ratio_to_exhaustive is None \
            else f"{r.mean_ratio_to_exhaustive:.4f}"
        print(f"{sv:>8} {r.scheme:>12} {r.mean_sum_rate:>10.4f} "
              f"{r.mean_fairness:>9.4f} {r.mean_active_count:>7.2f} {ratio:>7}")


def _cmd_compare(args: argparse.Namespace) -> int:
    cells: dict[tuple[float | None, str], float] = {}
    schemes: list[str] = []
    values: list[float | None] = []
    for path in args.csv:
        for row in read_results(path):
            cells[(row.sweep_value, row.scheme)] = row.mean_sum_rate
            if row.scheme not in schemes:
                schemes.append(row.scheme)
            if row.sweep_value not in values:
                values.append(row.sweep_value)
    if not cells:
        print("no rows found", file=sys.stderr)
        return 1
    width = max(10, *(len(s) + 2 for s in schemes))
    print("mean sum rate (bits/s/Hz)")
    print(f"{'sweep':>10}" + "".join(f"{s:>{width}}" for s in schemes))
    for value in values:
        sv = "" if value is None else f"{value:g}"
        line = f"{sv:>10}"
        for s in schemes:
            cell = cells.get((value, s))
            line += f"{'':>{width}}" if cell is None else f"{cell:>{width}.4f}"
        print(line)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pinchsim",
        description="Simulate and optimize pinching-antenna activation for "
                    "a NOMA downlink.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="one configuration, no sweep")
    _add_spec_flags(p_run, sweep=False)
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="sweep one parameter")
    _add_spec_flags(p_sweep, sweep=True)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_conv = sub.add_parser("convergence",
                            help="per-trial utility trace vs exhaustive optimum")
    _add_spec_flags(p_conv, sweep=False)
    p_conv.set_defaults(func=_cmd_convergence)

    p_cmp = sub.add_parser("compare", help="tabulate existing result CSVs")
    p_cmp.add_argument("csv", nargs="+", type=Path)
    p_cmp.set_defaults(func=_cmd_compare)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
