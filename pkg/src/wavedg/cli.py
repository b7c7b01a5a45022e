"""Command-line front end: single runs, convergence sweeps, energy studies.

Exit codes: 0 success, 1 invalid configuration, 2 numerical failure
(blow-up aborts leave a blowup.txt report next to the partial outputs).
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .config import (
    COMMANDS,
    FLUX_NAMES,
    CliConfig,
    config_from_values,
    parse_config_file,
    resolve_scenario,
    serialize_config,
)
from .diagnostics import COMPONENTS
from .errors import BlowUpError, NumericalFailure
from .problem import SCENARIO_NAMES
from .study import RATE_COMPONENTS, RunSetup, convergence_study, single_run
from .timestep import RunSinks

__all__ = ["main"]

MONOTONE_SLACK = 1e-10


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _write_csv(path: str, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(v if isinstance(v, str) else _fmt(v) for v in row) + "\n")


def _snapshot_name(t: float) -> str:
    return f"snapshot_{format(float(t), '.10g')}.csv"


def _prepare_output(cfg: CliConfig) -> str:
    os.makedirs(cfg.output_dir, exist_ok=True)
    with open(os.path.join(cfg.output_dir, "config.txt"), "w", encoding="utf-8") as fh:
        fh.write(serialize_config(cfg))
    return cfg.output_dir


def _setup(cfg: CliConfig):
    preset = resolve_scenario(cfg)
    final_time = cfg.final_time if cfg.final_time is not None else preset.final_time
    setup = RunSetup(preset, cfg.q, cfg.s, cfg.flux, cfg.xi, cfg.dt)
    return preset, setup, final_time


def _single_n(cfg: CliConfig) -> int:
    if len(cfg.n_list) != 1:
        raise ValueError(f"command {cfg.command!r} takes a single element count, got {cfg.n_list}")
    return cfg.n_list[0]


class _Collector:
    """Streams run diagnostics so partial output survives a blow-up abort."""

    def __init__(self, dim: int):
        self.dim = dim
        self.energy_rows = []
        self.error_rows = []
        self.snapshots = []

    def sinks(self) -> RunSinks:
        return RunSinks(on_energy=self._energy, on_errors=self._errors,
                        on_snapshot=self._snapshot)

    def _energy(self, rec):
        self.energy_rows.append((rec.t, rec.kinetic, rec.potential, rec.nonlinear, rec.total))

    def _errors(self, t, errs):
        for c in COMPONENTS:
            self.error_rows.append((t, c, errs[c]))

    def _snapshot(self, t, cols):
        self.snapshots.append((t, cols))

    def write(self, outdir: str, include_errors: bool):
        _write_csv(os.path.join(outdir, "energy.csv"),
                   ("t", "kinetic", "potential", "nonlinear", "total"), self.energy_rows)
        if include_errors:
            rows = [(t, c, v) for (t, c, v) in self.error_rows]
            _write_csv(os.path.join(outdir, "errors.csv"), ("t", "component", "l2"), rows)
        names = ("x", "y")[: self.dim]
        for t, cols in self.snapshots:
            header = names + ("re_u", "im_u", "abs_u", "re_v", "im_v")
            rows = zip(*(cols[k] for k in header))
            _write_csv(os.path.join(outdir, _snapshot_name(t)), header, rows)


def _write_blowup(outdir: str, err: BlowUpError):
    with open(os.path.join(outdir, "blowup.txt"), "w", encoding="utf-8") as fh:
        fh.write(f"t = {_fmt(err.t)}\n")
        fh.write(f"max_abs_u = {_fmt(err.max_abs_u)}\n")


def cmd_run(cfg: CliConfig) -> int:
    preset, setup, final_time = _setup(cfg)
    n = _single_n(cfg)
    outdir = _prepare_output(cfg)
    collector = _Collector(preset.problem.dim)
    stride = cfg.stride if cfg.stride is not None else 10
    try:
        single_run(setup, n, final_time, snapshot_times=cfg.snapshots,
                   stride=stride, sinks=collector.sinks())
    except BlowUpError as err:
        collector.write(outdir, preset.problem.has_exact)
        _write_blowup(outdir, err)
        print(f"blow-up detected at t={err.t:.6g} (max |u| coefficient {err.max_abs_u:.3e})",
              file=sys.stderr)
        return 2
    collector.write(outdir, preset.problem.has_exact)
    return 0


def cmd_convergence(cfg: CliConfig) -> int:
    preset, setup, final_time = _setup(cfg)
    if not preset.problem.has_exact:
        raise ValueError(f"scenario {preset.name!r} has no exact solution for a convergence study")
    if len(cfg.n_list) < 2:
        raise ValueError("convergence study needs at least two element counts")
    outdir = _prepare_output(cfg)
    result = convergence_study(setup, cfg.n_list, final_time)
    _write_csv(os.path.join(outdir, "convergence.csv"),
               ("n", "h", "err_re_u", "err_im_u", "err_re_v", "err_im_v"),
               result.table_rows())
    _write_csv(os.path.join(outdir, "rates.csv"), ("component", "rate"),
               [(c, result.rates[c]) for c in RATE_COMPONENTS])
    print(f"{'n':>6} {'h':>12} " + " ".join(f"{c:>12}" for c in RATE_COMPONENTS))
    for row in result.table_rows():
        n, h, *errs = row
        print(f"{n:>6} {h:>12.5g} " + " ".join(f"{e:>12.4e}" for e in errs))
    print("rates: " + "  ".join(f"{c}={result.rates[c]:.4f}" for c in RATE_COMPONENTS))
    return 0


def cmd_energy(cfg: CliConfig) -> int:
    preset, setup, final_time = _setup(cfg)
    n = _single_n(cfg)
    outdir = _prepare_output(cfg)
    collector = _Collector(preset.problem.dim)
    stride = cfg.stride if cfg.stride is not None else 1
    try:
        single_run(setup, n, final_time, stride=stride, sinks=collector.sinks())
    except BlowUpError as err:
        collector.write(outdir, False)
        _write_blowup(outdir, err)
        return 2
    collector.write(outdir, False)
    totals = np.array([row[4] for row in collector.energy_rows])
    e0 = totals[0]
    scale = abs(e0) if e0 != 0 else 1.0
    drift = float(np.max(np.abs(totals - e0)) / scale)
    increases = np.diff(totals) > MONOTONE_SLACK * scale
    monotone = not bool(np.any(increases))
    with open(os.path.join(outdir, "drift.txt"), "w", encoding="utf-8") as fh:
        fh.write(f"max_relative_drift = {_fmt(drift)}\n")
        fh.write(f"monotone_nonincreasing = {'true' if monotone else 'false'}\n")
    print(f"max relative energy drift {drift:.3e}; monotone non-increasing: {monotone}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavedg",
        description="Energy-based DG solver for the nonlinear Schrodinger equation "
                    "with wave operator.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (("run", "single simulation with CSV outputs"),
                        ("convergence", "mesh-refinement study with rate fits"),
                        ("energy", "energy-conservation study")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--scenario", required=True,
                       help=f"preset name ({', '.join(SCENARIO_NAMES)}) or config file path")
        p.add_argument("--q", type=int, default=None, help="degree of the u space")
        p.add_argument("--s", type=int, default=None, help="degree of the v space (default q)")
        p.add_argument("--flux", choices=FLUX_NAMES, default=None)
        p.add_argument("--xi", type=float, default=None, help="Sommerfeld splitting parameter")
        p.add_argument("--n", type=str, default=None,
                       help="element count, or comma list for convergence")
        p.add_argument("--t", type=float, default=None, help="final time (default: preset)")
        p.add_argument("--output-dir", type=str, default=None)
        p.add_argument("--dt", type=float, default=None, help="override the time-step rule")
        p.add_argument("--snapshots", type=str, default=None, help="comma list of times")
        p.add_argument("--stride", type=int, default=None, help="diagnostics cadence in steps")
    return parser


def _config_from_args(args) -> CliConfig:
    values = {}
    if os.path.isfile(args.scenario):
        values = parse_config_file(args.scenario)
    else:
        values["scenario"] = args.scenario
    if args.q is not None:
        values["q"] = args.q
    if args.s is not None:
        values["s"] = args.s
    if args.flux is not None:
        values["flux"] = args.flux
    if args.xi is not None:
        values["xi"] = args.xi
    if args.n is not None:
        values["n"] = args.n
    if args.t is not None:
        values["t"] = args.t
    if args.output_dir is not None:
        values["output_dir"] = args.output_dir
    if args.dt is not None:
        values["dt"] = args.dt
    if args.snapshots is not None:
        values["snapshots"] = args.snapshots
    if args.stride is not None:
        values["stride"] = args.stride
    return config_from_values(args.command, values)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        if cfg.scenario not in SCENARIO_NAMES:
            raise ValueError(f"unknown scenario {cfg.scenario!r}")
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    try:
        if cfg.command == "run":
            return cmd_run(cfg)
        if cfg.command == "convergence":
            return cmd_convergence(cfg)
        return cmd_energy(cfg)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except BlowUpError as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return 2
    except NumericalFailure as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
