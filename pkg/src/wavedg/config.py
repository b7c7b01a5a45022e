"""Run configuration: CLI flags, config files, and problem overrides.

Config files are plain text, one `key = value` per line with `#` comments.
Keys mirror the CLI flags plus three physics overrides (alpha, beta,
nonlinearity); beta accepts only the whitelisted forms `const:<c>` and
`gauss:<a>` (for exp(-a x^2)).  Overriding any physics field drops the
scenario's exact solution.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .problem import NONLINEARITIES, ScenarioPreset, make_nonlinearity, make_scenario

__all__ = ["CliConfig", "parse_config_file", "serialize_config", "resolve_scenario"]

FLUX_NAMES = ("central", "alternating0", "alternating1", "sommerfeld")
COMMANDS = ("run", "convergence", "energy")


@dataclass
class CliConfig:
    command: str
    scenario: str
    q: int
    s: Optional[int] = None
    flux: str = "sommerfeld"
    xi: float = 1.0
    n_list: tuple = (20,)
    final_time: Optional[float] = None
    output_dir: str = "out"
    dt: Optional[float] = None
    snapshots: tuple = ()
    stride: Optional[int] = None
    alpha: Optional[float] = None
    beta: Optional[str] = None
    nonlinearity: Optional[str] = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.q < 1:
            raise ValueError("q must be >= 1")
        if self.s is None:
            self.s = self.q
        if not (self.q - 2 <= self.s <= self.q) or self.s < 0:
            raise ValueError(f"s must satisfy q-2 <= s <= q (and s >= 0), got q={self.q} s={self.s}")
        if self.flux not in FLUX_NAMES:
            raise ValueError(f"unknown flux {self.flux!r}")
        if self.xi <= 0:
            raise ValueError("xi must be positive")
        if not self.n_list or any(n < 1 for n in self.n_list):
            raise ValueError("element counts must be >= 1")
        if self.final_time is not None and self.final_time < 0:
            raise ValueError("final time must be >= 0")
        if self.dt is not None and self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.stride is not None and self.stride < 1:
            raise ValueError("stride must be >= 1")
        if self.nonlinearity is not None and self.nonlinearity not in NONLINEARITIES:
            raise ValueError(f"unknown nonlinearity {self.nonlinearity!r}")
        if self.beta is not None:
            parse_beta(self.beta)  # validate eagerly


def parse_beta(expr: str):
    """Whitelisted beta expressions: const:<c> or gauss:<a> for exp(-a x^2)."""
    kind, sep, arg = expr.partition(":")
    if not sep:
        raise ValueError(f"beta expression {expr!r} must look like const:<c> or gauss:<a>")
    try:
        value = float(arg)
    except ValueError:
        raise ValueError(f"beta expression {expr!r} has a non-numeric parameter") from None
    if kind == "const":
        return lambda *coords: np.full_like(np.asarray(coords[0], dtype=float), value)
    if kind == "gauss":
        return lambda *coords: np.exp(-value * np.asarray(coords[0], dtype=float) ** 2)
    raise ValueError(f"beta expression kind {kind!r} not in whitelist (const, gauss)")


_KEY_TYPES = {
    "command": str,
    "scenario": str,
    "q": int,
    "s": int,
    "flux": str,
    "xi": float,
    "n": str,
    "t": float,
    "output_dir": str,
    "dt": float,
    "snapshots": str,
    "stride": int,
    "alpha": float,
    "beta": str,
    "nonlinearity": str,
}


def _parse_n(text: str):
    return tuple(int(p) for p in str(text).split(",") if p.strip())


def _parse_snapshots(text: str):
    return tuple(float(p) for p in str(text).split(",") if p.strip())


def parse_config_file(path: str) -> dict:
    """Read `key = value` lines; unknown keys are rejected."""
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, val = line.partition("=")
            key = key.strip()
            val = val.strip()
            if not sep or not key:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw.rstrip()!r}")
            if key not in _KEY_TYPES:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            caster = _KEY_TYPES[key]
            try:
                values[key] = caster(val)
            except ValueError:
                raise ValueError(f"{path}:{lineno}: cannot parse {key} value {val!r}") from None
    return values


def config_from_values(command: str, values: dict) -> CliConfig:
    """Build a CliConfig from config-file values (file may restate the command)."""
    v = dict(values)
    file_cmd = v.pop("command", None)
    if file_cmd is not None and file_cmd != command:
        raise ValueError(f"config file command {file_cmd!r} != invoked command {command!r}")
    if "scenario" not in v:
        raise ValueError("config file must name a scenario")
    return CliConfig(
        command=command,
        scenario=v.pop("scenario"),
        q=v.pop("q", 2),
        s=v.pop("s", None),
        flux=v.pop("flux", "sommerfeld"),
        xi=v.pop("xi", 1.0),
        n_list=_parse_n(v.pop("n", "20")),
        final_time=v.pop("t", None),
        output_dir=v.pop("output_dir", "out"),
        dt=v.pop("dt", None),
        snapshots=_parse_snapshots(v.pop("snapshots", "")),
        stride=v.pop("stride", None),
        alpha=v.pop("alpha", None),
        beta=v.pop("beta", None),
        nonlinearity=v.pop("nonlinearity", None),
    )


def serialize_config(cfg: CliConfig) -> str:
    """Effective configuration in the config-file format (round-trippable)."""
    lines = [
        f"command = {cfg.command}",
        f"scenario = {cfg.scenario}",
        f"q = {cfg.q}",
        f"s = {cfg.s}",
        f"flux = {cfg.flux}",
        f"xi = {cfg.xi!r}",
        "n = " + ",".join(str(n) for n in cfg.n_list),
    ]
    if cfg.final_time is not None:
        lines.append(f"t = {cfg.final_time!r}")
    lines.append(f"output_dir = {cfg.output_dir}")
    if cfg.dt is not None:
        lines.append(f"dt = {cfg.dt!r}")
    if cfg.snapshots:
        lines.append("snapshots = " + ",".join(format(t, ".17g") for t in cfg.snapshots))
    if cfg.stride is not None:
        lines.append(f"stride = {cfg.stride}")
    if cfg.alpha is not None:
        lines.append(f"alpha = {cfg.alpha!r}")
    if cfg.beta is not None:
        lines.append(f"beta = {cfg.beta}")
    if cfg.nonlinearity is not None:
        lines.append(f"nonlinearity = {cfg.nonlinearity}")
    return "\n".join(lines) + "\n"


def resolve_scenario(cfg: CliConfig) -> ScenarioPreset:
    """Scenario preset with any physics overrides applied.

    Overrides invalidate the preset's exact solution and are only exact
    for data the run actually uses (initial/boundary data stay the preset's).
    """
    preset = make_scenario(cfg.scenario)
    overrides = {}
    if cfg.alpha is not None:
        overrides["alpha"] = cfg.alpha
    if cfg.beta is not None:
        overrides["beta"] = parse_beta(cfg.beta)
    if cfg.nonlinearity is not None:
        overrides["nonlinearity"] = make_nonlinearity(cfg.nonlinearity)
    if overrides:
        overrides["exact_u"] = None
        overrides["exact_v"] = None
        problem = replace(preset.problem, **overrides)
        preset = ScenarioPreset(preset.name, problem, preset.domain, preset.final_time)
    return preset
