"""Run setup helpers and the convergence-study harness."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .basis import BasisSpec, make_basis
from .diagnostics import fit_convergence_rate, l2_error
from .mesh import Mesh, cartesian_mesh_2d, uniform_mesh_1d
from .problem import ScenarioPreset, make_scenario
from .scheme import FluxParams, flux_from_name
from .timestep import RunConfig, RunResult, RunSinks, run_simulation

__all__ = ["RunSetup", "ConvergenceResult", "build_mesh", "single_run", "convergence_study"]

RATE_COMPONENTS = ("re_u", "im_u", "re_v", "im_v")


@dataclass(frozen=True)
class RunSetup:
    """Everything needed to launch one simulation of a scenario."""

    scenario: ScenarioPreset
    q: int
    s: int
    flux: str
    xi: float = 1.0
    dt: Optional[float] = None

    def basis(self) -> BasisSpec:
        return make_basis(self.q, self.s, self.scenario.problem.dim)

    def flux_params(self) -> FluxParams:
        return flux_from_name(self.flux, self.xi)


def build_mesh(scenario: ScenarioPreset, n: int) -> Mesh:
    bc = scenario.problem.bc
    if scenario.problem.dim == 1:
        (a, b), = scenario.domain
        return uniform_mesh_1d(a, b, n, bc)
    return cartesian_mesh_2d(scenario.domain, n, n, bc)


def single_run(setup: RunSetup, n: int, final_time: float,
               snapshot_times=(), stride: int = 10,
               sinks: Optional[RunSinks] = None):
    """Run one simulation; returns (RunResult, mesh, basis)."""
    mesh = build_mesh(setup.scenario, n)
    basis = setup.basis()
    config = RunConfig(final_time=final_time, dt=setup.dt,
                       snapshot_times=tuple(snapshot_times),
                       diagnostics_stride=stride)
    result = run_simulation(setup.scenario.problem, mesh, basis,
                            setup.flux_params(), config, sinks)
    return result, mesh, basis


@dataclass
class ConvergenceResult:
    n_list: list
    h_list: list
    errors: dict  # component -> list of terminal L2 errors
    rates: dict  # component -> least-squares slope

    def table_rows(self):
        for i, n in enumerate(self.n_list):
            yield (n, self.h_list[i], *(self.errors[c][i] for c in RATE_COMPONENTS))


def convergence_study(setup: RunSetup, n_list, final_time: float) -> ConvergenceResult:
    """Terminal L2 errors and LSQ rates over a sequence of mesh levels."""
    problem = setup.scenario.problem
    if not problem.has_exact:
        raise ValueError(f"scenario {setup.scenario.name!r} has no exact solution")
    n_list = list(n_list)
    if len(n_list) < 2:
        raise ValueError("need at least two mesh levels for a convergence study")
    errors = {c: [] for c in RATE_COMPONENTS}
    h_list = []
    for n in n_list:
        result, mesh, basis = single_run(setup, n, final_time, stride=10**9)
        h_list.append(min(mesh.h))
        for c in RATE_COMPONENTS:
            errors[c].append(l2_error(result.final_state, problem, basis, mesh, c))
    rates = {c: fit_convergence_rate(h_list, errors[c]) for c in RATE_COMPONENTS}
    return ConvergenceResult(n_list, h_list, errors, rates)
