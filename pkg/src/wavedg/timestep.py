"""Classic RK4 time stepping over the semi-discrete system.

The step size follows the fixed rule dt = 0.00975*h/pi unless overridden,
so temporal error stays below the spatial error in convergence studies.
Snapshot times and the final time are hit exactly by shortening the last
step of each segment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .basis import BasisSpec
from .diagnostics import COMPONENTS, EnergyRecord, ErrorRecord, discrete_energy, l2_error
from .errors import BlowUpError
from .mesh import Mesh, quadrature_coords
from .problem import ProblemSpec, project_initial
from .scheme import FluxParams, SpatialOperator, State, StateDerivative

__all__ = [
    "RunConfig",
    "RunSinks",
    "RunResult",
    "dt_from_mesh",
    "rk4_step",
    "run_simulation",
    "BLOWUP_THRESHOLD",
]

BLOWUP_THRESHOLD = 1e8
DT_RULE_COEFF = 0.00975


def dt_from_mesh(h: float) -> float:
    """Fixed time-step rule dt = 0.00975*h/pi."""
    if h <= 0:
        raise ValueError(f"mesh width must be positive, got {h}")
    return DT_RULE_COEFF * h / math.pi


@dataclass(frozen=True)
class RunConfig:
    final_time: float
    dt: Optional[float] = None  # derived from the mesh when omitted
    snapshot_times: tuple = ()
    diagnostics_stride: int = 10

    def __post_init__(self):
        if self.final_time < 0:
            raise ValueError("final time must be >= 0")
        if self.dt is not None and self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.diagnostics_stride < 1:
            raise ValueError("diagnostics stride must be >= 1")


@dataclass
class RunSinks:
    """Optional callbacks invoked from the stepping thread."""

    on_energy: Optional[Callable] = None
    on_errors: Optional[Callable] = None  # called with (t, {component: l2})
    on_snapshot: Optional[Callable] = None  # called with (t, column dict)


@dataclass
class RunResult:
    final_state: State
    energy: list
    errors: list  # ErrorRecord stream (empty without an exact solution)
    snapshots: list  # (t, column dict) pairs
    steps_taken: int


def rk4_step(state: State, dt: float, rhs: Callable) -> State:
    """One classic RK4 step; stage states carry t, t+dt/2, t+dt."""
    k1 = rhs(state)
    s2 = State(state.t + dt / 2.0, state.u + (dt / 2.0) * k1.du, state.v + (dt / 2.0) * k1.dv)
    k2 = rhs(s2)
    s3 = State(state.t + dt / 2.0, state.u + (dt / 2.0) * k2.du, state.v + (dt / 2.0) * k2.dv)
    k3 = rhs(s3)
    s4 = State(state.t + dt, state.u + dt * k3.du, state.v + dt * k3.dv)
    k4 = rhs(s4)
    u = state.u + (dt / 6.0) * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du)
    v = state.v + (dt / 6.0) * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv)
    return State(state.t + dt, u, v)


def _check_finite(state: State):
    max_u = float(np.max(np.abs(state.u))) if state.u.size else 0.0
    max_v = float(np.max(np.abs(state.v))) if state.v.size else 0.0
    m = max(max_u, max_v)
    if not math.isfinite(m) or m > BLOWUP_THRESHOLD:
        raise BlowUpError(state.t, max_u)


def _sample_solution(state: State, basis: BasisSpec, mesh: Mesh):
    """Solution values at the per-element tensor Gauss nodes, as columns."""
    coords = quadrature_coords(mesh, basis.rule.nodes)
    u = (state.u @ basis.Vq.T).ravel()
    v = (state.v @ basis.Vs.T).ravel()
    cols = {}
    names = ("x", "y")[: mesh.dim]
    for name, c in zip(names, coords):
        cols[name] = c.ravel()
    cols["re_u"] = u.real
    cols["im_u"] = u.imag
    cols["abs_u"] = np.abs(u)
    cols["re_v"] = v.real
    cols["im_v"] = v.imag
    return cols


def run_simulation(problem: ProblemSpec, mesh: Mesh, basis: BasisSpec,
                   params: FluxParams, config: RunConfig,
                   sinks: Optional[RunSinks] = None) -> RunResult:
    """Integrate from t = 0 to the final time, collecting diagnostics.

    Raises BlowUpError when coefficients go non-finite or exceed the
    blow-up threshold (expected for self-focusing runs).
    """
    sinks = sinks or RunSinks()
    op = SpatialOperator(problem, mesh, basis, params)
    state = project_initial(problem, mesh, basis)
    dt = config.dt if config.dt is not None else dt_from_mesh(min(mesh.h))

    result = RunResult(state, [], [], [], 0)

    def emit_diagnostics(s: State):
        rec = discrete_energy(s, problem, basis, mesh)
        result.energy.append(rec)
        if sinks.on_energy:
            sinks.on_energy(rec)
        if problem.has_exact:
            errs = {c: l2_error(s, problem, basis, mesh, c) for c in COMPONENTS}
            for c in COMPONENTS:
                result.errors.append(ErrorRecord(s.t, c, errs[c]))
            if sinks.on_errors:
                sinks.on_errors(s.t, errs)

    def emit_snapshot(s: State):
        cols = _sample_solution(s, basis, mesh)
        result.snapshots.append((s.t, cols))
        if sinks.on_snapshot:
            sinks.on_snapshot(s.t, cols)

    T = config.final_time
    snap_times = sorted(t for t in set(config.snapshot_times) if 0.0 <= t <= T)
    emit_diagnostics(state)
    if snap_times and snap_times[0] == 0.0:
        emit_snapshot(state)
        snap_times = snap_times[1:]

    boundaries = sorted(set(snap_times) | ({T} if T > 0 else set()))
    steps = 0
    for t_end in boundaries:
        while state.t < t_end - 1e-12 * max(1.0, t_end):
            step_dt = min(dt, t_end - state.t)
            state = rk4_step(state, step_dt, op.rhs)
            _check_finite(state)
            steps += 1
            if state.t < t_end - 1e-12 * max(1.0, t_end) and steps % config.diagnostics_stride == 0:
                emit_diagnostics(state)
        state.t = t_end  # land exactly on the boundary
        emit_diagnostics(state)
        if t_end in snap_times:
            emit_snapshot(state)

    result.final_state = state
    result.steps_taken = steps
    return result
