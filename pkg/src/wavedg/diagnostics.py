"""Discrete energy, L2 errors against exact solutions, and rate fitting."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import BasisSpec
from .mesh import Mesh, TAG_DIRICHLET, quadrature_coords
from .problem import ProblemSpec
from .scheme import FluxParams, SpatialOperator, State

__all__ = [
    "COMPONENTS",
    "EnergyRecord",
    "ErrorRecord",
    "discrete_energy",
    "semidiscrete_energy_rate",
    "l2_error",
    "fit_convergence_rate",
]

# error components reported by the harness (plus raw complex "u"/"v")
COMPONENTS = ("re_u", "im_u", "re_v", "im_v", "abs_u")


@dataclass(frozen=True)
class EnergyRecord:
    """Kinetic/potential integrals are exact; the nonlinear part uses the
    same quadrature as the scheme, matching the discrete energy it conserves."""

    t: float
    kinetic: float
    potential: float
    nonlinear: float

    @property
    def total(self) -> float:
        return self.kinetic + self.potential + self.nonlinear


@dataclass(frozen=True)
class ErrorRecord:
    t: float
    component: str
    l2: float


def _energy_pieces(state: State, problem: ProblemSpec, basis: BasisSpec, mesh: Mesh,
                   op: SpatialOperator):
    kinetic = float(np.sum(op.mass_s[None, :] * np.abs(state.v) ** 2))
    potential = float(np.einsum("em,mn,en->", np.conj(state.u), op.K, state.u).real)
    u_vals = state.u @ basis.Vq.T
    F_vals = problem.nonlinearity.F(np.abs(u_vals) ** 2)
    nonlinear = float(np.sum(op.W[None, :] * op.beta_q * F_vals))
    return kinetic, potential, nonlinear


def discrete_energy(state: State, problem: ProblemSpec, basis: BasisSpec,
                    mesh: Mesh) -> EnergyRecord:
    """Sum over elements of |v|^2 + |grad u|^2 plus the quadrature of beta*F(|u|^2)."""
    op = SpatialOperator(problem, mesh, basis, FluxParams.central())
    k, p, nl = _energy_pieces(state, problem, basis, mesh, op)
    return EnergyRecord(state.t, k, p, nl)


def semidiscrete_energy_rate(state: State, problem: ProblemSpec, params: FluxParams,
                             basis: BasisSpec, mesh: Mesh):
    """(lhs, rhs) of the semi-discrete energy identity.

    lhs is the chain-rule time derivative of the discrete energy along the
    assembled (u_t, v_t); rhs is the interface dissipation
    -sum_faces int 2*(gamma |[[v]]|^2 + tau |[[grad u]]|^2).  Physical
    boundary fluxes are not part of rhs, so the identity is meaningful on
    periodic meshes.
    """
    op = SpatialOperator(problem, mesh, basis, params)
    der = op.rhs(state)

    lhs = 2.0 * float(np.sum(op.mass_s[None, :] * (np.conj(state.v) * der.dv).real))
    lhs += 2.0 * float(np.einsum("em,mn,en->", np.conj(state.u), op.K, der.du).real)
    u_vals = state.u @ basis.Vq.T
    ut_vals = der.du @ basis.Vq.T
    f_vals = problem.nonlinearity.f(np.abs(u_vals) ** 2)
    lhs += 2.0 * float(np.sum(op.W[None, :] * op.beta_q * f_vals
                              * (np.conj(u_vals) * ut_vals).real))

    tr = op.traces(state)
    rhs = 0.0
    for i, g in enumerate(mesh.face_groups):
        if g.tag == TAG_DIRICHLET:
            continue
        jump_v = np.abs(tr.v_minus[i] - tr.v_plus[i]) ** 2
        jump_g = np.abs(tr.dnu_minus[i] + tr.dnu_plus[i]) ** 2
        rhs -= 2.0 * float(np.sum(op.face_w[i][None, :]
                                  * (params.gamma * jump_v + params.tau * jump_g)))
    return lhs, rhs


def l2_error(state: State, problem: ProblemSpec, basis: BasisSpec, mesh: Mesh,
             component: str = "u") -> float:
    """Elementwise L2 error of one solution component, over-integrated with
    q+3 Gauss points per axis so the measurement is not aliased."""
    if not problem.has_exact:
        raise ValueError("problem has no exact solution to compare against")
    coords = quadrature_coords(mesh, basis.fine_rule.nodes)
    w = (mesh.element_measure() / 2.0**mesh.dim) * basis.fine_weights
    uh = state.u @ basis.fine_Vq.T
    vh = state.v @ basis.fine_Vs.T
    ue = problem.exact_u(*coords, state.t)
    ve = problem.exact_v(*coords, state.t)
    if component == "u":
        diff = uh - ue
    elif component == "v":
        diff = vh - ve
    elif component == "re_u":
        diff = uh.real - ue.real
    elif component == "im_u":
        diff = uh.imag - ue.imag
    elif component == "re_v":
        diff = vh.real - ve.real
    elif component == "im_v":
        diff = vh.imag - ve.imag
    elif component == "abs_u":
        diff = np.abs(uh) - np.abs(ue)
    else:
        raise ValueError(f"unknown component {component!r}")
    return float(np.sqrt(np.sum(w[None, :] * np.abs(diff) ** 2)))


def fit_convergence_rate(h_list, error_list) -> float:
    """Least-squares slope of log(error) against log(h)."""
    h = np.asarray(h_list, dtype=float)
    e = np.asarray(error_list, dtype=float)
    if h.shape != e.shape or h.size < 2:
        raise ValueError("need at least two (h, error) pairs")
    if np.any(h <= 0) or np.any(e <= 0):
        raise ValueError("h and error values must be positive")
    return float(np.polyfit(np.log(h), np.log(e), 1)[0])
