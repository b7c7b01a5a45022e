"""Semi-discrete operator: face traces, numerical fluxes, and local solves.

Per element, the time derivative of the displacement coefficients solves a
small dense complex system assembled from the stiffness matrix plus the
weighted nonlinear Gram matrix, with the constant-test-function row replaced
by the mean-value equation so the system stays square and nonsingular for
any sign of beta*f.  The auxiliary variable's derivative needs only a
diagonal mass inversion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import BasisSpec
from .errors import LocalSolveError
from .mesh import Mesh, TAG_DIRICHLET, quadrature_coords
from .problem import ProblemSpec

__all__ = [
    "State",
    "StateDerivative",
    "FluxParams",
    "FaceTraces",
    "FaceFluxes",
    "SpatialOperator",
    "flux_from_name",
    "trace_values",
    "numerical_flux",
    "solve_ut",
    "compute_vt",
    "semidiscrete_rhs",
]


@dataclass
class State:
    """Per-element complex modal coefficients of (u, v) at time t.

    u has shape (n_elements, (q+1)**dim), v has shape (n_elements, (s+1)**dim).
    """

    t: float
    u: np.ndarray
    v: np.ndarray

    def copy(self) -> "State":
        return State(self.t, self.u.copy(), self.v.copy())


@dataclass(frozen=True)
class StateDerivative:
    du: np.ndarray
    dv: np.ndarray


@dataclass(frozen=True)
class FluxParams:
    """Interface flux weights (mu, tau, gamma); tau, gamma >= 0 dissipate energy."""

    mu: float
    tau: float = 0.0
    gamma: float = 0.0
    name: str = "custom"

    def __post_init__(self):
        if self.tau < 0 or self.gamma < 0:
            raise ValueError("flux parameters tau and gamma must be non-negative")

    @staticmethod
    def central() -> "FluxParams":
        return FluxParams(0.5, 0.0, 0.0, "central")

    @staticmethod
    def alternating(mu: int = 0) -> "FluxParams":
        if mu not in (0, 1):
            raise ValueError("alternating flux takes mu = 0 or 1")
        return FluxParams(float(mu), 0.0, 0.0, f"alternating{mu}")

    @staticmethod
    def sommerfeld(xi: float = 1.0) -> "FluxParams":
        if xi <= 0:
            raise ValueError("sommerfeld flux requires xi > 0")
        return FluxParams(0.5, 1.0 / (2.0 * xi), xi / 2.0, "sommerfeld")


def flux_from_name(name: str, xi: float = 1.0) -> FluxParams:
    if name == "central":
        return FluxParams.central()
    if name == "alternating0":
        return FluxParams.alternating(0)
    if name == "alternating1":
        return FluxParams.alternating(1)
    if name == "sommerfeld":
        return FluxParams.sommerfeld(xi)
    raise ValueError(f"unknown flux {name!r}")


@dataclass(frozen=True)
class FaceTraces:
    """Per face-group arrays of shape (n_faces, n_face_pts).

    dnu_* are outward normal derivatives as seen from each side, so the
    gradient jump across a face is dnu_minus + dnu_plus.  Boundary groups
    have plus-side entries set to None.
    """

    v_minus: list
    v_plus: list
    dnu_minus: list
    dnu_plus: list


@dataclass(frozen=True)
class FaceFluxes:
    """Single-valued interface data per face group.

    v_star is the interface value replacing the v traces; gstar is the
    normal component of the gradient flux in the minus element's outward
    direction (the plus element uses -gstar).
    """

    v_star: list
    gstar: list
    traces: FaceTraces


class SpatialOperator:
    """Precomputed assembly context for one (problem, mesh, basis, flux) tuple.

    rhs() is a pure function of the state; all cached tables are read-only.
    """

    def __init__(self, problem: ProblemSpec, mesh: Mesh, basis: BasisSpec,
                 params: FluxParams):
        if problem.dim != mesh.dim or basis.dim != mesh.dim:
            raise ValueError("problem, mesh, and basis dimensions must agree")
        if problem.bc != mesh.bc:
            raise ValueError(f"problem bc {problem.bc!r} != mesh bc {mesh.bc!r}")
        if mesh.bc == "dirichlet" and problem.g_t is None:
            raise ValueError("dirichlet mesh requires boundary data g_t")
        self.problem = problem
        self.mesh = mesh
        self.basis = basis
        self.params = params

        d = mesh.dim
        measure = mesh.element_measure()
        scale = measure / 2.0**d

        # volume quadrature (scheme rule: q+1 points per axis)
        self.W = scale * basis.quad_weights
        self.coords = quadrature_coords(mesh, basis.rule.nodes)
        self.beta_q = np.asarray(problem.beta(*self.coords), dtype=float)
        if self.beta_q.ndim == 1:  # beta returning per-point scalars on flat input
            self.beta_q = np.broadcast_to(self.beta_q, (mesh.n_elements,) + self.beta_q.shape)

        # physical volume matrices (uniform mesh: shared by all elements)
        self.K = sum(scale * (2.0 / mesh.h[a]) ** 2 * basis.stiff_parts_q[a] for a in range(d))
        self.G = sum(scale * (2.0 / mesh.h[a]) ** 2 * basis.mixed_parts[a] for a in range(d))
        self.mass_q = scale * np.diag(basis.ref.mass_q)
        self.mass_s = scale * np.diag(basis.ref.mass_s)

        # face tables per group: physical weights, normal-derivative scale,
        # and (for dirichlet groups) quadrature coordinates for g_t
        self.face_w = []
        self.face_coords = []
        for g in mesh.face_groups:
            if d == 1:
                self.face_w.append(np.array([1.0]))
                self.face_coords.append((g.origin[:, 0:1],))
            else:
                tangent = 1 - g.axis
                self.face_w.append((mesh.h[tangent] / 2.0) * basis.face_weights)
                offs = (basis.rule.nodes + 1.0) / 2.0 * mesh.h[tangent]
                along = g.origin[:, tangent : tangent + 1] + offs[None, :]
                const = np.broadcast_to(
                    g.origin[:, g.axis : g.axis + 1], along.shape
                )
                self.face_coords.append((const, along) if g.axis == 0 else (along, const))

        # state-independent coupling: the element systems never change, so
        # factor them once (stored as explicit inverses; blocks are tiny)
        self._static_inv = None
        self._wbf_static = None
        if problem.nonlinearity.state_independent:
            self._wbf_static = (self.W[None, :] * self.beta_q
                                * problem.nonlinearity.f(np.zeros_like(self.beta_q)))
            A = np.einsum("ek,km,kn->emn", self._wbf_static, basis.Vq, basis.Vq)
            A += self.K[None, :, :]
            A[:, 0, :] = 0.0
            A[:, 0, 0] = 1.0
            try:
                self._static_inv = np.linalg.inv(A)
            except np.linalg.LinAlgError:
                bad = next(e for e in range(A.shape[0])
                           if abs(np.linalg.det(A[e])) < 1e-300)
                raise LocalSolveError(bad) from None

    # -- traces and fluxes ---------------------------------------------------

    def traces(self, state: State) -> FaceTraces:
        basis, mesh = self.basis, self.mesh
        v_m, v_p, dnu_m, dnu_p = [], [], [], []
        for g in mesh.face_groups:
            two_over_h = 2.0 / mesh.h[g.axis]
            side_m = int(g.minus_side[0])
            sign_m = 1.0 if side_m == 1 else -1.0
            v_m.append(state.v[g.minus] @ basis.trace_s[(g.axis, side_m)].T)
            dnu_m.append(sign_m * two_over_h
                         * (state.u[g.minus] @ basis.dtrace_q[(g.axis, side_m)].T))
            if g.tag == TAG_DIRICHLET:
                v_p.append(None)
                dnu_p.append(None)
            else:
                v_p.append(state.v[g.plus] @ basis.trace_s[(g.axis, 0)].T)
                dnu_p.append(-two_over_h * (state.u[g.plus] @ basis.dtrace_q[(g.axis, 0)].T))
        return FaceTraces(v_m, v_p, dnu_m, dnu_p)

    def fluxes(self, traces: FaceTraces, t: float) -> FaceFluxes:
        mu, tau, gamma = self.params.mu, self.params.tau, self.params.gamma
        v_star, gstar = [], []
        for i, g in enumerate(self.mesh.face_groups):
            if g.tag == TAG_DIRICHLET:
                v_star.append(np.asarray(self.problem.g_t(*self.face_coords[i], t),
                                         dtype=complex))
                gstar.append(traces.dnu_minus[i])
                continue
            vm, vp = traces.v_minus[i], traces.v_plus[i]
            dm, dp = traces.dnu_minus[i], traces.dnu_plus[i]
            jump_grad = dm + dp
            v_star.append(mu * vm + (1.0 - mu) * vp - tau * jump_grad)
            gstar.append((1.0 - mu) * dm - mu * dp - gamma * (vm - vp))
        return FaceFluxes(v_star, gstar, traces)

    # -- element-local solves --------------------------------------------------

    def _face_vectors(self, fluxes: FaceFluxes):
        """Accumulate boundary terms of both weak equations into element vectors."""
        basis, mesh = self.basis, self.mesh
        Fq = np.zeros((mesh.n_elements, basis.dim_q), dtype=complex)
        Fs = np.zeros((mesh.n_elements, basis.dim_s), dtype=complex)
        tr = fluxes.traces
        for i, g in enumerate(mesh.face_groups):
            w = self.face_w[i]
            two_over_h = 2.0 / mesh.h[g.axis]
            side_m = int(g.minus_side[0])
            sign_m = 1.0 if side_m == 1 else -1.0
            dv_m = w[None, :] * (fluxes.v_star[i] - tr.v_minus[i])
            Fq[g.minus] += sign_m * two_over_h * (dv_m @ basis.dtrace_q[(g.axis, side_m)])
            Fs[g.minus] += (w[None, :] * fluxes.gstar[i]) @ basis.trace_s[(g.axis, side_m)]
            if g.tag != TAG_DIRICHLET:
                dv_p = w[None, :] * (fluxes.v_star[i] - tr.v_plus[i])
                Fq[g.plus] += -two_over_h * (dv_p @ basis.dtrace_q[(g.axis, 0)])
                Fs[g.plus] += -(w[None, :] * fluxes.gstar[i]) @ basis.trace_s[(g.axis, 0)]
        return Fq, Fs

    def _weighted_nonlinearity(self, state: State):
        """W_k * beta(x_k) * f(|u(x_k)|^2) per element and quadrature node."""
        u_vals = state.u @ self.basis.Vq.T
        if self._wbf_static is not None:
            return self._wbf_static, u_vals
        f_vals = self.problem.nonlinearity.f(np.abs(u_vals) ** 2)
        return self.W[None, :] * self.beta_q * f_vals, u_vals

    def _solve_ut_from(self, state: State, wbf, Fq) -> np.ndarray:
        basis = self.basis
        v_pad = basis.pad_to_q(state.v)
        v_vals = state.v @ basis.Vs.T
        b = v_pad @ self.K.T + (wbf * v_vals) @ basis.Vq + Fq
        # mean-value closure replaces the constant-test-function equation
        b[:, 0] = v_pad[:, 0]
        if self._static_inv is not None:
            return np.einsum("emn,en->em", self._static_inv, b)
        A = np.einsum("ek,km,kn->emn", wbf, basis.Vq, basis.Vq)
        A += self.K[None, :, :]
        A[:, 0, :] = 0.0
        A[:, 0, 0] = 1.0
        try:
            return np.linalg.solve(A, b[:, :, None])[:, :, 0]
        except np.linalg.LinAlgError:
            for e in range(A.shape[0]):
                try:
                    np.linalg.solve(A[e], b[e])
                except np.linalg.LinAlgError:
                    raise LocalSolveError(e) from None
            raise

    def _compute_vt_from(self, state: State, wbf, u_vals, Fs) -> np.ndarray:
        rhs = -(state.u @ self.G.T)
        rhs -= 1j * self.problem.alpha * (state.v * self.mass_s[None, :])
        rhs -= (wbf * u_vals) @ self.basis.Vs
        rhs += Fs
        return rhs / self.mass_s[None, :]

    def solve_ut(self, state: State, fluxes: FaceFluxes) -> np.ndarray:
        wbf, _ = self._weighted_nonlinearity(state)
        Fq, _ = self._face_vectors(fluxes)
        return self._solve_ut_from(state, wbf, Fq)

    def compute_vt(self, state: State, fluxes: FaceFluxes) -> np.ndarray:
        wbf, u_vals = self._weighted_nonlinearity(state)
        _, Fs = self._face_vectors(fluxes)
        return self._compute_vt_from(state, wbf, u_vals, Fs)

    def rhs(self, state: State) -> StateDerivative:
        tr = self.traces(state)
        fl = self.fluxes(tr, state.t)
        wbf, u_vals = self._weighted_nonlinearity(state)
        Fq, Fs = self._face_vectors(fl)
        return StateDerivative(self._solve_ut_from(state, wbf, Fq),
                               self._compute_vt_from(state, wbf, u_vals, Fs))


# -- free-function forms of the operator steps --------------------------------


def _face_location(mesh: Mesh, face: int):
    k = face
    for i, g in enumerate(mesh.face_groups):
        if k < len(g):
            return i, k
        k -= len(g)
    raise ValueError(f"face index {face} out of range")


def trace_values(state: State, basis: BasisSpec, mesh: Mesh, face: int):
    """Traces (v_minus, v_plus, dnu_minus, dnu_plus) at one face's points.

    The dnu values are outward normal derivatives per side; plus-side entries
    are None on physical boundary faces.
    """
    op = _bare_operator(mesh, basis)
    tr = op.traces(state)
    i, k = _face_location(mesh, face)
    pick = lambda arr: None if arr[i] is None else arr[i][k]
    return pick(tr.v_minus), pick(tr.v_plus), pick(tr.dnu_minus), pick(tr.dnu_plus)


def numerical_flux(state: State, params: FluxParams, problem: ProblemSpec,
                   basis: BasisSpec, mesh: Mesh) -> FaceFluxes:
    """Interface fluxes for every face of the mesh at the state's time."""
    op = SpatialOperator(problem, mesh, basis, params)
    return op.fluxes(op.traces(state), state.t)


def solve_ut(state: State, fluxes: FaceFluxes, problem: ProblemSpec,
             basis: BasisSpec, mesh: Mesh) -> np.ndarray:
    return SpatialOperator(problem, mesh, basis, FluxParams.central()).solve_ut(state, fluxes)


def compute_vt(state: State, fluxes: FaceFluxes, problem: ProblemSpec,
               basis: BasisSpec, mesh: Mesh) -> np.ndarray:
    return SpatialOperator(problem, mesh, basis, FluxParams.central()).compute_vt(state, fluxes)


def semidiscrete_rhs(state: State, problem: ProblemSpec, params: FluxParams,
                     basis: BasisSpec, mesh: Mesh) -> StateDerivative:
    """One-shot method-of-lines right-hand side (pure function of the state)."""
    return SpatialOperator(problem, mesh, basis, params).rhs(state)


def _bare_operator(mesh: Mesh, basis: BasisSpec) -> SpatialOperator:
    """Operator stub good enough for trace extraction (no problem data)."""
    op = SpatialOperator.__new__(SpatialOperator)
    op.mesh = mesh
    op.basis = basis
    return op
