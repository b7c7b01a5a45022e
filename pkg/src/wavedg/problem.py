"""Problem descriptions: coefficients, nonlinearity, initial/boundary/exact data.

The model solved is

    u_tt - Lap(u) + i*alpha*u_t + beta(x) f(|u|^2) u = 0

with u complex; the named scenario presets cover a linear plane wave, a
spatially varying beta, a cubic self-focusing case with Dirichlet walls,
a sech soliton with a closed-form solution, and a 2D plane wave with an
exponential nonlinearity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .basis import BasisSpec
from .errors import NonFiniteValueError
from .mesh import Mesh, quadrature_coords

__all__ = [
    "Nonlinearity",
    "ProblemSpec",
    "ScenarioPreset",
    "NONLINEARITIES",
    "SCENARIO_NAMES",
    "make_nonlinearity",
    "make_scenario",
    "eval_nonlinearity",
    "project_initial",
]


@dataclass(frozen=True)
class Nonlinearity:
    """Coupling f(w), its derivative, and antiderivative F with F(0) = 0.

    state_independent marks f as constant in w, letting the scheme factor
    its element systems once per run instead of per evaluation.
    """

    name: str
    f: Callable
    dfdw: Callable
    F: Callable
    state_independent: bool = False


NONLINEARITIES = {
    "constant": Nonlinearity("constant", lambda w: np.ones_like(np.asarray(w, dtype=float)),
                             lambda w: np.zeros_like(np.asarray(w, dtype=float)),
                             lambda w: np.asarray(w, dtype=float),
                             state_independent=True),
    "cubic": Nonlinearity("cubic", lambda w: np.asarray(w, dtype=float),
                          lambda w: np.ones_like(np.asarray(w, dtype=float)),
                          lambda w: np.asarray(w, dtype=float) ** 2 / 2.0),
    "exponential": Nonlinearity("exponential", lambda w: np.exp(w),
                                lambda w: np.exp(w),
                                lambda w: np.expm1(w)),
}


def make_nonlinearity(name: str) -> Nonlinearity:
    try:
        return NONLINEARITIES[name]
    except KeyError:
        raise ValueError(f"unknown nonlinearity {name!r}") from None


def eval_nonlinearity(nl: Nonlinearity, w: float):
    """(f(w), f'(w), F(w)) for a squared modulus w >= 0."""
    if w < 0:
        raise ValueError(f"squared modulus must be >= 0, got {w}")
    with np.errstate(over="ignore"):
        out = (float(nl.f(w)), float(nl.dfdw(w)), float(nl.F(w)))
    if not all(math.isfinite(v) for v in out):
        raise NonFiniteValueError(f"nonlinearity {nl.name!r} overflows at w={w}")
    return out


@dataclass(frozen=True)
class ProblemSpec:
    """Coefficients and data for one initial-boundary-value problem.

    beta, u0, u1 take position arrays (x in 1D; x, y in 2D); g/g_t take
    position arrays plus the time; exact_u/exact_v likewise.  All callables
    must be numpy-vectorized.
    """

    alpha: float
    beta: Callable
    nonlinearity: Nonlinearity
    u0: Callable
    u1: Callable
    bc: str = "periodic"
    g: Optional[Callable] = None
    g_t: Optional[Callable] = None
    exact_u: Optional[Callable] = None
    exact_v: Optional[Callable] = None
    dim: int = 1

    @property
    def has_exact(self) -> bool:
        return self.exact_u is not None


@dataclass(frozen=True)
class ScenarioPreset:
    name: str
    problem: ProblemSpec
    domain: tuple  # ((a, b),) in 1D, ((ax, bx), (ay, by)) in 2D
    final_time: float


def _plane_wave_1d():
    exact_u = lambda x, t: np.exp(1j * (np.asarray(x, dtype=float) + t))
    exact_v = lambda x, t: 1j * np.exp(1j * (np.asarray(x, dtype=float) + t))
    return exact_u, exact_v


def _example1() -> ScenarioPreset:
    exact_u, exact_v = _plane_wave_1d()
    prob = ProblemSpec(
        alpha=1.0,
        beta=lambda x: np.ones_like(np.asarray(x, dtype=float)),
        nonlinearity=NONLINEARITIES["constant"],
        u0=lambda x: exact_u(x, 0.0),
        u1=lambda x: exact_v(x, 0.0),
        bc="periodic",
        exact_u=exact_u,
        exact_v=exact_v,
        dim=1,
    )
    return ScenarioPreset("example1", prob, ((0.0, 2.0 * np.pi),), 1.0)


def _example2() -> ScenarioPreset:
    exact_u, exact_v = _plane_wave_1d()
    prob = ProblemSpec(
        alpha=1.0,
        beta=lambda x: np.exp(-np.asarray(x, dtype=float) ** 2),
        nonlinearity=NONLINEARITIES["constant"],
        u0=lambda x: exact_u(x, 0.0),
        u1=lambda x: exact_v(x, 0.0),
        bc="periodic",
        dim=1,
    )
    return ScenarioPreset("example2", prob, ((0.0, 2.0 * np.pi),), 100.0)


def _example3() -> ScenarioPreset:
    def u0(x):
        x = np.asarray(x, dtype=float)
        return (1.0 + 1.0j) * x * np.exp(-10.0 * (1.0 - x) ** 2)

    zero = lambda x, t: np.zeros_like(np.asarray(x, dtype=float), dtype=complex)
    prob = ProblemSpec(
        alpha=1.0,
        beta=lambda x: np.ones_like(np.asarray(x, dtype=float)),
        nonlinearity=NONLINEARITIES["cubic"],
        u0=u0,
        u1=lambda x: np.zeros_like(np.asarray(x, dtype=float), dtype=complex),
        bc="dirichlet",
        g=zero,
        g_t=zero,
        dim=1,
    )
    return ScenarioPreset("example3", prob, ((-40.0, 40.0),), 20.0)


SOLITON_J = 0.25
SOLITON_THETA = -0.5 - math.sqrt(3.0) / 4.0
SOLITON_A = abs(SOLITON_J)


def _example4() -> ScenarioPreset:
    J, Th, A = SOLITON_J, SOLITON_THETA, SOLITON_A

    def exact_u(x, t):
        x = np.asarray(x, dtype=float)
        return A / np.cosh(J * x) * np.exp(1j * Th * t)

    def exact_v(x, t):
        return 1j * Th * exact_u(x, t)

    def g_t_t(x, t):  # time derivative of the Dirichlet data
        return 1j * Th * exact_u(x, t)

    prob = ProblemSpec(
        alpha=1.0,
        beta=lambda x: np.full_like(np.asarray(x, dtype=float), -2.0),
        nonlinearity=NONLINEARITIES["cubic"],
        u0=lambda x: exact_u(x, 0.0),
        u1=lambda x: exact_v(x, 0.0),
        bc="dirichlet",
        g=exact_u,
        g_t=g_t_t,
        exact_u=exact_u,
        exact_v=exact_v,
        dim=1,
    )
    return ScenarioPreset("example4", prob, ((-50.0, 50.0),), 2.0)


def _example5() -> ScenarioPreset:
    def exact_u(x, y, t):
        return np.exp(1j * (np.asarray(x, dtype=float) + np.asarray(y, dtype=float) + t))

    def exact_v(x, y, t):
        return 1j * exact_u(x, y, t)

    prob = ProblemSpec(
        alpha=1.0 + math.e,
        beta=lambda x, y: np.ones_like(np.asarray(x, dtype=float)),
        nonlinearity=NONLINEARITIES["exponential"],
        u0=lambda x, y: exact_u(x, y, 0.0),
        u1=lambda x, y: exact_v(x, y, 0.0),
        bc="periodic",
        exact_u=exact_u,
        exact_v=exact_v,
        dim=2,
    )
    return ScenarioPreset("example5", prob, ((0.0, 2.0 * np.pi), (0.0, 2.0 * np.pi)), 1.0)


_SCENARIOS = {
    "example1": _example1,
    "example2": _example2,
    "example3": _example3,
    "example4": _example4,
    "example5": _example5,
}

SCENARIO_NAMES = tuple(sorted(_SCENARIOS))


def make_scenario(name: str) -> ScenarioPreset:
    """Named presets for the five benchmark experiments."""
    try:
        factory = _SCENARIOS[name]
    except KeyError:
        raise ValueError(f"unknown scenario {name!r}; expected one of {SCENARIO_NAMES}") from None
    return factory()


def _edge_coords(mesh: Mesh, basis: BasisSpec, axis: int, side: int):
    """Physical coordinates of the fine-rule points on one local edge."""
    org = mesh.element_origin
    if mesh.dim == 1:
        return (org[:, 0:1] + side * mesh.h[0],)
    tangent = 1 - axis
    offs = (basis.fine_rule.nodes + 1.0) / 2.0 * mesh.h[tangent]
    along = org[:, tangent : tangent + 1] + offs[None, :]
    const = np.broadcast_to(org[:, axis : axis + 1] + side * mesh.h[axis], along.shape)
    return (const, along) if axis == 0 else (along, const)


def project_initial(spec: ProblemSpec, mesh: Mesh, basis: BasisSpec):
    """Element-wise projection of (u0, u1) onto the (q, s) spaces.

    The velocity u1 is projected in L2.  The displacement u0 uses the
    gradient-matching projection (element gradients match weakly, element
    means match exactly); both are optimal-order and exact on polynomials.
    Plain L2 projection of u0 is avoided deliberately: it excites a
    near-stationary interface mode of the semi-discrete operator at O(h^q)
    for even q, which caps the observable L2 convergence of u below the
    optimal rate.  All integrals use the (q+3)-point per-axis rule; the
    gradient equations are integrated by parts so only u0 values are needed.
    """
    from .scheme import State  # deferred: scheme imports problem types

    if spec.dim != mesh.dim:
        raise ValueError(f"problem dim {spec.dim} != mesh dim {mesh.dim}")
    coords = quadrature_coords(mesh, basis.fine_rule.nodes)
    u_vals = np.asarray(spec.u0(*coords), dtype=complex)
    v_vals = np.asarray(spec.u1(*coords), dtype=complex)
    w = basis.fine_weights
    inv_mass_s = 1.0 / np.diag(basis.ref.mass_s)
    v_coeffs = (v_vals * w[None, :]) @ basis.fine_Vs * inv_mass_s[None, :]

    # gradient-matching system: same matrix for every element (uniform mesh)
    A = sum((2.0 / mesh.h[a]) ** 2 * basis.stiff_parts_q[a] for a in range(mesh.dim))
    A = A.copy()
    A[0, :] = 0.0
    A[0, 0] = 1.0
    rhs = np.zeros((mesh.n_elements, basis.dim_q), dtype=complex)
    for a in range(mesh.dim):
        wa = (2.0 / mesh.h[a]) ** 2
        rhs -= wa * ((u_vals * w[None, :]) @ basis.proj_lap_parts[a])
        for side in (0, 1):
            edge_vals = np.asarray(spec.u0(*_edge_coords(mesh, basis, a, side)),
                                   dtype=complex)
            rhs += wa * ((edge_vals * basis.proj_edge_weights[None, :])
                         @ basis.proj_edge_dn[(a, side)])
    # mean-value row: constant coefficient equals the element average of u0
    rhs[:, 0] = (u_vals * w[None, :]) @ basis.fine_Vq[:, 0] / 2.0**mesh.dim
    u_coeffs = np.linalg.solve(A[None, :, :], rhs[:, :, None])[:, :, 0]
    return State(t=0.0, u=u_coeffs, v=v_coeffs.astype(complex))
