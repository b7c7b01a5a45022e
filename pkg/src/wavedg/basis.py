"""Legendre modal basis, Gauss-Legendre quadrature, and reference-element tables.

Everything here lives on the reference element [-1, 1] (or its tensor square).
Physical scalings (element width factors) are applied by the scheme module.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "QuadratureRule",
    "ReferenceMatrices",
    "BasisSpec",
    "legendre_eval",
    "legendre_table",
    "gauss_rule",
    "make_basis",
    "reference_matrices",
]

_NEWTON_TOL = 1e-15
_NEWTON_MAX_ITER = 100


def legendre_eval(q: int, x: float):
    """Values and first derivatives of P_0..P_q at a point of [-1, 1].

    Uses the Bonnet recurrence for values and the derivative recurrence
    P'_n = P'_{n-2} + (2n-1) P_{n-1}, which stays stable at x = +-1.
    """
    V, D = legendre_table(q, np.asarray([x], dtype=float))
    return V[0], D[0]


def legendre_table(q: int, x: np.ndarray):
    """Tabulate P_n and P'_n, n = 0..q, at the points x.

    Returns (V, D) with shape (len(x), q+1); V[i, n] = P_n(x[i]).
    """
    x = np.asarray(x, dtype=float)
    n_pts = x.shape[0]
    V = np.zeros((n_pts, q + 1))
    D = np.zeros((n_pts, q + 1))
    V[:, 0] = 1.0
    if q >= 1:
        V[:, 1] = x
        D[:, 1] = 1.0
    for n in range(2, q + 1):
        V[:, n] = ((2 * n - 1) * x * V[:, n - 1] - (n - 1) * V[:, n - 2]) / n
        D[:, n] = D[:, n - 2] + (2 * n - 1) * V[:, n - 1]
    return V, D


def _legendre_second_derivative_table(q: int, x: np.ndarray) -> np.ndarray:
    """P''_n at the points x via P''_n = P''_{n-2} + (2n-1) P'_{n-1}."""
    _, D = legendre_table(q, x)
    D2 = np.zeros_like(D)
    for n in range(2, q + 1):
        D2[:, n] = D2[:, n - 2] + (2 * n - 1) * D[:, n - 1]
    return D2


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Legendre rule on [-1, 1]; n points are exact up to degree 2n-1."""

    nodes: np.ndarray
    weights: np.ndarray

    def __len__(self) -> int:
        return self.nodes.shape[0]


def gauss_rule(n: int) -> QuadratureRule:
    """n-point Gauss-Legendre rule via Newton iteration on P_n.

    Chebyshev-type initial guesses converge in a handful of iterations for
    the small n used here; failure to converge indicates a bug upstream.
    """
    if n < 1:
        raise ValueError(f"point count must be >= 1, got {n}")
    if n == 1:
        return QuadratureRule(np.array([0.0]), np.array([2.0]))
    k = np.arange(1, n + 1)
    x = -np.cos(np.pi * (k - 0.25) / (n + 0.5))
    for _ in range(_NEWTON_MAX_ITER):
        V, D = legendre_table(n, x)
        dx = V[:, n] / D[:, n]
        x = x - dx
        if np.max(np.abs(dx)) < _NEWTON_TOL:
            break
    else:
        raise RuntimeError(f"Gauss-Legendre Newton iteration failed for n={n}")
    V, D = legendre_table(n, x)
    w = 2.0 / ((1.0 - x**2) * D[:, n] ** 2)
    return QuadratureRule(x, w)


@dataclass(frozen=True)
class ReferenceMatrices:
    """Volume matrices and face trace/derivative tables on the reference element.

    mass_* are diagonal by Legendre orthogonality; stiffness_q is the Gram
    matrix of basis gradients (nullspace = constants); mixed_stiffness couples
    gradients of the v-space test functions against the u-space.  In 2D all
    matrices are Kronecker products of the 1D factors.
    """

    mass_q: np.ndarray
    mass_s: np.ndarray
    stiffness_q: np.ndarray
    mixed_stiffness: np.ndarray
    # 1D endpoint tables: value_q[side, n] with side 0 = left, 1 = right.
    value_q: np.ndarray
    deriv_q: np.ndarray
    value_s: np.ndarray


def _mass_diag(p: int) -> np.ndarray:
    return 2.0 / (2.0 * np.arange(p + 1) + 1.0)


def _stiffness_1d(rows: int, cols: int) -> np.ndarray:
    """S[m, n] = integral of P'_m P'_n over [-1, 1] (closed form)."""
    S = np.zeros((rows + 1, cols + 1))
    for m in range(rows + 1):
        for n in range(cols + 1):
            if (m + n) % 2 == 0:
                mu = min(m, n)
                S[m, n] = mu * (mu + 1)
    return S


def _endpoint_tables(p: int):
    n = np.arange(p + 1)
    values = np.stack([(-1.0) ** n, np.ones(p + 1)])
    derivs = np.stack([(-1.0) ** (n + 1) * n * (n + 1) / 2.0, n * (n + 1) / 2.0])
    return values, derivs


class BasisSpec:
    """Tensor-product Legendre basis of degree q (u-space) and s (v-space).

    Precomputes, once per (q, s, dim):
      * the (q+1)-point scheme quadrature and a (q+3)-point over-integration
        rule, with basis value/derivative tables at both;
      * reference mass/stiffness matrices (closed forms);
      * face trace and outward-derivative operators for every local side.

    Immutable after construction; safe to share across threads.
    """

    def __init__(self, q: int, s: int, dim: int):
        if q < 1:
            raise ValueError(f"u-space degree must be >= 1, got q={q}")
        if s < 0 or not (q - 2 <= s <= q):
            raise ValueError(f"v-space degree must satisfy q-2 <= s <= q, got q={q}, s={s}")
        if dim not in (1, 2):
            raise ValueError(f"spatial dimension must be 1 or 2, got {dim}")
        self.q = q
        self.s = s
        self.dim = dim
        self.dim_q = (q + 1) ** dim
        self.dim_s = (s + 1) ** dim

        self.rule = gauss_rule(q + 1)
        self.fine_rule = gauss_rule(q + 3)

        Vq, Dq = legendre_table(q, self.rule.nodes)
        Vs, _ = legendre_table(s, self.rule.nodes)
        fVq, fDq = legendre_table(q, self.fine_rule.nodes)
        fVs, _ = legendre_table(s, self.fine_rule.nodes)
        fD2q = _legendre_second_derivative_table(q, self.fine_rule.nodes)

        eq, dq = _endpoint_tables(q)
        es, _ = _endpoint_tables(s)

        mass_q_1d = np.diag(_mass_diag(q))
        mass_s_1d = np.diag(_mass_diag(s))
        stiff_qq = _stiffness_1d(q, q)
        stiff_sq = _stiffness_1d(s, q)[: s + 1, : q + 1]
        mass_sq = np.zeros((s + 1, q + 1))
        np.fill_diagonal(mass_sq, _mass_diag(s))

        if dim == 1:
            self.quad_weights = self.rule.weights
            self.Vq = Vq
            self.Dq = [Dq]
            self.Vs = Vs
            self.fine_weights = self.fine_rule.weights
            self.fine_Vq = fVq
            self.fine_Vs = fVs
            mass_q = mass_q_1d
            mass_s = mass_s_1d
            stiffness_q = stiff_qq
            mixed = stiff_sq
            # per-axis factors so the scheme can scale by element widths
            self.stiff_parts_q = [stiff_qq]
            self.mixed_parts = [stiff_sq]
            # Face "quadrature" in 1D is a single endpoint per side.
            self.n_face_pts = 1
            self.face_weights = np.array([1.0])
            self.trace_q = {(0, 0): eq[0:1], (0, 1): eq[1:2]}
            self.dtrace_q = {(0, 0): dq[0:1], (0, 1): dq[1:2]}
            self.trace_s = {(0, 0): es[0:1], (0, 1): es[1:2]}
            # gradient-matching projection tables (by-parts form)
            self.proj_lap_parts = [fD2q]
            self.proj_edge_weights = np.array([1.0])
            self.proj_edge_dn = {(0, 0): -dq[0:1], (0, 1): dq[1:2]}
        else:
            w1 = self.rule.weights
            self.quad_weights = np.kron(w1, w1)
            self.Vq = np.kron(Vq, Vq)
            # d/dxi and d/deta tables, consistent with the x-major flattening.
            self.Dq = [np.kron(Dq, Vq), np.kron(Vq, Dq)]
            self.Vs = np.kron(Vs, Vs)
            fw1 = self.fine_rule.weights
            self.fine_weights = np.kron(fw1, fw1)
            self.fine_Vq = np.kron(fVq, fVq)
            self.fine_Vs = np.kron(fVs, fVs)
            mass_q = np.kron(mass_q_1d, mass_q_1d)
            mass_s = np.kron(mass_s_1d, mass_s_1d)
            self.stiff_parts_q = [np.kron(stiff_qq, mass_q_1d), np.kron(mass_q_1d, stiff_qq)]
            self.mixed_parts = [np.kron(stiff_sq, mass_sq), np.kron(mass_sq, stiff_sq)]
            stiffness_q = self.stiff_parts_q[0] + self.stiff_parts_q[1]
            mixed = self.mixed_parts[0] + self.mixed_parts[1]
            self.n_face_pts = q + 1
            self.face_weights = w1
            self.trace_q = {}
            self.dtrace_q = {}
            self.trace_s = {}
            for side in (0, 1):
                # axis 0 faces vary in eta, axis 1 faces vary in xi
                self.trace_q[(0, side)] = np.kron(eq[side : side + 1], Vq)
                self.dtrace_q[(0, side)] = np.kron(dq[side : side + 1], Vq)
                self.trace_s[(0, side)] = np.kron(es[side : side + 1], Vs)
                self.trace_q[(1, side)] = np.kron(Vq, eq[side : side + 1])
                self.dtrace_q[(1, side)] = np.kron(Vq, dq[side : side + 1])
                self.trace_s[(1, side)] = np.kron(Vs, es[side : side + 1])
            # per-axis second-derivative and outward-derivative tables at the
            # fine rule, for the gradient-matching projection (by-parts form)
            self.proj_lap_parts = [np.kron(fD2q, fVq), np.kron(fVq, fD2q)]
            self.proj_edge_weights = self.fine_rule.weights
            sgn = {0: -1.0, 1: 1.0}
            self.proj_edge_dn = {}
            for side in (0, 1):
                self.proj_edge_dn[(0, side)] = sgn[side] * np.kron(dq[side : side + 1], fVq)
                self.proj_edge_dn[(1, side)] = sgn[side] * np.kron(fVq, dq[side : side + 1])

        # Zero-padding map embedding v-space coefficients into the u-space.
        if dim == 1:
            self.pad_index = np.arange(s + 1)
        else:
            ms, mt = np.meshgrid(np.arange(s + 1), np.arange(s + 1), indexing="ij")
            self.pad_index = (ms * (q + 1) + mt).ravel()

        self.ref = ReferenceMatrices(
            mass_q=mass_q,
            mass_s=mass_s,
            stiffness_q=stiffness_q,
            mixed_stiffness=mixed,
            value_q=eq,
            deriv_q=dq,
            value_s=es,
        )

    def pad_to_q(self, v_coeffs: np.ndarray) -> np.ndarray:
        """Embed degree-s coefficient blocks into the degree-q space (exact)."""
        out = np.zeros(v_coeffs.shape[:-1] + (self.dim_q,), dtype=v_coeffs.dtype)
        out[..., self.pad_index] = v_coeffs
        return out


def make_basis(q: int, s: int | None = None, dim: int = 1) -> BasisSpec:
    """Construct a BasisSpec; s defaults to q."""
    return BasisSpec(q, q if s is None else s, dim)


def reference_matrices(spec: BasisSpec) -> ReferenceMatrices:
    """Reference-element matrices of a BasisSpec (computed once, cached)."""
    return spec.ref
