"""Uniform 1D interval meshes and 2D Cartesian meshes with face connectivity.

Faces are stored grouped by normal axis as index arrays so the scheme can
vectorize over them; `Mesh.faces` exposes the same data as Face records.
Interior faces orient their normal from the `minus` to the `plus` element
(+axis direction); boundary faces keep the interior element on the minus
side and record the outward normal sign.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Face",
    "FaceGroup",
    "Mesh",
    "uniform_mesh_1d",
    "cartesian_mesh_2d",
    "quadrature_coords",
    "BOUNDARY",
]

BOUNDARY = -1

TAG_INTERIOR = "none"
TAG_PERIODIC = "periodic-wrap"
TAG_DIRICHLET = "dirichlet"


@dataclass(frozen=True)
class Face:
    element_minus: int
    element_plus: int  # BOUNDARY for physical boundary faces
    normal: tuple
    boundary_tag: str


@dataclass(frozen=True)
class FaceGroup:
    """Faces sharing a normal axis and orientation, as index arrays.

    minus/plus: adjacent element ids (plus == BOUNDARY on physical walls);
    minus_side/plus_side: local side index of each adjacent element along
    `axis` (0 = low, 1 = high); sign: outward normal sign of the minus
    element; origin: physical coordinates of the low corner of each face.
    """

    axis: int
    minus: np.ndarray
    plus: np.ndarray
    minus_side: np.ndarray
    plus_side: np.ndarray
    sign: int
    tag: str
    origin: np.ndarray  # (n_faces, dim)

    def __len__(self) -> int:
        return self.minus.shape[0]


class Mesh:
    """Uniform structured mesh; immutable after construction."""

    def __init__(self, bounds, counts, bc: str):
        if bc not in ("periodic", "dirichlet"):
            raise ValueError(f"unknown boundary tag {bc!r}")
        self.dim = len(counts)
        self.bounds = tuple((float(a), float(b)) for a, b in bounds)
        self.counts = tuple(int(n) for n in counts)
        for (a, b), n in zip(self.bounds, self.counts):
            if n < 1:
                raise ValueError(f"element count must be >= 1, got {n}")
            if a >= b:
                raise ValueError(f"empty axis extent [{a}, {b}]")
        self.h = tuple((b - a) / n for (a, b), n in zip(self.bounds, self.counts))
        self.bc = bc
        self.n_elements = int(np.prod(self.counts))
        self.element_origin = self._element_origins()
        self.face_groups = self._build_faces()

    # element id layout: 1D -> ix; 2D -> iy * Nx + ix
    def _element_origins(self) -> np.ndarray:
        if self.dim == 1:
            (a, _), = self.bounds
            ix = np.arange(self.counts[0])
            return (a + ix * self.h[0])[:, None]
        (ax, _), (ay, _) = self.bounds
        nx, ny = self.counts
        iy, ix = np.divmod(np.arange(nx * ny), nx)
        return np.stack([ax + ix * self.h[0], ay + iy * self.h[1]], axis=1)

    def _build_faces(self):
        groups = []
        if self.dim == 1:
            n = self.counts[0]
            a = self.bounds[0][0]
            h = self.h[0]
            if self.bc == "periodic":
                idx = np.arange(n)
                groups.append(
                    FaceGroup(
                        axis=0,
                        minus=(idx - 1) % n,
                        plus=idx,
                        minus_side=np.ones(n, dtype=int),
                        plus_side=np.zeros(n, dtype=int),
                        sign=+1,
                        tag=TAG_PERIODIC,
                        origin=(a + idx * h)[:, None],
                    )
                )
            else:
                idx = np.arange(1, n)
                groups.append(
                    FaceGroup(
                        axis=0,
                        minus=idx - 1,
                        plus=idx,
                        minus_side=np.ones(n - 1, dtype=int),
                        plus_side=np.zeros(n - 1, dtype=int),
                        sign=+1,
                        tag=TAG_INTERIOR,
                        origin=(a + idx * h)[:, None],
                    )
                )
                for elem, side, sign, pos in ((0, 0, -1, a), (n - 1, 1, +1, a + n * h)):
                    groups.append(
                        FaceGroup(
                            axis=0,
                            minus=np.array([elem]),
                            plus=np.array([BOUNDARY]),
                            minus_side=np.array([side]),
                            plus_side=np.array([side]),
                            sign=sign,
                            tag=TAG_DIRICHLET,
                            origin=np.array([[pos]]),
                        )
                    )
            return groups

        nx, ny = self.counts
        (ax, _), (ay, _) = self.bounds
        hx, hy = self.h

        def eid(ix, iy):
            return iy * nx + ix

        for axis, n_along, n_across in ((0, nx, ny), (1, ny, nx)):
            if self.bc == "periodic":
                i = np.arange(n_along)
                j = np.arange(n_across)
                ii, jj = np.meshgrid(i, j, indexing="ij")  # face at coord i, across j
                if axis == 0:
                    minus = eid((ii - 1) % nx, jj).ravel()
                    plus = eid(ii, jj).ravel()
                    origin = np.stack([ax + ii.ravel() * hx, ay + jj.ravel() * hy], axis=1)
                else:
                    minus = eid(jj, (ii - 1) % ny).ravel()
                    plus = eid(jj, ii).ravel()
                    origin = np.stack([ax + jj.ravel() * hx, ay + ii.ravel() * hy], axis=1)
                groups.append(
                    FaceGroup(
                        axis=axis,
                        minus=minus,
                        plus=plus,
                        minus_side=np.ones(minus.shape[0], dtype=int),
                        plus_side=np.zeros(minus.shape[0], dtype=int),
                        sign=+1,
                        tag=TAG_PERIODIC,
                        origin=origin,
                    )
                )
            else:
                i = np.arange(1, n_along)
                j = np.arange(n_across)
                ii, jj = np.meshgrid(i, j, indexing="ij")
                if axis == 0:
                    minus = eid(ii - 1, jj).ravel()
                    plus = eid(ii, jj).ravel()
                    origin = np.stack([ax + ii.ravel() * hx, ay + jj.ravel() * hy], axis=1)
                else:
                    minus = eid(jj, ii - 1).ravel()
                    plus = eid(jj, ii).ravel()
                    origin = np.stack([ax + jj.ravel() * hx, ay + ii.ravel() * hy], axis=1)
                groups.append(
                    FaceGroup(
                        axis=axis,
                        minus=minus,
                        plus=plus,
                        minus_side=np.ones(minus.shape[0], dtype=int),
                        plus_side=np.zeros(minus.shape[0], dtype=int),
                        sign=+1,
                        tag=TAG_INTERIOR,
                        origin=origin,
                    )
                )
                for side, sign in ((0, -1), (1, +1)):
                    j = np.arange(n_across)
                    if axis == 0:
                        elem = eid(0 if side == 0 else nx - 1, j)
                        xpos = ax if side == 0 else ax + nx * hx
                        origin = np.stack([np.full(n_across, xpos), ay + j * hy], axis=1)
                    else:
                        elem = eid(j, 0 if side == 0 else ny - 1)
                        ypos = ay if side == 0 else ay + ny * hy
                        origin = np.stack([ax + j * hx, np.full(n_across, ypos)], axis=1)
                    groups.append(
                        FaceGroup(
                            axis=axis,
                            minus=elem,
                            plus=np.full(n_across, BOUNDARY),
                            minus_side=np.full(n_across, side),
                            plus_side=np.full(n_across, side),
                            sign=sign,
                            tag=TAG_DIRICHLET,
                            origin=origin,
                        )
                    )
        return groups

    @property
    def n_faces(self) -> int:
        return sum(len(g) for g in self.face_groups)

    @property
    def faces(self):
        """All faces as Face records (test/inspection convenience)."""
        out = []
        for g in self.face_groups:
            normal = tuple(g.sign if ax == g.axis else 0 for ax in range(self.dim))
            for k in range(len(g)):
                out.append(Face(int(g.minus[k]), int(g.plus[k]), normal, g.tag))
        return out

    def element_measure(self) -> float:
        m = 1.0
        for h in self.h:
            m *= h
        return m


def quadrature_coords(mesh: Mesh, nodes: np.ndarray):
    """Physical coordinates of tensor quadrature nodes per element.

    Returns one (n_elements, n_pts) array per axis; in 2D the flattening is
    x-major, matching the basis tables.
    """
    if mesh.dim == 1:
        h = mesh.h[0]
        return [mesh.element_origin[:, 0:1] + (nodes[None, :] + 1.0) * (h / 2.0)]
    hx, hy = mesh.h
    xi = (nodes + 1.0) / 2.0
    ones = np.ones_like(xi)
    xs = mesh.element_origin[:, 0:1] + np.kron(xi, ones)[None, :] * hx
    ys = mesh.element_origin[:, 1:2] + np.kron(ones, xi)[None, :] * hy
    return [xs, ys]


def uniform_mesh_1d(a: float, b: float, n: int, bc: str = "periodic") -> Mesh:
    """N equal elements on (a, b); periodic wrap or two Dirichlet end faces."""
    return Mesh([(a, b)], [n], bc)


def cartesian_mesh_2d(bounds, nx: int, ny: int, bc: str = "periodic") -> Mesh:
    """nx-by-ny uniform Cartesian mesh with axis-aligned faces."""
    return Mesh(bounds, [nx, ny], bc)
