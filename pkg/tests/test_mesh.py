import numpy as np
import pytest

from wavedg.mesh import BOUNDARY, cartesian_mesh_2d, uniform_mesh_1d


class TestUniformMesh1d:
    def test_periodic_interval(self):
        m = uniform_mesh_1d(0.0, 2 * np.pi, 4, "periodic")
        assert m.n_elements == 4
        assert m.n_faces == 4
        assert m.h[0] == pytest.approx(np.pi / 2, rel=1e-15)

    def test_dirichlet_interval(self):
        m = uniform_mesh_1d(-40.0, 40.0, 1600, "dirichlet")
        assert m.h[0] == pytest.approx(0.05, rel=1e-12)
        assert m.n_faces == 1601
        boundary = [f for f in m.faces if f.boundary_tag == "dirichlet"]
        assert len(boundary) == 2
        assert all(f.element_plus == BOUNDARY for f in boundary)

    def test_single_element_wraps_to_itself(self):
        m = uniform_mesh_1d(0.0, 1.0, 1, "periodic")
        assert m.n_elements == 1
        faces = m.faces
        assert len(faces) == 1
        assert faces[0].element_minus == 0 and faces[0].element_plus == 0

    @pytest.mark.parametrize("args", [(0.0, 1.0, 0), (1.0, 1.0, 4), (2.0, 1.0, 4)])
    def test_invalid_arguments(self, args):
        with pytest.raises(ValueError):
            uniform_mesh_1d(*args)

    def test_unknown_bc(self):
        with pytest.raises(ValueError):
            uniform_mesh_1d(0.0, 1.0, 4, "neumann")


class TestCartesianMesh2d:
    def test_periodic_square(self):
        m = cartesian_mesh_2d(((0, 2 * np.pi), (0, 2 * np.pi)), 4, 4, "periodic")
        assert m.n_elements == 16
        assert m.n_faces == 32

    @pytest.mark.parametrize("n", [4, 8, 16])
    def test_square_spacing(self, n):
        m = cartesian_mesh_2d(((0, 2 * np.pi), (0, 2 * np.pi)), n, n, "periodic")
        assert m.h[0] == pytest.approx(2 * np.pi / n, rel=1e-15)
        assert m.h[1] == pytest.approx(2 * np.pi / n, rel=1e-15)

    def test_degenerate_wraparound(self):
        m = cartesian_mesh_2d(((0, 1), (0, 2)), 1, 2, "periodic")
        x_faces = [f for f in m.faces if f.normal[0] != 0]
        assert all(f.element_minus == f.element_plus for f in x_faces)

    def test_dirichlet_face_count(self):
        m = cartesian_mesh_2d(((0, 1), (0, 1)), 3, 2, "dirichlet")
        # interior: (3-1)*2 + (2-1)*3 = 7; boundary: 2*2 + 2*3 = 10
        assert m.n_faces == 17
        boundary = [f for f in m.faces if f.boundary_tag == "dirichlet"]
        assert len(boundary) == 10


class TestMeshInvariants:
    @pytest.mark.parametrize("mesh", [
        uniform_mesh_1d(-3.0, 7.0, 13, "periodic"),
        uniform_mesh_1d(0.0, 1.0, 5, "dirichlet"),
        cartesian_mesh_2d(((0, 2), (1, 4)), 3, 5, "periodic"),
        cartesian_mesh_2d(((0, 1), (0, 1)), 4, 4, "dirichlet"),
    ])
    def test_measures_sum_to_domain(self, mesh):
        total = mesh.n_elements * mesh.element_measure()
        domain = 1.0
        for a, b in mesh.bounds:
            domain *= b - a
        assert total == pytest.approx(domain, rel=1e-13)

    @pytest.mark.parametrize("mesh", [
        uniform_mesh_1d(-3.0, 7.0, 13, "periodic"),
        uniform_mesh_1d(0.0, 1.0, 5, "dirichlet"),
        uniform_mesh_1d(0.0, 1.0, 1, "periodic"),
        cartesian_mesh_2d(((0, 2), (1, 4)), 3, 5, "periodic"),
        cartesian_mesh_2d(((0, 1), (0, 1)), 4, 4, "dirichlet"),
    ])
    def test_incidence_count(self, mesh):
        counts = np.zeros(mesh.n_elements, dtype=int)
        for f in mesh.faces:
            counts[f.element_minus] += 1
            if f.element_plus != BOUNDARY:
                counts[f.element_plus] += 1  # self-pairing counts twice by construction
        assert np.all(counts == 2 * mesh.dim)

    def test_interior_faces_reference_two_elements(self):
        mesh = cartesian_mesh_2d(((0, 1), (0, 1)), 3, 3, "periodic")
        for f in mesh.faces:
            assert f.element_minus >= 0
            assert f.element_plus >= 0
            assert abs(sum(f.normal)) == 1
