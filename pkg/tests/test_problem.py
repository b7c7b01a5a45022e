import math

import numpy as np
import pytest

import wavedg as w
from wavedg.errors import NonFiniteValueError
from wavedg.mesh import quadrature_coords
from wavedg.problem import (
    NONLINEARITIES,
    SOLITON_J,
    SOLITON_THETA,
    eval_nonlinearity,
    make_scenario,
    project_initial,
)


class TestScenarios:
    def test_example4_parameters(self):
        assert SOLITON_J == 0.25
        assert SOLITON_THETA == pytest.approx(-0.9330127, abs=1e-7)

    def test_example1_exact_at_origin(self):
        sc = make_scenario("example1")
        assert sc.problem.exact_u(0.0, 0.0) == pytest.approx(1.0)
        assert sc.problem.exact_v(0.0, 0.0) == pytest.approx(1j)

    def test_example5_exact_at_pi(self):
        sc = make_scenario("example5")
        assert sc.problem.exact_u(0.0, 0.0, np.pi) == pytest.approx(-1.0, abs=1e-15)

    def test_unknown_name(self):
        with pytest.raises(ValueError):
            make_scenario("example9")

    @pytest.mark.parametrize("name,alpha,bc", [
        ("example1", 1.0, "periodic"),
        ("example2", 1.0, "periodic"),
        ("example3", 1.0, "dirichlet"),
        ("example4", 1.0, "dirichlet"),
        ("example5", 1.0 + math.e, "periodic"),
    ])
    def test_preset_fields(self, name, alpha, bc):
        sc = make_scenario(name)
        assert sc.problem.alpha == pytest.approx(alpha)
        assert sc.problem.bc == bc

    @pytest.mark.parametrize("name", ["example1", "example4", "example5"])
    def test_pde_residual_by_finite_differences(self, name, rng):
        # exact solutions satisfy u_tt - Lap u + i a u_t + beta f(|u|^2) u = 0
        sc = make_scenario(name)
        p = sc.problem
        h = 1e-4
        t = rng.uniform(0.1, 1.5, 100)
        if p.dim == 1:
            lo, hi = sc.domain[0]
            span = min(hi - lo, 40.0)
            x = rng.uniform(-span / 2, span / 2, 100) if lo < 0 else rng.uniform(lo, hi, 100)
            u = lambda tt: p.exact_u(x, tt)
            ux = lambda dx: p.exact_u(x + dx, t)
            lap = (ux(h) - 2 * u(t) + ux(-h)) / h**2
        else:
            x = rng.uniform(0, 2 * np.pi, 100)
            y = rng.uniform(0, 2 * np.pi, 100)
            u = lambda tt: p.exact_u(x, y, tt)
            lap = ((p.exact_u(x + h, y, t) - 2 * u(t) + p.exact_u(x - h, y, t))
                   + (p.exact_u(x, y + h, t) - 2 * u(t) + p.exact_u(x, y - h, t))) / h**2
        utt = (u(t + h) - 2 * u(t) + u(t - h)) / h**2
        ut = (u(t + h) - u(t - h)) / (2 * h)
        beta = p.beta(x) if p.dim == 1 else p.beta(x, y)
        resid = utt - lap + 1j * p.alpha * ut + beta * p.nonlinearity.f(np.abs(u(t))**2) * u(t)
        assert np.max(np.abs(resid)) <= 1e-5

    @pytest.mark.parametrize("name", ["example1", "example4", "example5"])
    def test_exact_consistent_with_initial_data(self, name, rng):
        sc = make_scenario(name)
        p = sc.problem
        if p.dim == 1:
            x = rng.uniform(*sc.domain[0], 50)
            args = (x,)
        else:
            args = (rng.uniform(0, 2 * np.pi, 50), rng.uniform(0, 2 * np.pi, 50))
        np.testing.assert_allclose(p.exact_u(*args, 0.0), p.u0(*args), atol=1e-10)
        np.testing.assert_allclose(p.exact_v(*args, 0.0), p.u1(*args), atol=1e-10)


class TestNonlinearity:
    def test_cubic(self):
        assert eval_nonlinearity(NONLINEARITIES["cubic"], 4.0) == (4.0, 1.0, 8.0)

    def test_exponential_at_zero(self):
        assert eval_nonlinearity(NONLINEARITIES["exponential"], 0.0) == (1.0, 1.0, 0.0)

    def test_constant(self):
        assert eval_nonlinearity(NONLINEARITIES["constant"], 7.3) == (1.0, 0.0, 7.3)

    def test_negative_argument_rejected(self):
        with pytest.raises(ValueError):
            eval_nonlinearity(NONLINEARITIES["cubic"], -1.0)

    def test_exponential_overflow(self):
        with pytest.raises(NonFiniteValueError):
            eval_nonlinearity(NONLINEARITIES["exponential"], 1e4)

    @pytest.mark.parametrize("name", sorted(NONLINEARITIES))
    def test_antiderivative_consistency(self, name):
        # F'(w) = f(w) by central differences on [0, 4]
        nl = NONLINEARITIES[name]
        wgrid = np.linspace(0.05, 4.0, 41)
        eps = 1e-6
        fd = (nl.F(wgrid + eps) - nl.F(wgrid - eps)) / (2 * eps)
        np.testing.assert_allclose(fd, nl.f(wgrid), rtol=1e-6, atol=1e-6)
        assert nl.F(0.0) == pytest.approx(0.0, abs=1e-15)


class TestProjectInitial:
    def _problem(self, u0, u1=None):
        zero = lambda x: np.zeros_like(np.asarray(x, dtype=float), dtype=complex)
        return w.ProblemSpec(alpha=0.0, beta=lambda x: np.ones_like(np.asarray(x, dtype=float)),
                             nonlinearity=NONLINEARITIES["constant"],
                             u0=u0, u1=u1 or zero, bc="periodic", dim=1)

    def test_constant_field(self):
        prob = self._problem(lambda x: (1 + 2j) * np.ones_like(np.asarray(x, dtype=float)))
        mesh = w.uniform_mesh_1d(0.0, 3.0, 4, "periodic")
        basis = w.make_basis(3, 2, 1)
        st = project_initial(prob, mesh, basis)
        expected = np.zeros((4, 4), dtype=complex)
        expected[:, 0] = 1 + 2j
        np.testing.assert_allclose(st.u, expected, atol=1e-14)

    def test_linear_field_single_element(self):
        prob = self._problem(lambda x: np.asarray(x, dtype=complex),
                             lambda x: np.asarray(x, dtype=complex))
        mesh = w.uniform_mesh_1d(-1.0, 1.0, 1, "periodic")
        basis = w.make_basis(2, 2, 1)
        st = project_initial(prob, mesh, basis)
        np.testing.assert_allclose(st.u[0], [0.0, 1.0, 0.0], atol=1e-14)
        np.testing.assert_allclose(st.v[0], [0.0, 1.0, 0.0], atol=1e-14)

    def test_idempotent_on_polynomials(self):
        # any representable field is reproduced exactly
        poly = lambda x: 0.25 * np.asarray(x)**3 - np.asarray(x) + 1j * np.asarray(x)**2
        prob = self._problem(poly, poly)
        mesh = w.uniform_mesh_1d(0.0, 2.0, 3, "periodic")
        basis = w.make_basis(3, 3, 1)
        st = project_initial(prob, mesh, basis)
        x = quadrature_coords(mesh, basis.fine_rule.nodes)[0]
        np.testing.assert_allclose(st.u @ basis.fine_Vq.T, poly(x), atol=1e-13)
        np.testing.assert_allclose(st.v @ basis.fine_Vs.T, poly(x), atol=1e-13)

    def test_error_halving_rate(self):
        # projection error of e^{ix} drops by about 2^(q+1) = 16 per refinement
        sc = make_scenario("example1")
        errs = []
        for n in (20, 40):
            mesh = w.uniform_mesh_1d(0, 2 * np.pi, n, "periodic")
            basis = w.make_basis(3, 3, 1)
            st = project_initial(sc.problem, mesh, basis)
            errs.append(w.l2_error(st, sc.problem, basis, mesh, "u"))
        ratio = errs[0] / errs[1]
        assert 13.0 <= ratio <= 19.0

    def test_v_projection_matches_l2_oracle(self, rng):
        # brute-force L2 projection (independent quadrature) for the v slot
        sc = make_scenario("example1")
        mesh = w.uniform_mesh_1d(0, 2 * np.pi, 7, "periodic")
        basis = w.make_basis(3, 2, 1)
        st = project_initial(sc.problem, mesh, basis)
        r = w.gauss_rule(12)
        from wavedg.basis import legendre_table
        V, _ = legendre_table(2, r.nodes)
        x = quadrature_coords(mesh, r.nodes)[0]
        vals = sc.problem.u1(x)
        coeffs = (vals * r.weights[None, :]) @ V * ((2 * np.arange(3) + 1) / 2.0)[None, :]
        np.testing.assert_allclose(st.v, coeffs, atol=1e-12)

    def test_dimension_mismatch(self):
        sc = make_scenario("example5")
        mesh = w.uniform_mesh_1d(0, 1, 4, "periodic")
        with pytest.raises(ValueError):
            project_initial(sc.problem, mesh, w.make_basis(2, 2, 1))
