import numpy as np
import pytest

from wavedg.basis import (
    BasisSpec,
    gauss_rule,
    legendre_eval,
    legendre_table,
    make_basis,
    reference_matrices,
)


class TestLegendreEval:
    def test_degree_zero(self):
        values, derivs = legendre_eval(0, 0.7)
        assert values.tolist() == [1.0]
        assert derivs.tolist() == [0.0]

    def test_p2_at_half(self):
        # P_2(x) = (3x^2 - 1)/2 evaluated directly
        values, _ = legendre_eval(2, 0.5)
        assert values[2] == pytest.approx(-0.125, abs=1e-15)

    def test_all_ones_at_right_endpoint(self):
        values, _ = legendre_eval(3, 1.0)
        np.testing.assert_allclose(values, np.ones(4), atol=1e-15)

    def test_derivatives_match_finite_differences(self):
        eps = 1e-6
        xs = np.linspace(-0.9, 0.9, 7)
        for x in xs:
            _, d = legendre_eval(5, x)
            vp, _ = legendre_eval(5, x + eps)
            vm, _ = legendre_eval(5, x - eps)
            np.testing.assert_allclose(d, (vp - vm) / (2 * eps), atol=1e-8)


class TestGaussRule:
    def test_midpoint(self):
        r = gauss_rule(1)
        assert r.nodes.tolist() == [0.0]
        assert r.weights.tolist() == [2.0]

    def test_two_point(self):
        r = gauss_rule(2)
        np.testing.assert_allclose(r.nodes, [-1 / np.sqrt(3), 1 / np.sqrt(3)], atol=1e-15)
        np.testing.assert_allclose(r.weights, [1.0, 1.0], atol=1e-15)

    def test_exactness_degree_seven(self):
        # 4-point rule integrates x^6 exactly; compare against 2/7
        r = gauss_rule(4)
        assert np.sum(r.weights * r.nodes**6) == pytest.approx(2 / 7, rel=1e-14)

    @pytest.mark.parametrize("n", range(1, 9))
    def test_random_polynomial_exactness(self, n, rng):
        # degree <= 2n-1 integrated to relative error <= 1e-13
        deg = 2 * n - 1
        r = gauss_rule(n)
        for _ in range(20):
            coeffs = rng.uniform(-1, 1, deg + 1)
            quad = np.sum(r.weights * np.polyval(coeffs, r.nodes))
            exact = np.polynomial.polynomial.Polynomial(coeffs[::-1]).integ()(1.0) - \
                np.polynomial.polynomial.Polynomial(coeffs[::-1]).integ()(-1.0)
            assert quad == pytest.approx(exact, rel=1e-13, abs=1e-14)

    @pytest.mark.parametrize("n", range(1, 33))
    def test_basic_rule_invariants(self, n):
        r = gauss_rule(n)
        assert np.sum(r.weights) == pytest.approx(2.0, rel=1e-14)
        assert np.all(np.diff(r.nodes) > 0)
        assert np.all(r.weights > 0)
        # agrees with the numpy reference implementation
        ref_x, ref_w = np.polynomial.legendre.leggauss(n)
        np.testing.assert_allclose(r.nodes, ref_x, atol=1e-14)
        np.testing.assert_allclose(r.weights, ref_w, atol=1e-14)

    def test_invalid_count(self):
        with pytest.raises(ValueError):
            gauss_rule(0)


class TestReferenceMatrices:
    def test_mass_q1(self):
        ref = reference_matrices(make_basis(1, 1, 1))
        np.testing.assert_allclose(ref.mass_q, np.diag([2.0, 2.0 / 3.0]), atol=1e-15)

    def test_stiffness_q1(self):
        ref = reference_matrices(make_basis(1, 1, 1))
        np.testing.assert_allclose(ref.stiffness_q, [[0.0, 0.0], [0.0, 2.0]], atol=1e-15)

    @pytest.mark.parametrize("q", [1, 2, 3, 4])
    def test_constant_mode_in_nullspace(self, q):
        ref = reference_matrices(make_basis(q, q, 1))
        c = np.zeros(q + 1)
        c[0] = 3.7
        np.testing.assert_allclose(ref.stiffness_q @ c, 0.0, atol=1e-14)

    @pytest.mark.parametrize("q,dim", [(1, 1), (3, 1), (4, 1), (2, 2), (3, 2)])
    def test_mass_diagonal(self, q, dim):
        ref = reference_matrices(make_basis(q, q, dim))
        for M in (ref.mass_q, ref.mass_s):
            off = M - np.diag(np.diag(M))
            assert np.max(np.abs(off)) <= 1e-14
            assert np.all(np.diag(M) > 0)

    @pytest.mark.parametrize("q", [1, 2, 3, 4])
    def test_stiffness_symmetric_with_constant_nullspace_only(self, q):
        ref = reference_matrices(make_basis(q, q, 1))
        S = ref.stiffness_q
        assert np.max(np.abs(S - S.T)) <= 1e-14
        eigvals = np.linalg.eigvalsh(S)
        assert np.sum(np.abs(eigvals) < 1e-12) == 1
        # restriction to non-constant modes has full rank
        assert np.linalg.matrix_rank(S[1:, 1:]) == q

    @pytest.mark.parametrize("q,s", [(2, 1), (3, 2), (3, 3), (4, 2)])
    def test_closed_forms_against_quadrature(self, q, s):
        # independent oracle: dense Gauss quadrature of P'_m P'_n products
        spec = make_basis(q, s, 1)
        r = gauss_rule(q + s + 2)
        _, D = legendre_table(q, r.nodes)
        S_oracle = (D * r.weights[:, None]).T @ D
        np.testing.assert_allclose(spec.ref.stiffness_q, S_oracle, atol=1e-12)
        _, Ds = legendre_table(s, r.nodes)
        G_oracle = (Ds * r.weights[:, None]).T @ D
        np.testing.assert_allclose(spec.ref.mixed_stiffness, G_oracle, atol=1e-12)

    def test_2d_matrices_are_kron_products(self):
        b1 = make_basis(2, 1, 1)
        b2 = make_basis(2, 1, 2)
        np.testing.assert_allclose(
            b2.ref.mass_q, np.kron(b1.ref.mass_q, b1.ref.mass_q), atol=1e-14)
        expected = (np.kron(b1.ref.stiffness_q, b1.ref.mass_q)
                    + np.kron(b1.ref.mass_q, b1.ref.stiffness_q))
        np.testing.assert_allclose(b2.ref.stiffness_q, expected, atol=1e-13)

    def test_2d_tensor_matches_1d_along_grid_line(self):
        # my = 0 modes evaluated along eta = const reduce to the 1D basis
        b1 = make_basis(3, 3, 1)
        b2 = make_basis(3, 3, 2)
        nq = len(b1.rule)
        for mx in range(4):
            col_2d = b2.Vq[:, mx * 4].reshape(nq, nq)[:, 0]  # eta = first node
            eta0_val = b1.Vq[0, 0]  # P_0 of eta node = 1
            np.testing.assert_allclose(col_2d, b1.Vq[:, mx] * eta0_val, atol=1e-14)


class TestBasisSpecValidation:
    def test_q_zero_rejected(self):
        with pytest.raises(ValueError):
            make_basis(0, 0, 1)

    @pytest.mark.parametrize("q,s", [(3, 0), (2, 3), (1, -1)])
    def test_degree_band_enforced(self, q, s):
        with pytest.raises(ValueError):
            BasisSpec(q, s, 1)

    def test_bad_dimension(self):
        with pytest.raises(ValueError):
            BasisSpec(2, 2, 3)

    def test_pad_embeds_exactly(self, rng):
        b = make_basis(3, 2, 2)
        v = rng.standard_normal((5, b.dim_s)) + 1j * rng.standard_normal((5, b.dim_s))
        padded = b.pad_to_q(v)
        # padded polynomial equals the original on the quadrature grid
        np.testing.assert_allclose(padded @ b.Vq.T, v @ b.Vs.T, atol=1e-14)
