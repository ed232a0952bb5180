import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from beurlinglab.hermite import (
    HermiteExpansion,
    QuadratureConvergenceError,
    QuadratureRule,
    fourier_diagonal,
    gauss_hermite_rule,
    grlex_key,
    hermite_eval,
    hermite_eval_flagged,
    hermite_table,
    mehler_kernel,
    mehler_partial_sum,
    multiindex_enumerate,
    project,
    synthesize,
)


class TestMultiIndex:
    def test_1d_grading(self):
        assert multiindex_enumerate(1, 2) == [(0,), (1,), (2,)]

    def test_graded_lex_order(self):
        assert multiindex_enumerate(2, 1) == [(0, 0), (1, 0), (0, 1)]

    def test_count(self):
        assert len(multiindex_enumerate(2, 2)) == 6  # C(4,2)
        assert len(multiindex_enumerate(3, 4)) == 35  # C(7,3)

    def test_no_duplicates_and_sorted(self):
        idx = multiindex_enumerate(3, 5)
        assert len(set(idx)) == len(idx)
        assert idx == sorted(idx, key=grlex_key)

    def test_bad_args(self):
        with pytest.raises(ValueError):
            multiindex_enumerate(0, 3)
        with pytest.raises(ValueError):
            multiindex_enumerate(2, -1)

    @given(st.lists(st.tuples(st.integers(0, 9), st.integers(0, 9)),
                    min_size=2, max_size=20))
    @settings(max_examples=50, deadline=None)
    def test_grlex_is_strict_total_order(self, alphas):
        keys = [grlex_key(a) for a in alphas]
        order = sorted(range(len(alphas)), key=lambda i: keys[i])
        for i, j in zip(order[:-1], order[1:]):
            if alphas[i] != alphas[j]:
                assert keys[i] < keys[j]


class TestHermiteEval:
    def test_h0_at_zero(self):
        assert hermite_eval((0,), 0.0) == pytest.approx(np.pi ** -0.25, abs=1e-14)

    def test_h1_odd(self):
        assert hermite_eval((1,), 0.0) == 0.0

    def test_h2_at_zero(self):
        # recurrence from h_0, h_1: h_2(0) = -h_0(0)/sqrt(2)
        assert hermite_eval((2,), 0.0) == pytest.approx(-np.pi ** -0.25 / np.sqrt(2),
                                                        abs=1e-14)

    def test_underflow_flag(self):
        val, flag = hermite_eval_flagged((0,), 40.0)
        assert val == 0.0 and flag
        val, flag = hermite_eval_flagged((3,), 1.0)
        assert not flag

    def test_tensor_product(self):
        v = hermite_eval((2, 3), [0.4, -0.7])
        assert v == pytest.approx(hermite_eval((2,), 0.4) * hermite_eval((3,), -0.7))

    def test_recurrence_stability_bound(self):
        # normalised Hermite functions are uniformly bounded by ~0.816
        x = np.linspace(-40, 40, 401)
        table = hermite_table(500, x)
        assert np.max(np.abs(table)) <= 1.1

    def test_complex_argument_entire(self):
        # agreement with the real recurrence on the real axis
        z = np.array([0.3 + 0.0j])
        assert hermite_table(5, z)[5][0] == pytest.approx(
            hermite_table(5, np.array([0.3]))[5][0])


class TestQuadrature:
    def test_single_node(self):
        r = gauss_hermite_rule(1)
        assert r.nodes[0] == pytest.approx(0.0)
        assert r.weights[0] == pytest.approx(np.sqrt(np.pi))

    def test_two_nodes(self):
        r = gauss_hermite_rule(2)
        assert r.nodes == pytest.approx([-1 / np.sqrt(2), 1 / np.sqrt(2)])
        assert r.weights == pytest.approx([np.sqrt(np.pi) / 2] * 2)

    def test_gaussian_moment(self):
        r = gauss_hermite_rule(2)
        assert np.sum(r.weights * r.nodes ** 2) == pytest.approx(np.sqrt(np.pi) / 2)

    def test_weight_sum(self):
        for m in (1, 5, 40):
            assert gauss_hermite_rule(m).weights.sum() == pytest.approx(np.sqrt(np.pi))

    def test_polynomial_exactness(self):
        # degree 2m-1 exactness against e^{-x^2}
        m = 7
        r = gauss_hermite_rule(m)
        from scipy.special import gamma
        for k in range(0, 2 * m - 1, 2):
            exact = gamma((k + 1) / 2)
            assert np.sum(r.weights * r.nodes ** k) == pytest.approx(exact, rel=1e-12)

    def test_validation(self):
        with pytest.raises(ValueError):
            gauss_hermite_rule(0)
        with pytest.raises(ValueError):
            QuadratureRule(nodes=np.array([1.0, 0.0]), weights=np.array([1.0, 1.0]))
        with pytest.raises(ValueError):
            QuadratureRule(nodes=np.array([0.0, 1.0]), weights=np.array([1.0, -1.0]))


class TestProjectSynthesize:
    def test_orthonormality_projection(self):
        f = lambda p: synthesize(HermiteExpansion(1, {(2,): 1.0}), p)
        e = project(f, 1, 6)
        assert e.coeffs[(2,)] == pytest.approx(1.0, abs=1e-12)
        assert all(abs(c) < 1e-12 for a, c in e.coeffs.items() if a != (2,))

    def test_x_gaussian_coefficient(self):
        # x e^{-x^2/2} = pi^{1/4}/sqrt(2) h_1
        e = project(lambda p: p[:, 0] * np.exp(-p[:, 0] ** 2 / 2), 1, 5)
        assert e.coeffs[(1,)] == pytest.approx(np.pi ** 0.25 / np.sqrt(2), abs=1e-12)
        assert len(e.coeffs) == 1

    def test_parseval_random_expansion(self):
        rng = np.random.default_rng(7)
        idx = multiindex_enumerate(2, 5)
        e = HermiteExpansion(2, {a: c for a, c in
                                 zip(idx, rng.standard_normal(len(idx)))})
        back = project(lambda p: synthesize(e, p), 2, 5)
        assert back.norm2() ** 2 == pytest.approx(e.norm2() ** 2, rel=1e-12)

    def test_roundtrip_2d(self):
        rng = np.random.default_rng(11)
        idx = multiindex_enumerate(2, 8)
        coeffs = {a: complex(u, v) for a, (u, v) in
                  zip(idx, rng.standard_normal((len(idx), 2)))}
        e = HermiteExpansion(2, coeffs)
        back = project(lambda p: synthesize(e, p), 2, 8)
        v1, _ = e.coefficient_vector(8)
        v2, _ = back.coefficient_vector(8)
        assert np.max(np.abs(v1 - v2)) < 1e-10

    def test_empty_expansion(self):
        e = HermiteExpansion(1, {})
        assert synthesize(e, np.array([0.7])) == 0.0

    def test_phi0_value(self):
        e = HermiteExpansion(1, {(0,): 1.0})
        assert synthesize(e, np.array([0.0])) == pytest.approx(np.pi ** -0.25)

    def test_convergence_check_passes_for_smooth(self):
        project(lambda p: np.exp(-p[:, 0] ** 2), 1, 4, check=True)

    def test_convergence_check_raises_for_rough(self):
        # a slowly decaying, kinked function does not converge at m = 8
        with pytest.raises(QuadratureConvergenceError):
            project(lambda p: 1.0 / (1.0 + np.abs(p[:, 0]) ** 3), 1, 2,
                    nodes=8, check=True, tol=1e-12)

    def test_pruning(self):
        e = HermiteExpansion(1, {(0,): 1.0, (1,): 1e-15})
        assert (1,) not in e.coeffs

    def test_invariants(self):
        with pytest.raises(ValueError):
            HermiteExpansion(2, {(0,): 1.0})
        with pytest.raises(ValueError):
            HermiteExpansion(1, {(-1,): 1.0})


class TestMehler:
    def test_r_zero_single_term(self):
        x, y = np.array([0.3]), np.array([-1.1])
        want = np.pi ** -0.5 * np.exp(-(x[0] ** 2 + y[0] ** 2) / 2)
        assert mehler_kernel(0.0, x, y) == pytest.approx(want, rel=1e-14)

    def test_origin_value(self):
        for r in (0.2, 0.5, -0.8):
            want = np.pi ** -0.5 * (1 - r * r) ** -0.5
            assert mehler_kernel(r, [0.0], [0.0]) == pytest.approx(want, rel=1e-14)

    def test_partial_sum_converges(self):
        k = mehler_kernel(0.5, [0.3], [0.3])
        s = mehler_partial_sum(0.5, [0.3], [0.3], 40)
        assert abs(k - s) < 1e-10

    def test_truncation_ratio(self):
        r = 0.5
        closed = mehler_kernel(r, [0.0], [0.0])
        errs = [abs(closed - mehler_partial_sum(r, [0.0], [0.0], K))
                for K in (20, 22)]
        ratio = errs[1] / errs[0]
        assert abs(ratio - r * r) <= 0.2 * r * r

    def test_domain(self):
        with pytest.raises(ValueError):
            mehler_kernel(1.0, [0.0], [0.0])
        with pytest.raises(ValueError):
            mehler_partial_sum(-1.5, [0.0], [0.0], 10)

    def test_2d(self):
        x = np.array([0.2, -0.4])
        y = np.array([0.1, 0.3])
        assert mehler_partial_sum(0.4, x, y, 30) == pytest.approx(
            mehler_kernel(0.4, x, y), abs=1e-10)


class TestFourierDiagonal:
    def test_gaussian_self_dual(self):
        e = HermiteExpansion(1, {(0,): 1.0})
        assert fourier_diagonal(e).coeffs == {(0,): 1.0 + 0.0j}

    def test_eigenvalue_minus_i(self):
        e = HermiteExpansion(1, {(1,): 1.0})
        assert fourier_diagonal(e).coeffs[(1,)] == -1.0j

    def test_fourth_power_identity_exact(self):
        rng = np.random.default_rng(3)
        idx = multiindex_enumerate(2, 7)
        e = HermiteExpansion(2, {a: complex(u, v) for a, (u, v) in
                                 zip(idx, rng.standard_normal((len(idx), 2)))})
        out = e
        for _ in range(4):
            out = fourier_diagonal(out)
        assert out.coeffs == e.coeffs

    def test_against_quadrature_transform(self):
        # direct quadrature of the Fourier integral vs the phase action
        rng = np.random.default_rng(5)
        e = HermiteExpansion(1, {(k,): c for k, c in
                                 enumerate(rng.standard_normal(7))})
        ehat = fourier_diagonal(e)
        rule = gauss_hermite_rule(80)
        lifted = np.exp(np.log(rule.weights) + rule.nodes ** 2)
        ys = np.linspace(-2, 2, 9)
        for y in ys:
            fx = synthesize(e, rule.nodes[:, None])
            val = np.sum(lifted * fx * np.exp(-1j * rule.nodes * y)) / np.sqrt(2 * np.pi)
            want = synthesize(ehat, np.array([y]))
            assert val == pytest.approx(want, abs=1e-8)
