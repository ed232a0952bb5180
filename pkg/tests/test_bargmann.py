import numpy as np
import pytest

from beurlinglab.bargmann import (
    QuadratureBargmann,
    bargmann_eval,
    bargmann_handle,
    coeff_bridge,
    coeff_bridge_inverse,
    contour_taylor,
    default_contour_radii,
    duality_check,
    polydisc_grid,
    product_estimate_check,
    zeta_monomial,
)
from beurlinglab.functions import FiniteHermite, make_ft_eigenfunction
from beurlinglab.hermite import HermiteExpansion, multiindex_enumerate, project, synthesize

BRIDGE1 = (2 * np.sqrt(np.pi)) ** -0.5   # = pi^{-1/4}/sqrt(2)


def phi(k):
    return FiniteHermite(HermiteExpansion(1, {(k,): 1.0}))


def random_fh(n, D, seed):
    return FiniteHermite(make_ft_eigenfunction(n, D, seed % 4, seed, amplitude_decay=0.0))


class TestBargmannEval:
    def test_phi0_constant(self):
        z = np.array([[0.5 + 0.3j], [2.0 - 1.0j], [0.0j]])
        vals = bargmann_eval(phi(0), z)
        assert np.max(np.abs(vals - np.pi ** -0.25)) < 1e-14

    def test_phi0_quadrature_path(self):
        z = np.array([[0.5 + 0.3j], [-1.0 + 2.0j]])
        vals = bargmann_eval(phi(0), z, method="quadrature")
        assert np.max(np.abs(vals - np.pi ** -0.25)) < 1e-12

    def test_phi1_linear(self):
        z = np.array([[0.7 - 0.2j], [1.5 + 1.0j]])
        vals = bargmann_eval(phi(1), z)
        assert np.max(np.abs(vals - BRIDGE1 * z[:, 0])) < 1e-14

    def test_linearity(self):
        e1 = HermiteExpansion(1, {(0,): 0.3, (2,): -0.6})
        e2 = HermiteExpansion(1, {(1,): 1.1, (2,): 0.25})
        tot = HermiteExpansion(1, {(0,): 0.3, (1,): 1.1, (2,): -0.35})
        z = polydisc_grid(1, 1.3, 6)
        v = bargmann_eval(FiniteHermite(e1), z) + bargmann_eval(FiniteHermite(e2), z)
        assert np.max(np.abs(v - bargmann_eval(FiniteHermite(tot), z))) < 1e-13

    def test_exact_matches_quadrature_on_polydisc(self):
        f = random_fh(1, 8, 7)
        grid = polydisc_grid(1, 1.5, 8)
        dev = np.max(np.abs(bargmann_handle(f, "exact")(grid)
                            - bargmann_handle(f, "quadrature")(grid)))
        assert dev < 1e-10


class TestDuality:
    def test_phi0(self):
        assert duality_check(phi(0), polydisc_grid(1, 2.0, 5)) < 1e-14

    def test_phi1(self):
        assert duality_check(phi(1), polydisc_grid(1, 2.0, 5)) < 1e-10

    def test_random_degree8(self):
        for seed in (1, 2, 3):
            dev = duality_check(random_fh(1, 8, seed), polydisc_grid(1, 2.0, 5))
            assert dev < 1e-8

    def test_quadrature_path_refines(self):
        f = phi(2)
        grid = polydisc_grid(1, 1.0, 4)
        coarse = np.max(np.abs(
            QuadratureBargmann(f, nodes=12)(-1j * grid)
            - QuadratureBargmann(FiniteHermite(HermiteExpansion(
                1, {(2,): (-1j) ** 2})), nodes=12)(grid)))
        fine = duality_check(f, grid, method="quadrature")
        assert fine <= coarse + 1e-12


class TestContourTaylor:
    def test_monomial_exact(self):
        class Poly:
            dim = 1
            maxdeg = 2
            def __call__(self, z):
                return z[..., 0] ** 2
        tc = contour_taylor(Poly(), (1.0,), 8)
        assert tc.coeffs[(2,)] == pytest.approx(1.0, abs=1e-13)
        assert all(abs(v) < 1e-13 for a, v in tc.coeffs.items() if a != (2,))

    def test_bphi1_coefficient(self):
        tc = contour_taylor(bargmann_handle(phi(1)), (1.0,), 8)
        assert tc.coeffs[(1,)] == pytest.approx(BRIDGE1, abs=1e-13)

    def test_default_radii(self):
        assert default_contour_radii((4,)) == (3.0,)
        assert default_contour_radii((0, 12)) == (1.0, 5.0)

    def test_refuses_underresolved(self):
        class Poly:
            dim = 1
            maxdeg = 9
            def __call__(self, z):
                return z[..., 0]
        with pytest.raises(ValueError):
            contour_taylor(Poly(), (1.0,), 8)

    def test_doubling_stability_on_polynomials(self):
        f = random_fh(1, 6, 5)
        F = bargmann_handle(f)
        t1 = contour_taylor(F, (1.2,), 28, max_degree=6)
        t2 = contour_taylor(F, (1.2,), 56, max_degree=6)
        dev = max(abs(t1.coeffs[a] - t2.coeffs[a]) for a in t1.coeffs)
        assert dev < 1e-13

    def test_aliasing_estimate_reported(self):
        F = bargmann_handle(random_fh(1, 4, 9))
        tc = contour_taylor(F, (1.0,), 24, max_degree=4, aliasing_check=True)
        assert tc.aliasing_estimate < 1e-13

    def test_targeted_index_with_default_radii(self):
        # extracting one high coefficient on the circle tuned to its index
        tc = contour_taylor(bargmann_handle(phi(6)), default_contour_radii((6,)),
                            2 * 6 + 16, max_degree=6)
        e = coeff_bridge(tc)
        assert e.coeffs[(6,)] == pytest.approx(1.0, abs=1e-11)


class TestBridge:
    def test_c0_consistency(self):
        # c_0 = pi^{-n/4} <-> (f, Phi_0) = 1
        tc = contour_taylor(bargmann_handle(phi(0)), (1.0,), 8)
        e = coeff_bridge(tc)
        assert e.coeffs[(0,)] == pytest.approx(1.0, abs=1e-13)
        assert tc.coeffs[(0,)] == pytest.approx(np.pi ** -0.25, abs=1e-13)

    def test_roundtrip_high_degree(self):
        e = HermiteExpansion(1, {(40,): 0.7, (3,): -0.2})
        tc = coeff_bridge_inverse(e)
        back = coeff_bridge(tc)
        assert back.coeffs[(40,)] == pytest.approx(0.7, rel=1e-12)
        assert back.coeffs[(3,)] == pytest.approx(-0.2, rel=1e-12)

    def test_bridge_overflow_guard(self):
        e = HermiteExpansion(1, {(1200,): 1.0})
        with pytest.raises(OverflowError):
            coeff_bridge_inverse(e)

    @pytest.mark.parametrize("n", [1, 2])
    def test_two_coefficient_paths_agree(self, n):
        e = make_ft_eigenfunction(n, 8, 1, seed=42, amplitude_decay=0.0)
        f = FiniteHermite(e)
        direct = project(f, n, 8)
        Bq = QuadratureBargmann(f, nodes=140 if n == 1 else 64)
        bridged = coeff_bridge(contour_taylor(Bq, (1.5,) * n, 32, max_degree=8))
        v1, _ = direct.coefficient_vector(8)
        v2, _ = bridged.coefficient_vector(8)
        assert np.max(np.abs(v1 - v2)) < 1e-8

    def test_fock_parseval(self):
        # sum |c_alpha|^2 2^alpha alpha! pi^{n/2} = ||f||^2 via the bridge
        e = make_ft_eigenfunction(2, 6, 2, seed=8, amplitude_decay=0.0)
        from math import factorial
        tc = coeff_bridge_inverse(e)
        total = 0.0
        for a, c in tc.coeffs.items():
            w = 2.0 ** sum(a) * np.prod([factorial(k) for k in a]) * np.pi
            total += abs(c) ** 2 * w
        assert total == pytest.approx(e.norm2() ** 2, rel=1e-8)


class TestProductEstimate:
    def test_phi0_real_axis(self):
        grid = np.linspace(-3, 3, 13)[:, None] + 0j
        rep = product_estimate_check(phi(0), 0.5, grid)
        assert rep.max_ratio <= 1.0

    def test_origin_row(self):
        rep = product_estimate_check(phi(0), 0.0, np.zeros((1, 1), dtype=complex),
                                     reltol=1e-8)
        assert rep.max_ratio <= 1.0

    def test_eigenfunction_square_root_form(self):
        # for an eigenfunction |B fhat| = |Bf|, so the product is |Bf|^2
        f = random_fh(1, 8, 12)
        grid = polydisc_grid(1, 2.0, 6)
        Bf = bargmann_handle(f)
        Bfh = bargmann_handle(FiniteHermite(
            __import__("beurlinglab.hermite", fromlist=["fourier_diagonal"])
            .fourier_diagonal(f.expansion)))
        assert np.max(np.abs(np.abs(Bf(grid)) - np.abs(Bfh(grid)))) < 1e-10

    def test_bound_holds_on_complex_grid(self):
        f = random_fh(1, 8, 21)
        grid = np.concatenate([polydisc_grid(1, r, 8) for r in (1.0, 2.5)])
        for a in (0.3, 0.7):
            rep = product_estimate_check(f, a, grid, reltol=1e-7)
            assert rep.max_ratio <= 1.0 + 1e-9


class TestZeta:
    def test_normalisation_matches_bridge(self):
        z = np.array([1.3 + 0.4j])
        for k in (0, 1, 5):
            import scipy.special as sp
            norm = np.sqrt(2.0 ** k * sp.gamma(k + 1) * np.sqrt(np.pi))
            assert zeta_monomial((k,), z) == pytest.approx(z[0] ** k / norm)
