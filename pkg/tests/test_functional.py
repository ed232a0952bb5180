import numpy as np
import pytest
from scipy import integrate

from beurlinglab.functional import (
    FunctionalResult,
    e_monomial_bound,
    e_poly_quad,
    exp_moment,
    fit_scaling_samples,
    ka_eval,
    scaling_fit,
    weighted_bdj,
)
from beurlinglab.functions import (
    FiniteHermite,
    PolyGaussian,
    PolyGaussianForm,
    dilate,
    fourier,
    make_ft_eigenfunction,
)
from beurlinglab.hermite import HermiteExpansion


def gaussian(n=1):
    return PolyGaussianForm(PolyGaussian(n, {tuple([0] * n): 1.0}, 0.5 * np.eye(n)))


def ka_gaussian_closed(a):
    return 2 * np.pi / np.sqrt(1 - a * a) * (1 + 2 / np.pi * np.arcsin(a))


class TestClosedFormOracle:
    """The arcsin closed form for the 1-D Gaussian is confirmed against an
    independent brute-force 2-D quadrature before anything trusts it."""

    @pytest.mark.parametrize("a", [0.3, 0.6])
    def test_brute_force_confirms_closed_form(self, a):
        val, err = integrate.dblquad(
            lambda y, x: np.exp(-0.5 * x * x - 0.5 * y * y + a * abs(x * y)),
            -30, 30, lambda x: -30, lambda x: 30, epsabs=1e-10, epsrel=1e-10)
        assert val == pytest.approx(ka_gaussian_closed(a), rel=1e-9)

    def test_quadrature_engine_matches_brute_force(self):
        # orthant-decomposition consistency against a direct global adaptive
        # evaluation (scipy's), a <= 0.5
        a = 0.5
        res = ka_eval(gaussian(), a, reltol=1e-9)
        val, err = integrate.dblquad(
            lambda y, x: np.exp(-0.5 * x * x - 0.5 * y * y + a * abs(x * y)),
            -30, 30, lambda x: -30, lambda x: 30, epsabs=1e-11, epsrel=1e-11)
        assert res.value == pytest.approx(val, rel=1e-8)

    def test_orthant_consistency_with_polynomial_factor(self):
        a = 0.4
        res = e_poly_quad({(1,): 1.0}, {(2,): 1.0}, a, reltol=1e-9)
        val, err = integrate.dblquad(
            lambda y, x: abs(x) * y * y * np.exp(-0.5 * x * x - 0.5 * y * y
                                                 + a * abs(x * y)),
            -30, 30, lambda x: -30, lambda x: 30, epsabs=1e-11, epsrel=1e-11)
        assert res.value == pytest.approx(val, rel=1e-8)


class TestKaEval:
    def test_a_zero_separates(self):
        res = ka_eval(gaussian(), 0.0, reltol=1e-9)
        assert res.value == pytest.approx(2 * np.pi, rel=1e-12)

    def test_example_a06(self):
        res = ka_eval(gaussian(), 0.6, reltol=1e-9)
        assert res.value == pytest.approx(ka_gaussian_closed(0.6), rel=1e-9)
        assert res.converged

    @pytest.mark.parametrize("a", [0.9, 0.99, 0.999])
    def test_near_critical(self, a):
        res = ka_eval(gaussian(), a, reltol=1e-7)
        assert res.converged
        assert res.value == pytest.approx(ka_gaussian_closed(a), rel=1e-7)

    def test_monotone_in_a(self):
        vals = [ka_eval(gaussian(), a, reltol=1e-8).value
                for a in (0.0, 0.2, 0.4, 0.6, 0.8)]
        assert all(b > a for a, b in zip(vals[:-1], vals[1:]))

    def test_dilation_invariance(self):
        f = gaussian()
        base = ka_eval(f, 0.5, reltol=1e-8).value
        for delta in (0.5, 2.0):
            v = ka_eval(dilate(f, delta), 0.5, reltol=1e-8).value
            assert v == pytest.approx(base, rel=1e-7)

    def test_symmetry_under_transform(self):
        e = make_ft_eigenfunction(1, 8, 1, seed=3)
        f = FiniteHermite(e)
        v1 = ka_eval(f, 0.7, reltol=1e-8).value
        v2 = ka_eval(fourier(f), 0.7, reltol=1e-8).value
        assert v2 == pytest.approx(v1, rel=1e-6)

    def test_domain(self):
        with pytest.raises(ValueError):
            ka_eval(gaussian(), 1.0)
        with pytest.raises(ValueError):
            ka_eval(gaussian(), -0.1)

    def test_certificate_relation(self):
        res = ka_eval(gaussian(), 0.5, reltol=1e-7)
        assert isinstance(res, FunctionalResult)
        assert res.converged and res.error <= 1e-7 * res.value

    def test_radial_gaussian_2d(self):
        # reduction oracle: K_a = 2 pi int s e^{-s^2/2} M(a s) sqrt(2pi) ds,
        # M(b) = sqrt(2pi) e^{b^2/2} (1 + erf(b/sqrt(2)))
        from scipy.special import erf
        a = 0.5
        f = lambda s: s * np.exp(-s * s * (1 - a * a) / 2) * (1 + erf(a * s / np.sqrt(2)))
        v, _ = integrate.quad(f, 0, 60, limit=500)
        ref = (2 * np.pi) ** 2 * v
        res = ka_eval(gaussian(2), a)
        assert res.converged
        assert res.value == pytest.approx(ref, rel=5e-3)


class TestMonomialBound:
    def test_j0_k0_closed_form(self):
        for a in (0.0, 0.3, 0.8):
            assert e_monomial_bound(0, 0, a) == pytest.approx(
                2 * np.pi / np.sqrt(1 - a * a), rel=1e-13)

    def test_a_zero_single_term(self):
        from scipy.special import gamma
        j, k = 3, 4
        want = 2 ** ((j + k + 2) / 2) * gamma((j + 1) / 2) * gamma((k + 1) / 2)
        assert e_monomial_bound(j, k, 0.0) == pytest.approx(want, rel=1e-13)

    def test_dominates_signed_kernel(self):
        # the sum bounds the e^{+axy} integral; the absolute kernel unfolds
        # onto four positive quadrants and is dominated by twice the sum
        j, k, a = 2, 3, 0.9
        signed, _ = integrate.dblquad(
            lambda y, x: abs(x) ** j * abs(y) ** k
            * np.exp(-0.5 * x * x - 0.5 * y * y + a * x * y),
            -35, 35, lambda x: -35, lambda x: 35, epsabs=1e-8, epsrel=1e-8)
        S = e_monomial_bound(j, k, a)
        assert S >= signed
        q = e_poly_quad({(j,): 1.0}, {(k,): 1.0}, a, reltol=1e-8)
        assert 2 * S >= q.value > S  # the raw sum does NOT dominate e^{a|xy|}

    @pytest.mark.parametrize("a", [0.1, 0.5, 0.9])
    def test_doubled_sum_dominates_grid(self, a):
        for j in range(5):
            for k in range(5):
                q = e_poly_quad({(j,): 1.0}, {(k,): 1.0}, a, reltol=1e-7)
                assert q.converged
                assert 2 * e_monomial_bound(j, k, a) >= q.value

    def test_domain(self):
        with pytest.raises(ValueError):
            e_monomial_bound(1, 1, 1.0)


class TestEPolyQuad:
    def test_constant_pair_matches_gaussian(self):
        a = 0.45
        v1 = e_poly_quad({(0,): 1.0}, {(0,): 1.0}, a, reltol=1e-9).value
        v2 = ka_eval(gaussian(), a, reltol=1e-9).value
        assert v1 == pytest.approx(v2, rel=1e-9)

    def test_a_zero_separates_to_moments(self):
        from scipy.special import gamma
        j, k = 1, 2
        # int |x|^j e^{-x^2/2} = 2^{(j+1)/2} Gamma((j+1)/2) halves doubled
        mj = 2 ** ((j + 1) / 2) * gamma((j + 1) / 2)
        mk = 2 ** ((k + 1) / 2) * gamma((k + 1) / 2)
        v = e_poly_quad({(j,): 1.0}, {(k,): 1.0}, 0.0, reltol=1e-10).value
        assert v == pytest.approx(mj * mk, rel=1e-10)

    def test_prop_deg_sandwich(self):
        # (R,S) = (x, y): value/(1-a^2)^{-3/2} stays within fixed constants
        vals = {}
        for a in (0.9, 0.99, 0.999):
            vals[a] = e_poly_quad({(1,): 1.0}, {(1,): 1.0}, a, reltol=1e-7).value
        ratios = [vals[a] * (1 - a * a) ** 1.5 for a in vals]
        assert max(ratios) / min(ratios) < 1.2


class TestExpMoment:
    def test_l1_norm(self):
        res = exp_moment(gaussian(), 0.0)
        assert res.value == pytest.approx(np.sqrt(2 * np.pi), rel=1e-12)

    def test_completed_square_value(self):
        from scipy.special import erf
        res = exp_moment(gaussian(), 1.0)
        want = np.sqrt(2 * np.pi) * np.exp(0.5) * (1 + erf(1 / np.sqrt(2)))
        assert res.value == pytest.approx(want, rel=1e-10)

    def test_monotone_in_t(self):
        vals = [exp_moment(gaussian(), t).value for t in (0.0, 0.5, 1.0, 2.0)]
        assert all(b > a for a, b in zip(vals[:-1], vals[1:]))

    def test_order_none_ignores_t(self):
        assert exp_moment(gaussian(), 5.0, order="none").value == pytest.approx(
            np.sqrt(2 * np.pi), rel=1e-12)

    def test_2d(self):
        res = exp_moment(gaussian(2), 0.0)
        assert res.value == pytest.approx(2 * np.pi, rel=1e-8)

    def test_domain(self):
        with pytest.raises(ValueError):
            exp_moment(gaussian(), -1.0)
        with pytest.raises(ValueError):
            exp_moment(gaussian(), 1.0, order="quadratic")


class TestWeightedBdj:
    def test_gaussian_finite_at_n2(self):
        res = weighted_bdj(gaussian(), 2.0)
        assert res.status == "converged" and np.isfinite(res.value)

    def test_gaussian_diverges_at_n0(self):
        res = weighted_bdj(gaussian(), 0.0)
        assert res.status == "diverged" and res.value == np.inf

    def test_chirp_diverges(self):
        chirp = PolyGaussianForm(PolyGaussian(1, {(0,): 1.0}, [[0.5]], [[0.5]]))
        res = weighted_bdj(chirp, 10.0)
        assert res.status == "diverged" and res.value == np.inf

    def test_domain(self):
        with pytest.raises(ValueError):
            weighted_bdj(gaussian(), -1.0)


class TestScalingFit:
    def test_planted_law_recovered_exactly(self):
        samples = [(a, (1 - a * a) ** -0.5) for a in (0.9, 0.99, 0.999)]
        fit = fit_scaling_samples(samples)
        assert fit.exponent == pytest.approx(0.5, abs=1e-12)
        assert fit.residual < 1e-12

    def test_gaussian_fit_matches_exact_mathematics(self):
        # the closed form pins the fitted exponent at 0.53083 on this grid
        samples = [(a, ka_gaussian_closed(a)) for a in (0.9, 0.99, 0.999)]
        exact = fit_scaling_samples(samples).exponent
        fit = scaling_fit(gaussian(), reltol=1e-7)
        assert fit.exponent == pytest.approx(exact, abs=1e-5)
        assert exact == pytest.approx(0.530827, abs=1e-5)

    def test_monomial_pair_exponent(self):
        fit = scaling_fit(({(1,): 1.0}, {(1,): 1.0}), reltol=1e-6)
        assert abs(fit.exponent - 1.5) <= 0.075

    def test_refuses_bad_grid(self):
        with pytest.raises(ValueError):
            scaling_fit(gaussian(), a_grid=(0.5, 0.9))
        with pytest.raises(ValueError):
            scaling_fit(gaussian(), a_grid=(0.5, 0.9, 1.2))
