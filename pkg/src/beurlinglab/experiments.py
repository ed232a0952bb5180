"""The acceptance battery: every numbered check of the verification plan as
a deterministic, seeded experiment returning typed report rows.

Each experiment function returns a list of ReportRow and is reachable from
the command line through ``run-all`` (and the topical subcommands).  All
randomness is drawn from fixed seeds, so two runs produce byte-identical
reports.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bargmann import (
    QuadratureBargmann,
    coeff_bridge,
    contour_taylor,
    duality_check,
    polydisc_grid,
    product_estimate_check,
)
from .envelopes import DecayEnvelope, decay_rate_fit, envelope_check
from .functional import ka_eval, scaling_fit, weighted_bdj
from .functions import (
    FiniteHermite,
    PolyGaussian,
    PolyGaussianForm,
    dilate,
    make_ft_eigenfunction,
)
from .heisenberg import kaverage_identity_check, laguerre_growth_fit, poisson_semigroup
from .hermite import (
    HermiteExpansion,
    gauss_hermite_rule,
    hermite_table,
    mehler_kernel,
    mehler_partial_sum,
    multiindex_enumerate,
    project,
)

SEEDS = (101, 202, 303, 404, 505)


@dataclass(frozen=True)
class ReportRow:
    experiment_id: str
    params: str
    measured: float
    reference: float
    rel_err: float
    verdict: str                    # pass / fail / inconclusive

    @staticmethod
    def make(experiment_id, params, measured, reference, ok, inconclusive=False):
        rel = abs(measured - reference) / max(abs(reference), 1e-300)
        verdict = "inconclusive" if inconclusive else ("pass" if ok else "fail")
        return ReportRow(experiment_id, params, float(measured), float(reference),
                         float(rel), verdict)


def gaussian_test_function(n=1):
    """The standard-width Gaussian e^{-|x|^2/2} (A = I/2)."""
    return PolyGaussianForm(PolyGaussian(n, {tuple([0] * n): 1.0}, 0.5 * np.eye(n)))


def ka_gaussian_reference(a):
    """Closed form for K_a of the 1-D standard Gaussian,
    (2 pi / sqrt(1-a^2)) (1 + (2/pi) arcsin a); confirmed against brute-force
    2-D quadrature in the test suite before being trusted here."""
    return 2 * np.pi / np.sqrt(1 - a * a) * (1 + 2 / np.pi * np.arcsin(a))


# ---------------------------------------------------------------------------
# acceptance experiments
# ---------------------------------------------------------------------------

def acc01_orthonormality():
    """Gram-matrix deviation of the Hermite basis, |alpha| <= 12, n in {1,2}."""
    rows = []
    D, m = 12, 32
    rule = gauss_hermite_rule(m)
    lifted = np.exp(np.log(rule.weights) + rule.nodes ** 2)
    H = hermite_table(D, rule.nodes)                       # (D+1, m)
    G1 = (H * lifted[None, :]) @ H.T                       # 1-D Gram
    dev1 = float(np.max(np.abs(G1 - np.eye(D + 1))))
    rows.append(ReportRow.make("acc01", "n=1;D=12;m=32", dev1, 0.0, dev1 < 1e-10))
    idx = multiindex_enumerate(2, D)
    G2 = np.empty((len(idx), len(idx)))
    for i, a in enumerate(idx):
        for j, b in enumerate(idx):
            G2[i, j] = G1[a[0], b[0]] * G1[a[1], b[1]]
    dev2 = float(np.max(np.abs(G2 - np.eye(len(idx)))))
    rows.append(ReportRow.make("acc01", "n=2;D=12;m=32", dev2, 0.0, dev2 < 1e-10))
    return rows


def acc02_mehler():
    """Mehler closed form vs the partial sum, plus the tail-decay ratio."""
    rows = []
    r, K = 0.5, 40
    rng = np.random.default_rng(SEEDS[0])
    pts = rng.uniform(-2.0, 2.0, size=(10, 2))
    worst = 0.0
    for x, y in pts:
        diff = abs(mehler_kernel(r, [x], [y]) - mehler_partial_sum(r, [x], [y], K))
        worst = max(worst, diff)
    rows.append(ReportRow.make("acc02", f"r={r};K={K};pts=10", worst, 0.0, worst < 1e-10))
    closed = mehler_kernel(r, [0.0], [0.0])
    errs = [abs(closed - mehler_partial_sum(r, [0.0], [0.0], K)) for K in (20, 22, 24)]
    for K0, e0, e1 in zip((20, 22), errs[:-1], errs[1:]):
        ratio = e1 / e0
        ok = abs(ratio - r * r) <= 0.2 * r * r
        rows.append(ReportRow.make("acc02", f"tail-ratio@0;r={r};K={K0}", ratio, r * r, ok))
    return rows


def acc03_ka_closed_form():
    """Quadrature K_a of the 1-D Gaussian against the arcsin closed form."""
    rows = []
    g = gaussian_test_function(1)
    for a in np.round(np.arange(0.1, 0.95, 0.1), 10):
        res = ka_eval(g, float(a), reltol=1e-8)
        ref = ka_gaussian_reference(float(a))
        ok = res.converged and abs(res.value - ref) / ref < 1e-6
        rows.append(ReportRow.make("acc03", f"a={a:g}", res.value, ref, ok))
    return rows


def acc04_scaling_exponents():
    """Fitted (1-a^2) exponents of E(R,S,a) for three monomial pairs.

    The (0,0) window [0.475, 0.525] is closed-form unattainable on the stated
    grid: the exact fitted slope is 0.53083 because the bounded arcsin factor
    still drifts like sqrt(1-a) at a = 0.999.  The row is reported honestly.
    """
    rows = []
    for (m1, m2) in ((0, 0), (1, 1), (2, 1)):
        target = (1 + m1 + m2) / 2.0
        fit = scaling_fit(({(m1,): 1.0}, {(m2,): 1.0}), reltol=1e-6)
        ok = abs(fit.exponent - target) <= 0.05 * target
        rows.append(ReportRow.make(
            "acc04", f"m1={m1};m2={m2};grid=0.9,0.99,0.999", fit.exponent, target, ok))
    return rows


def acc05_dilation_invariance():
    """K_a(f_delta) = K_a(f) at a = 0.5 for delta in {1/3, 3}."""
    rows = []
    cases = [("gaussian", gaussian_test_function(1)),
             ("eigenfunction", FiniteHermite(make_ft_eigenfunction(1, 8, 0, SEEDS[1])))]
    for name, f in cases:
        base = ka_eval(f, 0.5, reltol=1e-8)
        for delta in (1.0 / 3.0, 3.0):
            res = ka_eval(dilate(f, delta), 0.5, reltol=1e-8)
            rel = abs(res.value - base.value) / base.value
            ok = base.converged and res.converged and rel < 1e-6
            rows.append(ReportRow.make(
                "acc05", f"fn={name};delta={delta:g};a=0.5", res.value, base.value, ok))
    return rows


def acc06_bargmann_duality():
    """Bg(-iz) = B ghat(z) on a polydisc grid, random degree-8 expansions."""
    rows = []
    grid = np.concatenate([polydisc_grid(1, r, 5) for r in (0.5, 1.0, 1.5, 2.0, 2.5)])
    for seed in SEEDS:
        e = make_ft_eigenfunction(1, 8, seed % 4, seed, amplitude_decay=0.0)
        dev = duality_check(FiniteHermite(e), grid)
        rows.append(ReportRow.make("acc06", f"seed={seed};D=8", dev, 0.0, dev < 1e-8))
    return rows


def acc07_coefficient_paths():
    """project(f) against Bargmann quadrature -> contour -> bridge, D = 8."""
    rows = []
    for n in (1, 2):
        e = make_ft_eigenfunction(n, 8, 1, SEEDS[2], amplitude_decay=0.0)
        f = FiniteHermite(e)
        direct = project(f, n, 8)
        Bq = QuadratureBargmann(f, nodes=140 if n == 1 else 64)
        tc = contour_taylor(Bq, (1.5,) * n, 2 * 8 + 16, max_degree=8)
        bridged = coeff_bridge(tc)
        v1, _ = direct.coefficient_vector(8)
        v2, _ = bridged.coefficient_vector(8)
        dev = float(np.max(np.abs(v1 - v2)))
        rows.append(ReportRow.make("acc07", f"n={n};D=8", dev, 0.0, dev < 1e-8))
    return rows


def acc08_product_estimate():
    """|Bf B fhat| <= pi^{-n} K_a e^{(|y|^2 + (1-a)/(1+a)|x|^2)/2}."""
    rows = []
    zgrid = np.concatenate([
        np.linspace(-3, 3, 13)[:, None] + 0j,
        polydisc_grid(1, 1.5, 8),
        polydisc_grid(1, 3.0, 8),
    ])
    cases = [("phi0", FiniteHermite(HermiteExpansion(1, {(0,): 1.0})))]
    cases.append(("eigenfunction",
                  FiniteHermite(make_ft_eigenfunction(1, 8, 2, SEEDS[3]))))
    for name, f in cases:
        for a in (0.3, 0.7):
            rep = product_estimate_check(f, a, zgrid, reltol=1e-7)
            ok = rep.max_ratio <= 1.0 + 1e-9
            rows.append(ReportRow.make(
                "acc08", f"fn={name};a={a:g}", rep.max_ratio, 1.0, ok))
    return rows


def acc09_eigenfunction_envelope():
    """Envelope dominance for Fourier eigenfunctions at a = 0.5, n in {1,2}."""
    rows = []
    a = 0.5
    for n in (1, 2):
        for seed in SEEDS:
            e = make_ft_eigenfunction(n, 12, seed % 4, seed)
            ka = ka_eval(FiniteHermite(e), a, reltol=1e-6 if n == 1 else 1e-2)
            env = DecayEnvelope("eigenfunction", {"a": a, "n": n, "ka": ka.value})
            rep = envelope_check(e, env)
            ok = ka.converged and rep.dominated
            rows.append(ReportRow.make(
                "acc09", f"n={n};seed={seed};a={a};D=12", rep.slope, 0.01,
                ok))
    return rows


def acc10_expdecay_envelope():
    """Exponential-decay envelope dominance for Gaussians, t in {0.5, 1}."""
    rows = []
    psi = dilate(gaussian_test_function(1), 2.0)     # e^{-2x^2}, infinitely many coeffs
    coeffs = project(psi, 1, 24)
    for t in (0.5, 1.0):
        env = DecayEnvelope("expdecay", {"t": t, "n": 1})
        rep = envelope_check(coeffs, env)
        rows.append(ReportRow.make(
            "acc10", f"psi=dilated-gaussian;t={t:g}", rep.slope, 0.01, rep.dominated))
    phi0 = HermiteExpansion(1, {(0,): 1.0})
    env = DecayEnvelope("expdecay", {"t": 1.0, "n": 1})
    rep = envelope_check(phi0, env)
    rows.append(ReportRow.make("acc10", "psi=phi0;t=1", rep.slope, 0.01, rep.dominated))
    return rows


def acc11_entire_vector_criterion():
    """Semigroup images pass the entire-vector envelope at t' < t but fail
    a geometric-law fit: the no-go content of the subcritical condition."""
    rows = []
    D = 36
    g = HermiteExpansion(1, {(k,): 1.0 / np.sqrt(D + 1.0) for k in range(D + 1)})
    f = poisson_semigroup(g, 0.8)
    env = DecayEnvelope("entire", {"t": 0.76, "n": 1})
    rep = envelope_check(f, env)
    rows.append(ReportRow.make("acc11", "t=0.8;t'=0.76;D=36", rep.slope, 0.01,
                               rep.dominated))
    sq = decay_rate_fit(f, "sqrt-exponential")
    geo = decay_rate_fit(f, "geometric")
    ok = geo.residual > 10.0 * max(sq.residual, 1e-300)
    rows.append(ReportRow.make("acc11", "residual-ratio", geo.residual,
                               10.0 * sq.residual, ok))
    return rows


def acc12_decay_fit_recovery():
    """Planted sqrt-exponential rate recovered exactly; semigroup rate to 0.04."""
    rows = []
    planted = HermiteExpansion(
        1, {(k,): np.exp(-2.0 * np.sqrt(2 * k + 1)) for k in range(31)})
    fit = decay_rate_fit(planted, "sqrt-exponential")
    rows.append(ReportRow.make("acc12", "planted;t=2", fit.t_hat, 2.0,
                               abs(fit.t_hat - 2.0) < 1e-9))
    rng = np.random.default_rng(SEEDS[4])
    g = HermiteExpansion(1, {(k,): v for k, v in
                             enumerate(rng.uniform(0.5, 2.0, size=41))})
    f = poisson_semigroup(g, 0.8)
    fit = decay_rate_fit(f, "sqrt-exponential")
    rows.append(ReportRow.make("acc12", "semigroup;t=0.8;D=40", fit.t_hat, 0.8,
                               abs(fit.t_hat - 0.8) <= 0.04))
    return rows


def acc13_kaverage_identity():
    """The n=1 circle-average norm identity at relative 1e-4."""
    rows = []
    cases = [("phi0", HermiteExpansion(1, {(0,): 1.0}), (0.3, 0.0)),
             ("phi1", HermiteExpansion(1, {(1,): 1.0}), (0.2, 0.4)),
             ("random-D4", make_ft_eigenfunction(1, 4, 1, SEEDS[0],
                                                 amplitude_decay=0.0), (0.3, 0.3))]
    for name, e, (y, v) in cases:
        rep = kaverage_identity_check(e, y, v, angles=64)
        ok = rep.rel_deviation < 1e-4
        rows.append(ReportRow.make(
            "acc13", f"fn={name};y={y};v={v};M=64", rep.rel_deviation, 0.0, ok))
    return rows


def acc14_laguerre_growth():
    """Imaginary-argument Laguerre growth exponent against the classical rate."""
    slope = laguerre_growth_fit(0, 1.0, range(20, 61))
    ok = 0.9 <= slope <= 1.1
    return [ReportRow.make("acc14", "nu=0;rho=1;k=20..60", slope, 1.0, ok)]


def acc15_weighted_functional():
    """Finite / divergent verdicts of the critical weighted functional."""
    rows = []
    g = gaussian_test_function(1)
    res = weighted_bdj(g, 2.0)
    rows.append(ReportRow.make("acc15", "gaussian;N=2", res.value, res.value,
                               res.status == "converged" and np.isfinite(res.value)))
    res = weighted_bdj(g, 0.0)
    rows.append(ReportRow.make("acc15", "gaussian;N=0", 1.0 if res.status == "diverged" else 0.0,
                               1.0, res.status == "diverged"))
    chirp = PolyGaussianForm(PolyGaussian(1, {(0,): 1.0}, [[0.5]], [[0.5]]))
    res = weighted_bdj(chirp, 10.0)
    rows.append(ReportRow.make("acc15", "chirp;B=0.5;N=10",
                               1.0 if res.status == "diverged" else 0.0,
                               1.0, res.status == "diverged"))
    return rows


def acc16_determinism():
    """Two in-process runs of a representative sub-battery must emit
    byte-identical reports (the full double run is available via the CLI)."""
    from .cli import render_report_bytes
    subset = ("acc01", "acc02", "acc03", "acc06", "acc13", "acc14")
    rows1 = [r for name in subset for r in REGISTRY[name]()]
    rows2 = [r for name in subset for r in REGISTRY[name]()]
    b1 = render_report_bytes(rows1)
    b2 = render_report_bytes(rows2)
    ok = b1 == b2
    return [ReportRow.make("acc16", f"subset={','.join(subset)}",
                           1.0 if ok else 0.0, 1.0, ok)]


REGISTRY = {
    "acc01": acc01_orthonormality,
    "acc02": acc02_mehler,
    "acc03": acc03_ka_closed_form,
    "acc04": acc04_scaling_exponents,
    "acc05": acc05_dilation_invariance,
    "acc06": acc06_bargmann_duality,
    "acc07": acc07_coefficient_paths,
    "acc08": acc08_product_estimate,
    "acc09": acc09_eigenfunction_envelope,
    "acc10": acc10_expdecay_envelope,
    "acc11": acc11_entire_vector_criterion,
    "acc12": acc12_decay_fit_recovery,
    "acc13": acc13_kaverage_identity,
    "acc14": acc14_laguerre_growth,
    "acc15": acc15_weighted_functional,
    "acc16": acc16_determinism,
}

KNOWN_UNATTAINABLE = {
    # exact mathematics puts the fitted exponent at 0.53083 on this grid:
    # the arcsin prefactor converges, but only at a sqrt(1-a) rate, which a
    # three-point fit ending at a=0.999 still feels; the +-5% window around
    # 0.5 cannot contain the true value, so this row fails by construction
    ("acc04", "m1=0;m2=0;grid=0.9,0.99,0.999"),
}
