"""Bargmann transform: exact and quadrature evaluation, the duality identity
Bf(-iz) = B(fhat)(z), contour extraction of Taylor coefficients, the bridge
between Taylor and Hermite coefficients, and the subcritical product bound.

Conventions: Bf(z) = pi^{-n/2} e^{-z^2/4} int f(xi) e^{-|xi|^2/2} e^{z.xi} dxi
with z.xi = sum_j z_j xi_j (complex bilinear) and z^2 = sum_j z_j^2 (not
|z|^2).  In this normalisation B Phi_alpha(z) = zeta_alpha(z)
= z^alpha (2^alpha alpha! pi^{n/2})^{-1/2}, so Hermite coefficients and
Taylor coefficients differ by exactly that factor (the "bridge").
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .functions import FiniteHermite, as_test_function, fourier, tensor_weights
from .hermite import HermiteExpansion, gauss_hermite_rule, grlex_key, multiindex_enumerate

_LOG_BRIDGE_LIMIT = 690.0


def _log_bridge_factor(alpha, n):
    """log of (2^alpha alpha! pi^{n/2})^{1/2}."""
    s = sum(alpha) * np.log(2.0) + sum(gammaln(a + 1) for a in alpha)
    return 0.5 * (s + 0.5 * n * np.log(np.pi))


def zeta_monomial(alpha, z):
    """Normalised monomial zeta_alpha(z) = z^alpha (2^alpha alpha! pi^{n/2})^{-1/2}."""
    z = np.asarray(z, dtype=complex)
    zz = z[None, :] if z.ndim == 1 else z
    out = np.ones(zz.shape[0], dtype=complex)
    for j, k in enumerate(alpha):
        if k:
            out = out * zz[:, j] ** k
    out = out * np.exp(-_log_bridge_factor(alpha, len(alpha)))
    return out[0] if z.ndim == 1 else out


# ---------------------------------------------------------------------------
# evaluation handles
# ---------------------------------------------------------------------------

class ExactBargmann:
    """Polynomial in the zeta basis: the transform of a finite expansion."""

    def __init__(self, expansion):
        self.expansion = expansion
        self.dim = expansion.dim
        self.maxdeg = expansion.maxdeg

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        scalar_in = (z.ndim == 1)
        zz = z[None, :] if scalar_in else z
        out = np.zeros(zz.shape[0], dtype=complex)
        for a, c in self.expansion.coeffs.items():
            out += c * zeta_monomial(a, zz)
        return out[0] if scalar_in else out


class QuadratureBargmann:
    """Direct Gauss-Hermite discretisation of the defining integral.

    The Gaussian factor e^{-|xi|^2/2} is absorbed into the rule: with nodes
    scaled by sqrt(sigma_eff) the sampled values stay bounded whenever the
    source obeys its decay descriptor.
    """

    def __init__(self, f, nodes=None):
        f = as_test_function(f)
        self.f = f
        self.dim = f.dim
        d = f.decay()
        if d.kind != "gaussian":
            raise ValueError("quadrature Bargmann transform needs gaussian decay")
        # absorb e^{-s xi^2} with s < sigma + 1/2 into the rule
        s = 0.5 * (d.sigma + 0.5)
        m = nodes if nodes is not None else (140 if self.dim == 1 else 64)
        rule = gauss_hermite_rule(m)
        x1 = rule.nodes / np.sqrt(s)
        lifted = np.exp(np.log(rule.weights) + rule.nodes ** 2) / np.sqrt(s)
        grids = np.meshgrid(*([x1] * self.dim), indexing="ij")
        self.pts = np.stack([g.ravel() for g in grids], axis=-1)
        wt = tensor_weights(lifted, self.dim)
        fv = np.asarray(f(self.pts), dtype=complex)
        self.base = fv * wt * np.exp(-0.5 * np.sum(self.pts ** 2, axis=1))
        self.maxdeg = None

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        scalar_in = (z.ndim == 1)
        zz = z[None, :] if scalar_in else z
        n = self.dim
        pref = np.pi ** (-n / 2.0) * np.exp(-0.25 * np.sum(zz * zz, axis=1))
        out = np.empty(zz.shape[0], dtype=complex)
        step = max(1, 2_000_000 // self.pts.shape[0])
        for lo in range(0, zz.shape[0], step):
            E = np.exp(zz[lo:lo + step] @ self.pts.T)
            out[lo:lo + step] = E @ self.base
        out = pref * out
        return out[0] if scalar_in else out


def bargmann_handle(f, method="auto", nodes=None):
    """EntireFunction handle for Bf: exact for finite expansions, quadrature
    otherwise (or on request)."""
    f = as_test_function(f)
    if method == "exact" or (method == "auto" and isinstance(f, FiniteHermite)):
        if not isinstance(f, FiniteHermite):
            raise ValueError("exact Bargmann evaluation needs a finite expansion")
        return ExactBargmann(f.expansion)
    return QuadratureBargmann(f, nodes=nodes)


def bargmann_eval(f, z, method="auto"):
    """Bf(z) at one point or an array of points in C^n."""
    return bargmann_handle(f, method=method)(z)


# ---------------------------------------------------------------------------
# duality check
# ---------------------------------------------------------------------------

def duality_check(f, zgrid, method="auto"):
    """max |Bf(-iz) - B(fhat)(z)| over the grid."""
    f = as_test_function(f)
    Bf = bargmann_handle(f, method=method)
    Bfh = bargmann_handle(fourier(f), method=method)
    zgrid = np.asarray(zgrid, dtype=complex)
    return float(np.max(np.abs(Bf(-1j * zgrid) - Bfh(zgrid))))


def polydisc_grid(n, radius, points_per_axis=5):
    """Tensor grid on the polydisc boundary |z_j| = radius (complex points)."""
    th = 2 * np.pi * np.arange(points_per_axis) / points_per_axis
    ring = radius * np.exp(1j * th)
    grids = np.meshgrid(*([ring] * n), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=-1)


# ---------------------------------------------------------------------------
# contour Taylor coefficients
# ---------------------------------------------------------------------------

@dataclass
class TaylorCoefficients:
    """Taylor coefficients of an entire function extracted on a polydisc."""
    dim: int
    coeffs: dict
    radii: tuple
    points_per_axis: int
    aliasing_estimate: float = field(default=0.0)

    def ordered_items(self):
        return sorted(self.coeffs.items(), key=lambda kv: grlex_key(kv[0]))


def contour_taylor(F, radii, points_per_axis, max_degree=None, aliasing_check=False):
    """Taylor coefficients c_alpha of F by the tensor contour/DFT rule

        c_alpha = r^{-alpha} M^{-n} sum_k F(r e^{i theta_k}) e^{-i alpha.theta_k},

    exact for per-axis polynomial degree < M; for quadrature handles the
    aliasing error is the Taylor tail of F at the radius.  Indices with
    alpha_j >= M are refused.
    """
    n = F.dim
    M = int(points_per_axis)
    radii = np.broadcast_to(np.asarray(radii, dtype=float), (n,))
    if np.any(radii <= 0):
        raise ValueError("contour radii must be positive")
    if max_degree is None:
        max_degree = M // 2 - 1 if F.maxdeg is None else F.maxdeg
    if max_degree >= M:
        raise ValueError(f"requested degree {max_degree} needs more than {M} points per axis")

    def run(M):
        th = 2 * np.pi * np.arange(M) / M
        rings = [r * np.exp(1j * th) for r in radii]
        grids = np.meshgrid(*rings, indexing="ij")
        pts = np.stack([g.ravel() for g in grids], axis=-1)
        vals = F(pts).reshape([M] * n)
        hat = np.fft.fftn(vals) / M ** n
        out = {}
        for a in multiindex_enumerate(n, max_degree):
            if max(a) >= M:
                continue
            scale = np.exp(-np.sum(np.asarray(a) * np.log(radii)))
            out[a] = hat[tuple(a)] * scale
        return out

    coeffs = run(M)
    alias = 0.0
    if aliasing_check:
        coeffs2 = run(2 * M)
        alias = max(abs(coeffs[a] - coeffs2[a]) for a in coeffs)
        coeffs = coeffs2
    return TaylorCoefficients(dim=n, coeffs=coeffs, radii=tuple(radii),
                              points_per_axis=M, aliasing_estimate=float(alias))


def default_contour_radii(alpha):
    """Per-axis radii (2 alpha_j + 1)^{1/2} tuned to the target index."""
    return tuple(np.sqrt(2.0 * np.asarray(alpha, dtype=float) + 1.0))


# ---------------------------------------------------------------------------
# the coefficient bridge
# ---------------------------------------------------------------------------

def coeff_bridge(taylor):
    """Hermite coefficients from Taylor coefficients:
    (f, Phi_alpha) = (2^alpha alpha! pi^{n/2})^{1/2} c_alpha."""
    out = {}
    for a, c in taylor.coeffs.items():
        lg = _log_bridge_factor(a, taylor.dim)
        if lg > _LOG_BRIDGE_LIMIT:
            raise OverflowError(f"bridge factor overflows the log domain at {a}")
        out[a] = c * np.exp(lg)
    return HermiteExpansion(taylor.dim, out)


def coeff_bridge_inverse(expansion, radii=None, points_per_axis=None):
    """Taylor coefficients of Bf from the Hermite coefficients of f."""
    out = {}
    for a, c in expansion.coeffs.items():
        lg = _log_bridge_factor(a, expansion.dim)
        if lg > _LOG_BRIDGE_LIMIT:
            raise OverflowError(f"bridge factor overflows the log domain at {a}")
        out[a] = c * np.exp(-lg)
    return TaylorCoefficients(dim=expansion.dim, coeffs=out,
                              radii=radii or (1.0,) * expansion.dim,
                              points_per_axis=points_per_axis or 0)


# ---------------------------------------------------------------------------
# the subcritical product estimate
# ---------------------------------------------------------------------------

@dataclass
class ProductEstimateReport:
    """Pointwise ratio |Bf(z) B(fhat)(z)| / bound over a z-grid."""
    ratios: np.ndarray
    max_ratio: float
    ka_value: float
    a: float


def product_estimate_check(f, a, zgrid, ka_value=None, reltol=1e-6, method="auto"):
    """Check |Bf(z) B(fhat)(z)| <= pi^{-n} K_a(f)
    exp( (|y|^2 + (1-a)/(1+a) |x|^2) / 2 ) pointwise on the grid
    (z = x + iy componentwise)."""
    from .functional import ka_eval
    f = as_test_function(f)
    n = f.dim
    if ka_value is None:
        res = ka_eval(f, a, reltol=reltol)
        if not res.converged:
            raise ValueError("K_a did not converge; cannot calibrate the bound")
        ka_value = res.value
    Bf = bargmann_handle(f, method=method)
    Bfh = bargmann_handle(fourier(f), method=method)
    zgrid = np.asarray(zgrid, dtype=complex)
    lhs = np.abs(Bf(zgrid) * Bfh(zgrid))
    x = zgrid.real
    y = zgrid.imag
    expo = 0.5 * (np.sum(y * y, axis=-1) + (1 - a) / (1 + a) * np.sum(x * x, axis=-1))
    rhs = np.pi ** (-n) * ka_value * np.exp(expo)
    ratios = lhs / rhs
    return ProductEstimateReport(ratios=ratios, max_ratio=float(np.max(ratios)),
                                 ka_value=float(ka_value), a=float(a))
