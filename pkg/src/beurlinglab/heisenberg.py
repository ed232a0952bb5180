"""Schroedinger representation of the Heisenberg group, the Hermite operator
semigroup e^{-t sqrt(H)}, Laguerre functions with their imaginary-argument
growth, and the n=1 compact-group-average norm identity.

Representation convention (fixed once; the norm identity pins it):

    pi(x, u) f(xi) = e^{i (x.xi + x.u/2)} f(xi + u),

extended to complex (x+iy, u+iv) by the same formula whenever f has an
entire extension (finite Hermite expansions do).  For pure imaginary
elements (x = u = 0) the modulus is |pi(iy, iv) f(xi)| = e^{-y.xi}
|f(xi + iv)|.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .functions import DecayBound, FiniteHermite, Sampled, as_test_function, l2_norm
from .hermite import HermiteExpansion, gauss_hermite_rule, synthesize
from .polynomials import poly_radial_majorant


@dataclass(frozen=True)
class GroupElement:
    """(x + iy, u + iv) with real n-vectors; real iff y = v = 0."""
    x: np.ndarray
    u: np.ndarray
    y: np.ndarray = None
    v: np.ndarray = None

    def __post_init__(self):
        x = np.atleast_1d(np.asarray(self.x, dtype=float))
        u = np.atleast_1d(np.asarray(self.u, dtype=float))
        if x.shape != u.shape:
            raise ValueError("x and u must have the same length")
        y = np.zeros_like(x) if self.y is None else np.atleast_1d(np.asarray(self.y, dtype=float))
        v = np.zeros_like(u) if self.v is None else np.atleast_1d(np.asarray(self.v, dtype=float))
        if y.shape != x.shape or v.shape != x.shape:
            raise ValueError("imaginary parts must match the dimension")
        for arr in (x, u, y, v):
            if not np.all(np.isfinite(arr)):
                raise ValueError("group element entries must be finite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "v", v)

    @property
    def dim(self):
        return len(self.x)

    @property
    def is_real(self):
        return bool(np.all(self.y == 0) and np.all(self.v == 0))


def schrodinger_apply(f, g):
    """pi(g) f as a Sampled function.

    Real g acts unitarily; complex g needs an entire representation, so it
    is only accepted for finite Hermite expansions.
    """
    f = as_test_function(f)
    if g.dim != f.dim:
        raise ValueError("group element dimension does not match the function")
    z = g.x + 1j * g.y
    w = g.u + 1j * g.v
    if g.is_real:
        base = f
        d = f.decay()

        def fn(xi):
            xi = np.asarray(xi, dtype=float)
            phase = np.exp(1j * (xi @ g.x + 0.5 * float(g.x @ g.u)))
            return phase * base(xi + g.u)

        # |f(xi+u)| <= C (1+|xi+u|)^d e^{-sigma |xi+u|^2} and
        # |xi+u|^2 >= |xi|^2/2 - |u|^2
        shift = float(np.linalg.norm(g.u))
        newC = d.C * (1.0 + shift) ** d.degree * np.exp(d.sigma * shift ** 2)
        nd = DecayBound(d.kind, newC, d.sigma / 2.0, degree=d.degree)
        return Sampled(fn, f.dim, nd)

    if not isinstance(f, FiniteHermite):
        raise ValueError("complex group elements need a finite Hermite expansion "
                         "(entire extension)")
    e = f.expansion

    def fn(xi):
        xi = np.asarray(xi, dtype=float)
        arg = xi + w[None, :]
        phase = np.exp(1j * (xi @ z + 0.5 * complex(z @ w)))
        return phase * synthesize(e, arg)

    # |pi(g) f(xi)| <= e^{|y||xi|} q(|xi| + |u| + |v|) e^{-(|xi| - |u|)^2/2 + |v|^2/2}
    # which is Gaussian of rate 1/2 with polynomial growth; fold the linear
    # exponents into the prefactor over the region where the bound peaks
    pg = f.as_poly_gaussian()
    q = poly_radial_majorant(pg.poly)
    deg = len(q) - 1
    yn = float(np.linalg.norm(g.y))
    un = float(np.linalg.norm(g.u))
    vn = float(np.linalg.norm(g.v))
    rr = np.linspace(0.0, 8.0 + 4.0 * (yn + un + np.sqrt(deg + 1.0)), 512)
    grow = np.log(np.maximum(np.polynomial.polynomial.polyval(rr + un + vn, q), 1e-300))
    expo = yn * rr - 0.5 * (rr - un) ** 2 + 0.5 * vn ** 2 + 0.25 * rr * rr
    logC = float(np.max(grow + expo)) + 1.0
    nd = DecayBound("gaussian", float(np.exp(min(logC, 700.0))), 0.25)
    return Sampled(fn, f.dim, nd)


# ---------------------------------------------------------------------------
# Hermite-Poisson semigroup
# ---------------------------------------------------------------------------

def poisson_semigroup(expansion, t):
    """e^{-t sqrt(H)} on the coefficient side:
    c_alpha -> e^{-t (2|alpha|+n)^{1/2}} c_alpha (H Phi_alpha = (2|alpha|+n) Phi_alpha)."""
    if t < 0:
        raise ValueError("semigroup time must be >= 0")
    n = expansion.dim
    return expansion.map_coeffs(
        lambda a, c: np.exp(-t * np.sqrt(2.0 * sum(a) + n)) * c)


# ---------------------------------------------------------------------------
# Laguerre functions
# ---------------------------------------------------------------------------

def laguerre_eval(k, nu, x):
    """L_k^nu(x) by the stable three-term recurrence; x may be negative."""
    if k < 0 or nu < 0:
        raise ValueError("need k, nu >= 0")
    if k == 0:
        return 1.0
    a0, a1 = 1.0, 1.0 + nu - x
    for m in range(1, k):
        a0, a1 = a1, ((2 * m + 1 + nu - x) * a1 - (m + nu) * a0) / (m + 1)
    return float(a1)


def log_laguerre_negative(k, nu, x):
    """log L_k^nu(x) for x <= 0, where every term of the recurrence is
    positive; rescaled on the fly so arbitrarily large k cannot overflow."""
    if x > 0:
        raise ValueError("this path is for non-positive arguments")
    if k == 0:
        return 0.0
    a0, a1 = 1.0, 1.0 + nu - x
    logscale = 0.0
    for m in range(1, k):
        a0, a1 = a1, ((2 * m + 1 + nu - x) * a1 - (m + nu) * a0) / (m + 1)
        if a1 > 1e280:
            a0, a1, logscale = a0 / a1, 1.0, logscale + np.log(a1)
    return float(np.log(a1) + logscale)


def phi_k(k, nu, y, v):
    """Laguerre function phi_k^nu(y, v) = L_k^nu((|y|^2+|v|^2)/2)
    e^{-(|y|^2+|v|^2)/4} for real vector arguments."""
    rho2 = float(np.sum(np.square(np.atleast_1d(y))) + np.sum(np.square(np.atleast_1d(v))))
    return laguerre_eval(k, nu, 0.5 * rho2) * np.exp(-0.25 * rho2)


def phi_k_imag(k, nu, y, v):
    """phi_k^nu(2iy, 2iv): the analytic continuation flips the sign of the
    squared radius, giving L_k^nu(-2 rho^2) e^{+rho^2} with rho^2 = |y|^2+|v|^2."""
    rho2 = float(np.sum(np.square(np.atleast_1d(y))) + np.sum(np.square(np.atleast_1d(v))))
    return float(np.exp(log_laguerre_negative(k, nu, -2.0 * rho2) + rho2))


def log_phi_k_imag(k, nu, rho):
    return log_laguerre_negative(k, nu, -2.0 * rho * rho) + rho * rho


def laguerre_growth_fit(nu, rho, k_range):
    """Least-squares slope of log phi_k^nu(2iy, 2iv) against
    2 sqrt(2k+n) rho with n = nu + 1; the classical asymptotics drive the
    slope to 1 as k grows."""
    ks = np.asarray(list(k_range), dtype=int)
    if len(ks) < 10:
        raise ValueError("need at least 10 k values for a stable fit")
    if rho < 0:
        raise ValueError("rho must be >= 0")
    n = nu + 1
    xs = 2.0 * np.sqrt(2.0 * ks + n) * rho
    ys = np.array([log_phi_k_imag(int(k), nu, rho) for k in ks])
    if rho == 0.0:
        # phi_k = C(k+nu, k): polynomial growth, fitted slope against a
        # constant abscissa is not defined; report 0
        return 0.0
    A = np.vstack([xs, np.ones_like(xs)]).T
    coef, *_ = np.linalg.lstsq(A, ys, rcond=None)
    return float(coef[0])


# ---------------------------------------------------------------------------
# the n=1 K-average norm identity
# ---------------------------------------------------------------------------

@dataclass
class KAverageReport:
    lhs: float
    rhs: float
    rel_deviation: float
    angles: int


def _imaginary_action_norm2(expansion, y, v, nodes=64):
    """||pi(iy, iv) f||_2^2 = int e^{-2 y xi} |f(xi + iv)|^2 d xi  (n=1)."""
    rule = gauss_hermite_rule(nodes)
    lifted = np.exp(np.log(rule.weights) + rule.nodes ** 2)
    pts = rule.nodes[:, None] + 0j
    pts = pts + 1j * v
    vals = synthesize(expansion, pts)
    integrand = np.exp(-2.0 * y * rule.nodes) * np.abs(vals) ** 2
    return float(np.sum(lifted * integrand))


def kaverage_identity_check(expansion, y, v, K=None, angles=64, nodes=64):
    """Two-sided check of the circle-average norm identity (n = 1):

      (1/2pi) int_0^{2pi} ||pi(i y_th, i v_th) f||_2^2 dth
          = sum_k |c_k|^2 phi_k^0(2i y, 2i v),

    with (y_th, v_th) the rotation of (y, v) by th.  The right side is the
    spectral form; the left side is computed by trapezoid-in-angle plus
    Gauss-Hermite quadrature of the complexified action, so the two paths
    share nothing but the function itself.
    """
    if expansion.dim != 1:
        raise ValueError("the compact group average is implemented for n = 1")
    if K is None:
        K = expansion.maxdeg
    if K < expansion.maxdeg:
        raise ValueError("truncation K must reach the maximal degree")
    th = 2 * np.pi * np.arange(angles) / angles
    lhs_vals = []
    for c, s in zip(np.cos(th), np.sin(th)):
        yt = y * c - v * s
        vt = y * s + v * c
        lhs_vals.append(_imaginary_action_norm2(expansion, yt, vt, nodes=nodes))
    lhs = float(np.mean(lhs_vals))
    rho = float(np.hypot(y, v))
    rhs = 0.0
    for a, cc in expansion.coeffs.items():
        k = a[0]
        rhs += abs(cc) ** 2 * phi_k_imag(k, 0, rho, 0.0)
    rel = abs(lhs - rhs) / max(abs(rhs), 1e-300)
    return KAverageReport(lhs=lhs, rhs=float(rhs), rel_deviation=float(rel),
                          angles=angles)
