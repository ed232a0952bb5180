"""Hermite-function core: multi-indices, stable evaluation, Gauss-Hermite
quadrature, expansion analysis/synthesis, the Mehler kernel and the diagonal
Fourier action.

Conventions
-----------
The 1-D Hermite functions are L^2(R)-normalised,

    h_0(x) = pi^{-1/4} e^{-x^2/2},
    h_{k+1}(x) = sqrt(2/(k+1)) x h_k(x) - sqrt(k/(k+1)) h_{k-1}(x),

and the n-D basis is the tensor product Phi_alpha(x) = prod_j h_{alpha_j}(x_j).
All coefficient containers are ordered graded-lexicographically: lower total
degree first, and within a degree the leftmost entry decreases last, e.g. for
n=2, D=1 the order is (0,0), (1,0), (0,1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

COEFF_PRUNE_TOL = 1e-14

# largest t with exp(-t) > 0 in double precision, used for the underflow flag
_EXP_UNDERFLOW = 745.0


class QuadratureConvergenceError(RuntimeError):
    """Raised when doubling the rule still moves a requested quantity."""


# ---------------------------------------------------------------------------
# multi-indices
# ---------------------------------------------------------------------------

def grlex_key(alpha):
    """Sort key realising the graded-lexicographic order on multi-indices."""
    return (sum(alpha), tuple(-a for a in alpha))


def multiindex_enumerate(n, max_degree):
    """All alpha in N^n with |alpha| <= max_degree, graded-lexicographically.

    Returns exactly C(n + max_degree, n) indices, no duplicates.
    """
    if n < 1:
        raise ValueError("dimension must be >= 1")
    if max_degree < 0:
        raise ValueError("max degree must be >= 0")

    def compositions(d, parts):
        if parts == 1:
            yield (d,)
            return
        for first in range(d, -1, -1):
            for rest in compositions(d - first, parts - 1):
                yield (first,) + rest

    out = []
    for d in range(max_degree + 1):
        out.extend(compositions(d, n))
    return out


# ---------------------------------------------------------------------------
# pointwise evaluation
# ---------------------------------------------------------------------------

def hermite_table(kmax, x):
    """Table h_k(x_i) for k = 0..kmax, shape (kmax+1,) + x.shape.

    Uses the normalised three-term recurrence; stable for all k (the
    normalised functions are uniformly bounded by ~0.816).  Works for
    complex x, in which case the entire continuation is returned.
    """
    x = np.asarray(x)
    dtype = complex if np.iscomplexobj(x) else float
    out = np.zeros((kmax + 1,) + x.shape, dtype=dtype)
    out[0] = np.pi ** (-0.25) * np.exp(-x * x / 2.0)
    if kmax >= 1:
        out[1] = np.sqrt(2.0) * x * out[0]
    for k in range(1, kmax):
        out[k + 1] = np.sqrt(2.0 / (k + 1)) * x * out[k] - np.sqrt(k / (k + 1.0)) * out[k - 1]
    return out


def hermite_eval_flagged(alpha, x):
    """(Phi_alpha(x), underflowed) where the flag marks an exact 0 caused by
    e^{-x_j^2/2} underflowing for some coordinate."""
    alpha = tuple(alpha)
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size != len(alpha):
        raise ValueError("point dimension does not match the multi-index")
    underflow = bool(np.any(x * x / 2.0 > _EXP_UNDERFLOW))
    val = 1.0
    for j, k in enumerate(alpha):
        val = val * float(hermite_table(k, x[j])[k])
    return val, underflow


def hermite_eval(alpha, x):
    """Phi_alpha(x) = prod_j h_{alpha_j}(x_j) for a point x in R^n."""
    return hermite_eval_flagged(alpha, x)[0]


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadratureRule:
    """Nodes/weights against a tagged weight function."""
    nodes: np.ndarray
    weights: np.ndarray
    weightfun: str = "hermite-e^{-x^2}"

    def __post_init__(self):
        if np.any(np.diff(self.nodes) <= 0):
            raise ValueError("nodes must be strictly increasing")
        if np.any(self.weights <= 0):
            raise ValueError("weights must be positive")


def gauss_hermite_rule(m):
    """m-point Gauss-Hermite rule, exact for degree <= 2m-1 against e^{-x^2}."""
    if m < 1:
        raise ValueError("need at least one node")
    x, w = np.polynomial.hermite.hermgauss(m)
    return QuadratureRule(nodes=x, weights=w)


def _lifted_weights(rule):
    # w_i e^{x_i^2}: turns the e^{-x^2} rule into one for plain dx integrals
    # of functions that already carry their own Gaussian decay.
    return np.exp(np.log(rule.weights) + rule.nodes ** 2)


# ---------------------------------------------------------------------------
# expansions
# ---------------------------------------------------------------------------

class HermiteExpansion:
    """Finite map alpha -> complex coefficient; the exact function model.

    Coefficients with |c| <= 1e-14 are pruned at construction so equality
    of expansions is a meaningful test.  Instances are treated as immutable.
    """

    def __init__(self, dim, coeffs):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        clean = {}
        for a, c in coeffs.items():
            a = tuple(int(k) for k in a)
            if len(a) != dim or any(k < 0 for k in a):
                raise ValueError(f"bad multi-index {a} for dimension {dim}")
            c = complex(c)
            if abs(c) > COEFF_PRUNE_TOL:
                clean[a] = c
        self.dim = dim
        self.coeffs = dict(sorted(clean.items(), key=lambda kv: grlex_key(kv[0])))

    @property
    def maxdeg(self):
        return max((sum(a) for a in self.coeffs), default=0)

    def norm2(self):
        """L^2 norm via Parseval (exact for finite expansions)."""
        return float(np.sqrt(sum(abs(c) ** 2 for c in self.coeffs.values())))

    def coefficient_vector(self, max_degree=None):
        """Dense vector in graded-lexicographic order up to max_degree."""
        D = self.maxdeg if max_degree is None else max_degree
        idx = multiindex_enumerate(self.dim, D)
        return np.array([self.coeffs.get(a, 0.0) for a in idx]), idx

    def map_coeffs(self, fn):
        return HermiteExpansion(self.dim, {a: fn(a, c) for a, c in self.coeffs.items()})

    def __repr__(self):
        return f"HermiteExpansion(dim={self.dim}, terms={len(self.coeffs)}, maxdeg={self.maxdeg})"


def synthesize(expansion, x):
    """Evaluate sum_alpha c_alpha Phi_alpha(x).

    x may be a single point (length-dim sequence) or an array of shape
    (..., dim); complex coordinates give the entire continuation.
    """
    e = expansion
    x = np.asarray(x)
    scalar_in = (x.ndim == 1)
    pts = x[None, :] if scalar_in else x
    if pts.shape[-1] != e.dim:
        raise ValueError("point dimension mismatch")
    if not e.coeffs:
        out = np.zeros(pts.shape[:-1], dtype=complex)
        return complex(out[0]) if scalar_in else out
    kmax = max(max(a) for a in e.coeffs)
    tables = [hermite_table(kmax, pts[..., j]) for j in range(e.dim)]
    out = np.zeros(pts.shape[:-1], dtype=complex)
    for a, c in e.coeffs.items():
        term = tables[0][a[0]]
        for j in range(1, e.dim):
            term = term * tables[j][a[j]]
        out = out + c * term
    return complex(out[0]) if scalar_in else out


def project(f, dim, max_degree, nodes=None, check=False, tol=1e-10):
    """Hermite coefficients (f, Phi_alpha) by tensor Gauss-Hermite quadrature.

    ``f`` is any callable accepting an (npoints, dim) array.  The default
    node count max(2*max_degree + 8, 32) is exact (to roundoff) whenever
    f(x) e^{|x|^2/2} is a polynomial of degree <= 2*nodes - 1 - max_degree.
    With ``check=True`` the rule is doubled once and a coefficient movement
    beyond ``tol`` raises QuadratureConvergenceError.
    """
    m = nodes if nodes is not None else max(2 * max_degree + 8, 32)

    def run(m):
        rule = gauss_hermite_rule(m)
        lifted = _lifted_weights(rule)
        grids = np.meshgrid(*([rule.nodes] * dim), indexing="ij")
        pts = np.stack([g.ravel() for g in grids], axis=-1)
        fv = np.asarray(f(pts), dtype=complex).reshape([m] * dim)
        tables = hermite_table(max_degree, rule.nodes)  # (D+1, m)
        acc = fv
        for axis in range(dim):
            acc = np.tensordot(tables * lifted[None, :], acc, axes=([1], [0]))
            acc = np.moveaxis(acc, 0, dim - 1)
        out = {}
        for a in multiindex_enumerate(dim, max_degree):
            out[a] = acc[tuple(a)]
        return out

    raw = run(m)
    if check:
        raw2 = run(2 * m)
        delta = max(abs(raw[a] - raw2[a]) for a in raw)
        if delta > tol:
            raise QuadratureConvergenceError(
                f"projection moved by {delta:.3e} when doubling {m} -> {2*m} nodes")
        raw = raw2
    return HermiteExpansion(dim, raw)


# ---------------------------------------------------------------------------
# Mehler kernel
# ---------------------------------------------------------------------------

def mehler_kernel(r, x, y):
    """Closed-form sum_alpha r^{|alpha|} Phi_alpha(x) Phi_alpha(y), |r| < 1."""
    if abs(r) >= 1:
        raise ValueError("Mehler parameter must satisfy |r| < 1")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    n = x.shape[-1]
    q = 1.0 - r * r
    expo = (-0.5 * (1 + r * r) / q * (np.sum(x * x, -1) + np.sum(y * y, -1))
            + 2.0 * r / q * np.sum(x * y, -1))
    val = np.pi ** (-n / 2.0) * q ** (-n / 2.0) * np.exp(expo)
    return float(val) if val.shape == () else val


def mehler_partial_sum(r, x, y, K):
    """sum_{|alpha| <= K} r^{|alpha|} Phi_alpha(x) Phi_alpha(y)."""
    if abs(r) >= 1:
        raise ValueError("Mehler parameter must satisfy |r| < 1")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    n = x.shape[-1]
    tx = [hermite_table(K, x[..., j]) for j in range(n)]
    ty = [hermite_table(K, y[..., j]) for j in range(n)]
    total = 0.0
    for a in multiindex_enumerate(n, K):
        term = r ** sum(a)
        for j in range(n):
            term = term * tx[j][a[j]] * ty[j][a[j]]
        total = total + term
    return float(total) if np.ndim(total) == 0 else total


# ---------------------------------------------------------------------------
# Fourier action on coefficients
# ---------------------------------------------------------------------------

_FOURIER_PHASE = (1.0 + 0.0j, -1.0j, -1.0 + 0.0j, 1.0j)  # (-i)^k, k mod 4


def fourier_diagonal(expansion):
    """Fourier transform on the coefficient side: c_alpha -> (-i)^{|alpha|} c_alpha."""
    return expansion.map_coeffs(lambda a, c: _FOURIER_PHASE[sum(a) % 4] * c)
