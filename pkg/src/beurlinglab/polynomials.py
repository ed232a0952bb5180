"""Sparse multivariate polynomials as {multi-index: coefficient} dicts.

Internal helper module: everything here operates on plain dicts mapping
exponent tuples to complex coefficients.  Degrees stay small (tens), so
no attempt is made at asymptotically clever algorithms.
"""

from __future__ import annotations

import numpy as np

PRUNE_TOL = 1e-14


def poly_degree(p):
    """Total degree, or -1 for the zero polynomial."""
    return max((sum(a) for a in p), default=-1)


def poly_prune(p, tol=PRUNE_TOL):
    return {a: c for a, c in p.items() if abs(c) > tol}


def poly_add(p, q):
    out = dict(p)
    for a, c in q.items():
        out[a] = out.get(a, 0.0) + c
    return poly_prune(out)


def poly_scale(p, s):
    return {a: s * c for a, c in p.items()}


def poly_mul(p, q):
    out = {}
    for a, ca in p.items():
        for b, cb in q.items():
            key = tuple(i + j for i, j in zip(a, b))
            out[key] = out.get(key, 0.0) + ca * cb
    return poly_prune(out)


def poly_conjugate(p):
    return {a: np.conjugate(c) for a, c in p.items()}


def poly_abs2(p):
    """|P|^2 as a polynomial with real coefficients (valid on real points)."""
    out = poly_mul(p, poly_conjugate(p))
    return {a: c.real if isinstance(c, complex) else np.real(c) for a, c in out.items()}


def poly_eval(p, x):
    """Evaluate at points x of shape (..., dim).  Complex points allowed."""
    x = np.asarray(x)
    out = np.zeros(x.shape[:-1], dtype=complex)
    for a, c in p.items():
        term = np.ones(x.shape[:-1], dtype=complex)
        for j, k in enumerate(a):
            if k:
                term = term * x[..., j] ** k
        out = out + c * term
    return out


def poly_log_abs(p, x, floor=-1e30):
    """log|P(x)| evaluated in ordinary arithmetic (the polynomial itself
    never overflows for the radii used here); floor applied at zeros."""
    v = np.abs(poly_eval(p, x))
    with np.errstate(divide="ignore"):
        out = np.log(v)
    return np.maximum(out, floor)


def poly_stretch(p, scales):
    """Substitute x_j -> scales[j] * x_j."""
    out = {}
    for a, c in p.items():
        fac = 1.0
        for j, k in enumerate(a):
            fac = fac * scales[j] ** k
        out[a] = c * fac
    return poly_prune(out)


def poly_linear_subst(p, M):
    """Substitute x_i -> sum_j M[i, j] y_j; returns the polynomial in y."""
    M = np.asarray(M, dtype=float)
    dim = M.shape[0]
    zero = tuple([0] * dim)
    linear = []
    for i in range(dim):
        row = {}
        for j in range(dim):
            if M[i, j] != 0.0:
                key = tuple(1 if t == j else 0 for t in range(dim))
                row[key] = M[i, j]
        linear.append(row if row else {zero: 0.0})
    out = {}
    for a, c in p.items():
        term = {zero: c}
        for i, k in enumerate(a):
            for _ in range(k):
                term = poly_mul(term, linear[i])
        out = poly_add(out, term)
    return out


def poly_real_roots_1d(p):
    """Real roots of a univariate polynomial dict (ascending-degree keys)."""
    deg = poly_degree(p)
    if deg <= 0:
        return np.array([])
    coeffs = np.zeros(deg + 1, dtype=complex)
    for a, c in p.items():
        coeffs[a[0]] = c
    r = np.polynomial.polynomial.polyroots(coeffs)
    real = r[np.abs(r.imag) < 1e-9].real
    return np.unique(np.round(real, 12))


def poly_radial_majorant(p):
    """Coefficients q_k with |P(x)| <= sum_k q_k r^k whenever max_j |x_j| <= r."""
    deg = poly_degree(p)
    q = np.zeros(max(deg, 0) + 1)
    for a, c in p.items():
        q[sum(a)] += abs(c)
    return q


def majorant_log_eval(q, r):
    """log of sum_k q_k r^k for r >= 0 (vectorised)."""
    r = np.asarray(r, dtype=float)
    acc = np.zeros(r.shape)
    for k in range(len(q) - 1, -1, -1):
        acc = acc * r + q[k]
    with np.errstate(divide="ignore"):
        return np.log(np.maximum(acc, 1e-300))
