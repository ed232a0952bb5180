"""Coefficient decay envelopes, dominance checks, decay-rate fits, the
constructive pointwise Gaussian bound, and the Hardy-regime classifier.

Envelope kinds (value at a multi-index alpha, all computed in the log domain;
the existential constants of the source inequalities are NOT baked in -- a
dominance check instead asks whether measured/envelope stays bounded with a
non-increasing trend):

  eigenfunction   e^{t/2} K^{1/2} prod_j (2a_j+1)^{1/(4n)} e^{-(2|a|+n)t/(2n)}
  onfinite        K^{1/2} prod_j (2a_j+1)^{1/4} e^{-(2|a|+n)t/2}
  expdecay        prod_j (2a_j+1)^{1/4} e^{-(t/sqrt(2n)) (2a_j+1)^{1/2}}
  entire          C e^{-t (2|a|+n)^{1/2}}
  vemuri-hardy    prod_j (2a_j+1)^{-1/4} e^{-(2|a|+n)t/2}
  geometric       C e^{-(2|a|+n)t/2}
  hardy-pointwise C e^{-tanh(s)|x|^2 / 2}   (point-indexed, not alpha-indexed)

Where both the subcritical parameter a and the semigroup time t appear they
are linked by a = tanh(2t).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .hermite import grlex_key, synthesize

COEFF_FLOOR = 1e-13
SLOPE_TOL = 0.01

ALPHA_ENVELOPE_KINDS = ("eigenfunction", "onfinite", "expdecay", "entire",
                        "vemuri-hardy", "geometric")
POINT_ENVELOPE_KINDS = ("hardy-pointwise",)


def t_from_a(a):
    """Semigroup time from the subcritical parameter: a = tanh(2t)."""
    if not 0 < a < 1:
        raise ValueError("need 0 < a < 1")
    return 0.5 * np.arctanh(a)


def a_from_t(t):
    if t <= 0:
        raise ValueError("need t > 0")
    return np.tanh(2.0 * t)


@dataclass(frozen=True)
class DecayEnvelope:
    """A named decay envelope with its parameter map."""
    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ALPHA_ENVELOPE_KINDS + POINT_ENVELOPE_KINDS:
            raise ValueError(f"unknown envelope kind {self.kind!r}")
        p = dict(self.params)
        if "a" in p and "t" in p:
            if abs(p["a"] - a_from_t(p["t"])) > 1e-12:
                raise ValueError("inconsistent (a, t): need a = tanh(2t)")
        elif "a" in p:
            p["t"] = t_from_a(p["a"])
        if self.kind in ALPHA_ENVELOPE_KINDS:
            if "t" not in p:
                raise ValueError(f"envelope kind {self.kind!r} needs t (or a)")
            p.setdefault("n", 1)
        if self.kind == "hardy-pointwise" and "s" not in p:
            raise ValueError("hardy-pointwise needs the Mehler parameter s")
        p.setdefault("C", 1.0)
        p.setdefault("ka", 1.0)
        object.__setattr__(self, "params", p)


def envelope_log_eval(env, alpha):
    """log of the envelope value at a multi-index."""
    p = env.params
    t = p.get("t")
    n = p.get("n", len(alpha))
    if len(alpha) != n:
        raise ValueError("multi-index dimension does not match the envelope")
    aa = np.asarray(alpha, dtype=float)
    deg = float(np.sum(aa))
    logC = np.log(p["C"])
    if env.kind == "eigenfunction":
        return (logC + 0.5 * t + 0.5 * np.log(p["ka"])
                + np.sum(np.log(2 * aa + 1)) / (4.0 * n)
                - (2 * deg + n) * t / (2.0 * n))
    if env.kind == "onfinite":
        return (logC + 0.5 * np.log(p["ka"])
                + 0.25 * np.sum(np.log(2 * aa + 1)) - (2 * deg + n) * t / 2.0)
    if env.kind == "expdecay":
        return (logC + 0.25 * np.sum(np.log(2 * aa + 1))
                - t / np.sqrt(2.0 * n) * np.sum(np.sqrt(2 * aa + 1)))
    if env.kind == "entire":
        return logC - t * np.sqrt(2 * deg + n)
    if env.kind == "vemuri-hardy":
        return (logC - 0.25 * np.sum(np.log(2 * aa + 1)) - (2 * deg + n) * t / 2.0)
    if env.kind == "geometric":
        return logC - (2 * deg + n) * t / 2.0
    raise ValueError(f"envelope kind {env.kind!r} is point-indexed, not alpha-indexed")


def envelope_eval(env, alpha):
    """Envelope value at a multi-index (strictly positive)."""
    return float(np.exp(envelope_log_eval(env, alpha)))


def envelope_eval_point(env, x):
    """Point-indexed envelopes (hardy-pointwise): C e^{-tanh(s)|x|^2/2}."""
    if env.kind != "hardy-pointwise":
        raise ValueError("only hardy-pointwise envelopes are point-indexed")
    x = np.asarray(x, dtype=float)
    r2 = np.sum(x * x, axis=-1)
    return env.params["C"] * np.exp(-0.5 * np.tanh(env.params["s"]) * r2)


# ---------------------------------------------------------------------------
# dominance checking
# ---------------------------------------------------------------------------

@dataclass
class DecayEnvelopeReport:
    """Per-index comparison of measured |coefficients| against an envelope.

    dominated = the log-ratio stays finite and its least-squares trend in
    |alpha| does not grow beyond the tolerance; this is the testable
    surrogate for an existential constant in front of the envelope.
    """
    rows: list                      # (alpha, measured, envelope, log_ratio)
    max_log_ratio: float
    slope: float
    slope_tol: float
    dominated: bool


def envelope_check(expansion, env, slope_tol=SLOPE_TOL, coeff_floor=COEFF_FLOOR):
    """Compare |c_alpha| against the envelope; coefficients below the floor
    are roundoff and excluded from the trend fit."""
    items = sorted(expansion.coeffs.items(), key=lambda kv: grlex_key(kv[0]))
    rows = []
    for a, c in items:
        m = abs(c)
        if m <= coeff_floor:
            continue
        le = envelope_log_eval(env, a)
        rows.append((a, m, float(np.exp(le)), float(np.log(m) - le)))
    if not rows:
        raise ValueError("no coefficients above the floor; nothing to check")
    degs = np.array([sum(a) for a, *_ in rows], dtype=float)
    lr = np.array([r[-1] for r in rows])
    if len(np.unique(degs)) >= 2:
        A = np.vstack([degs, np.ones_like(degs)]).T
        coef, *_ = np.linalg.lstsq(A, lr, rcond=None)
        slope = float(coef[0])
    else:
        slope = 0.0
    max_lr = float(np.max(lr))
    dominated = bool(np.isfinite(max_lr) and slope <= slope_tol)
    return DecayEnvelopeReport(rows=rows, max_log_ratio=max_lr, slope=slope,
                               slope_tol=slope_tol, dominated=dominated)


# ---------------------------------------------------------------------------
# decay-rate fits
# ---------------------------------------------------------------------------

@dataclass
class DecayRateFit:
    law: str
    t_hat: float
    residual: float                 # max |fit - data| in the -log domain
    npoints: int


def decay_rate_fit(expansion, law, coeff_floor=COEFF_FLOOR):
    """Least-squares decay rate of the coefficients.

    law="sqrt-exponential": -log|c_alpha| ~ t (2|alpha|+n)^{1/2}
    law="geometric":        -log|c_alpha| ~ t (2|alpha|+n)/2
    Needs at least 5 coefficients above the floor spanning >= 3 degrees.
    """
    if law not in ("sqrt-exponential", "geometric"):
        raise ValueError("law must be 'sqrt-exponential' or 'geometric'")
    n = expansion.dim
    pts = [(sum(a), abs(c)) for a, c in expansion.coeffs.items() if abs(c) > coeff_floor]
    if len(pts) < 5 or len({d for d, _ in pts}) < 3:
        raise ValueError("insufficient support: need >= 5 coefficients over >= 3 degrees")
    deg = np.array([d for d, _ in pts], dtype=float)
    y = -np.log(np.array([m for _, m in pts]))
    x = np.sqrt(2 * deg + n) if law == "sqrt-exponential" else (2 * deg + n) / 2.0
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = float(np.max(np.abs(A @ coef - y)))
    return DecayRateFit(law=law, t_hat=float(coef[0]), residual=resid, npoints=len(pts))


# ---------------------------------------------------------------------------
# the Mehler/Cauchy-Schwarz pointwise bound
# ---------------------------------------------------------------------------

def pointwise_gaussian_constant(C, t, s, n):
    """Constructive constant C1 with
        |f(x)| <= C1 e^{-tanh(s)|x|^2/2}
    whenever |c_alpha| <= C e^{-(2|alpha|+n)t/2}, for any 0 < s < t.

    Cauchy-Schwarz splits the coefficient sum at the Mehler parameter
    r = e^{-s}; the diagonal Mehler kernel sums the second factor exactly.
    """
    if not 0 < s < t:
        raise ValueError("need 0 < s < t")
    f1 = np.exp(-n * (t - s)) * (1.0 - np.exp(-2.0 * (t - s))) ** (-n)
    f2 = np.exp(-n * s) * np.pi ** (-n / 2.0) * (1.0 - np.exp(-4.0 * s)) ** (-n / 2.0)
    return float(C * np.sqrt(f1) * np.sqrt(f2))


def pointwise_gaussian_bound(C, t, s, x):
    """The bound value C1 e^{-tanh(s)|x|^2/2} at x."""
    x = np.asarray(x, dtype=float)
    n = x.shape[-1] if x.ndim > 0 else 1
    C1 = pointwise_gaussian_constant(C, t, s, n)
    r2 = np.sum(np.atleast_1d(x) ** 2, axis=-1)
    return C1 * np.exp(-0.5 * np.tanh(s) * r2)


@dataclass
class PointwiseBoundReport:
    C: float
    C1: float
    max_violation: float            # max over grid of |f(x)| / bound(x)
    verified: bool


def verify_pointwise_gaussian_bound(expansion, t, s, grid, slope_tol=SLOPE_TOL):
    """Check the hypothesis (geometric envelope at rate t) on the actual
    coefficients, then assert the resulting Gaussian bound on a point grid."""
    n = expansion.dim
    env = DecayEnvelope("geometric", {"t": t, "n": n})
    rep = envelope_check(expansion, env, slope_tol=slope_tol)
    C = float(np.exp(max(rep.max_log_ratio, 0.0)))
    C1 = pointwise_gaussian_constant(C, t, s, n)
    grid = np.asarray(grid, dtype=float)
    vals = np.abs(synthesize(expansion, grid))
    bound = C1 * np.exp(-0.5 * np.tanh(s) * np.sum(grid * grid, axis=-1))
    ratio = float(np.max(vals / bound))
    return PointwiseBoundReport(C=C, C1=C1, max_violation=ratio,
                                verified=bool(ratio <= 1.0 + 1e-12))


# ---------------------------------------------------------------------------
# Hardy regime classifier
# ---------------------------------------------------------------------------

def hardy_regime(ab, tol=1e-12):
    """Trichotomy for the product of Hardy exponents:
    > 1/4 only the zero function, = 1/4 only the Gaussian line,
    < 1/4 an infinite linearly independent family."""
    if ab <= 0:
        raise ValueError("need ab > 0")
    if abs(ab - 0.25) <= tol:
        return "only-gaussian"
    return "only-zero" if ab > 0.25 else "infinite-family"
