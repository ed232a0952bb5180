"""Coefficient decay envelopes: dominance checks and the no-go phenomenon.

For Fourier eigenfunctions with finite subcritical functional the Hermite
coefficients sit below an explicit envelope; a dominance check turns the
existential constant into a falsifiable statement (bounded, non-growing
log-ratio).  The same machinery exhibits the no-go: sqrt-exponential decay
(entire vectors) is NOT geometric decay, and a geometric-law fit diverges
on semigroup images while the sqrt-law fit is exact.

Run:  python demos/04_decay_envelopes_and_no_go.py
"""

import numpy as np

from beurlinglab import (
    DecayEnvelope,
    FiniteHermite,
    HermiteExpansion,
    decay_rate_fit,
    envelope_check,
    hardy_regime,
    ka_eval,
    make_ft_eigenfunction,
    poisson_semigroup,
    verify_pointwise_gaussian_bound,
)

print("=== eigenfunction envelope dominance at a = 0.5 ===")
a = 0.5
for seed in (101, 202, 303):
    e = make_ft_eigenfunction(1, 12, seed % 4, seed)
    ka = ka_eval(FiniteHermite(e), a, reltol=1e-6)
    env = DecayEnvelope("eigenfunction", {"a": a, "n": 1, "ka": ka.value})
    rep = envelope_check(e, env)
    print(f"seed {seed}: K_a = {ka.value:8.3f}, max log-ratio = {rep.max_log_ratio:7.3f}, "
          f"trend slope = {rep.slope:+.4f} -> {'dominated' if rep.dominated else 'NOT dominated'}")

print("\n=== the no-go: sqrt-exponential vs geometric ===")
D = 36
g = HermiteExpansion(1, {(k,): 1.0 / np.sqrt(D + 1.0) for k in range(D + 1)})
f = poisson_semigroup(g, 0.8)
sq = decay_rate_fit(f, "sqrt-exponential")
geo = decay_rate_fit(f, "geometric")
print(f"semigroup image at t = 0.8 over degrees 0..{D}:")
print(f"  sqrt-law fit:      t_hat = {sq.t_hat:.6f}, max residual = {sq.residual:.2e}")
print(f"  geometric-law fit: t_hat = {geo.t_hat:.6f}, max residual = {geo.residual:.2e}")
print(f"  residual ratio = {geo.residual/max(sq.residual, 1e-300):.2e} "
      "(geometric decay cannot describe entire vectors)")
rep = envelope_check(f, DecayEnvelope("entire", {"t": 0.76, "n": 1}))
print(f"  entire-vector envelope at t' = 0.76: slope {rep.slope:+.4f} -> "
      f"{'dominated' if rep.dominated else 'NOT dominated'}")

print("\n=== the pointwise Gaussian bound from geometric coefficients ===")
t, s = 1.0, 0.5
e = HermiteExpansion(1, {(k,): np.exp(-(2 * k + 1) * t / 2) for k in range(30)})
rep = verify_pointwise_gaussian_bound(e, t=t, s=s, grid=np.linspace(-5, 5, 201)[:, None])
print(f"coefficients at geometric rate t = {t}: |f(x)| <= {rep.C1:.4f} "
      f"e^(-tanh({s}) x^2 / 2) verified: {rep.verified} "
      f"(max |f|/bound = {rep.max_violation:.4f})")

print("\n=== Hardy regimes ===")
for ab in (0.3, 0.25, 0.1):
    print(f"ab = {ab}: {hardy_regime(ab)}")
