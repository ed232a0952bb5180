"""Heisenberg-group machinery: the representation, the semigroup, Laguerre
growth, and the circle-average norm identity.

The norm identity is the sharp tool: averaging ||pi(i y_th, i v_th) f||^2
over the rotation group equals a Laguerre-weighted sum of the spectral
projections.  Both sides are computed by entirely different means, so
agreement pins every convention in the representation at once.

Run:  python demos/05_heisenberg_entire_vectors.py
"""

import numpy as np

from beurlinglab import (
    FiniteHermite,
    GroupElement,
    HermiteExpansion,
    ka_eval,
    kaverage_identity_check,
    l2_norm,
    laguerre_growth_fit,
    make_ft_eigenfunction,
    poisson_semigroup,
    schrodinger_apply,
)

print("=== unitarity of the real action ===")
f = FiniteHermite(make_ft_eigenfunction(1, 6, 0, 5))
rng = np.random.default_rng(0)
devs = []
for _ in range(20):
    g = GroupElement(rng.uniform(-2, 2, 1), rng.uniform(-2, 2, 1))
    devs.append(abs(l2_norm(schrodinger_apply(f, g)) - 1.0))
print(f"max |norm(pi(g) f) - 1| over 20 random real g: {max(devs):.2e}")

print("\n=== semigroup images are subcritical ===")
g = HermiteExpansion(1, {(k,): v for k, v in
                         enumerate(rng.uniform(0.5, 1.5, size=17))})
for t in (0.5, 1.0):
    res = ka_eval(FiniteHermite(poisson_semigroup(g, t)), 0.5, reltol=1e-6)
    print(f"e^(-{t} sqrt H) g: K_a(a=0.5) = {res.value:.6f} "
          f"({'converged' if res.converged else 'NOT converged'})")

print("\n=== Laguerre growth in the imaginary domain ===")
for rho in (0.5, 1.0, 2.0):
    slope = laguerre_growth_fit(0, rho, range(20, 61))
    print(f"rho = {rho}: fitted slope of log phi_k(2i y, 2i v) against "
          f"2 sqrt(2k+1) rho = {slope:.4f}")

print("\n=== the n = 1 circle-average norm identity ===")
cases = [("Phi_0", HermiteExpansion(1, {(0,): 1.0}), 0.3, 0.0),
         ("Phi_1", HermiteExpansion(1, {(1,): 1.0}), 0.2, 0.4),
         ("random D=4", make_ft_eigenfunction(1, 4, 1, 101, amplitude_decay=0.0), 0.3, 0.3)]
for name, e, y, v in cases:
    rep = kaverage_identity_check(e, y, v, angles=64)
    print(f"{name:12s} (y,v)=({y},{v}): lhs = {rep.lhs:.10f}, rhs = {rep.rhs:.10f}, "
          f"rel dev = {rep.rel_deviation:.2e}")
print("(for Phi_0 the spectral side is exactly e^(y^2+v^2))")
