"""Hermite basis, Gauss-Hermite quadrature, and the Mehler kernel.

Walks through the exact-representation toolkit: the normalised recurrence,
orthonormality under the lifted quadrature rule, analysis/synthesis round
trips, and the closed-form Mehler kernel against its partial sums.

Run:  python demos/01_hermite_basis_and_quadrature.py
"""

import numpy as np

from beurlinglab import (
    HermiteExpansion,
    gauss_hermite_rule,
    hermite_eval,
    hermite_table,
    mehler_kernel,
    mehler_partial_sum,
    multiindex_enumerate,
    project,
    synthesize,
)

print("=== basis values ===")
print(f"h_0(0) = {hermite_eval((0,), 0.0):.8f}   (pi^-1/4 = {np.pi**-0.25:.8f})")
print(f"h_2(0) = {hermite_eval((2,), 0.0):.8f}   (-pi^-1/4/sqrt2 = {-np.pi**-0.25/np.sqrt(2):.8f})")
x = np.linspace(-40, 40, 401)
print(f"max |h_k| over k <= 500, x in [-40, 40]: {np.abs(hermite_table(500, x)).max():.6f}"
      "  (the normalised functions stay below ~0.816)")

print("\n=== quadrature ===")
rule = gauss_hermite_rule(2)
print(f"2-point rule: nodes {rule.nodes}, weights {rule.weights}")
print(f"sum of weights = {rule.weights.sum():.12f} = sqrt(pi) = {np.sqrt(np.pi):.12f}")

print("\n=== projection / synthesis ===")
e = project(lambda p: p[:, 0] * np.exp(-p[:, 0] ** 2 / 2), 1, 5)
print(f"x e^(-x^2/2) projects onto h_1 with coefficient "
      f"{e.coeffs[(1,)].real:.10f} (pi^(1/4)/sqrt2 = {np.pi**0.25/np.sqrt(2):.10f})")

rng = np.random.default_rng(1)
idx = multiindex_enumerate(2, 8)
rand = HermiteExpansion(2, dict(zip(idx, rng.standard_normal(len(idx)))))
back = project(lambda p: synthesize(rand, p), 2, 8)
v1, _ = rand.coefficient_vector(8)
v2, _ = back.coefficient_vector(8)
print(f"2-D round trip at degree 8: max coefficient error {np.abs(v1-v2).max():.2e}")
print(f"Parseval: ||f||^2 = {rand.norm2()**2:.10f} vs sum |c|^2 = {back.norm2()**2:.10f}")

print("\n=== Mehler kernel ===")
r = 0.5
for K in (10, 20, 40):
    diff = abs(mehler_kernel(r, [0.3], [0.3]) - mehler_partial_sum(r, [0.3], [0.3], K))
    print(f"K = {K:2d}: |closed form - partial sum| = {diff:.3e}")
errs = [abs(mehler_kernel(r, [0.0], [0.0]) - mehler_partial_sum(r, [0.0], [0.0], K))
        for K in (20, 22, 24)]
print(f"successive tail ratios at the origin: {errs[1]/errs[0]:.4f}, "
      f"{errs[2]/errs[1]:.4f}  (geometric rate r^2 = {r*r})")
