"""The Bargmann transform: duality, contour coefficients, and the bridge.

Two fully independent routes to the same Hermite coefficients:
  (1) Gauss-Hermite projection of pointwise samples, and
  (2) quadrature Bargmann transform -> contour Taylor extraction -> the
      factorial bridge (f, Phi_alpha) = (2^alpha alpha! pi^{n/2})^{1/2} c_alpha.
Also checks the duality Bf(-iz) = B(fhat)(z) and the subcritical product
bound on |Bf B fhat|.

Run:  python demos/03_bargmann_two_coefficient_paths.py
"""

import numpy as np

from beurlinglab import (
    FiniteHermite,
    HermiteExpansion,
    QuadratureBargmann,
    bargmann_eval,
    coeff_bridge,
    contour_taylor,
    duality_check,
    make_ft_eigenfunction,
    polydisc_grid,
    product_estimate_check,
    project,
)

print("=== pointwise values ===")
phi0 = FiniteHermite(HermiteExpansion(1, {(0,): 1.0}))
z = np.array([[1.5 - 2.0j]])
print(f"B Phi_0(1.5-2i) = {bargmann_eval(phi0, z)[0]:.10f}  "
      f"(constant pi^-1/4 = {np.pi**-0.25:.10f})")
phi1 = FiniteHermite(HermiteExpansion(1, {(1,): 1.0}))
print(f"B Phi_1(z)/z    = {bargmann_eval(phi1, z)[0]/z[0,0]:.10f}  "
      f"((2 sqrt pi)^-1/2 = {(2*np.sqrt(np.pi))**-0.5:.10f})")

print("\n=== duality Bf(-iz) = B fhat(z) ===")
for seed in (1, 2, 3):
    f = FiniteHermite(make_ft_eigenfunction(1, 8, seed % 4, seed, amplitude_decay=0.0))
    dev = duality_check(f, polydisc_grid(1, 2.0, 5))
    print(f"seed {seed}: max deviation on the polydisc = {dev:.3e}")

print("\n=== two coefficient paths (degree 8) ===")
for n in (1, 2):
    e = make_ft_eigenfunction(n, 8, 1, 42, amplitude_decay=0.0)
    f = FiniteHermite(e)
    direct = project(f, n, 8)
    Bq = QuadratureBargmann(f, nodes=140 if n == 1 else 64)
    bridged = coeff_bridge(contour_taylor(Bq, (1.5,) * n, 32, max_degree=8))
    v1, _ = direct.coefficient_vector(8)
    v2, _ = bridged.coefficient_vector(8)
    print(f"n = {n}: max |projection - contour/bridge| = {np.abs(v1-v2).max():.3e}")

print("\n=== the subcritical product bound ===")
zgrid = np.concatenate([np.linspace(-3, 3, 13)[:, None] + 0j, polydisc_grid(1, 2.0, 8)])
for a in (0.3, 0.7):
    rep = product_estimate_check(phi0, a, zgrid)
    print(f"Phi_0, a = {a}: max |Bf Bfhat| / bound = {rep.max_ratio:.4f} "
          f"(K_a = {rep.ka_value:.4f})")
f = FiniteHermite(make_ft_eigenfunction(1, 8, 2, 7))
rep = product_estimate_check(f, 0.5, zgrid)
print(f"random eigenfunction, a = 0.5: max ratio = {rep.max_ratio:.2e} "
      "(for eigenfunctions the left side is |Bf|^2)")
