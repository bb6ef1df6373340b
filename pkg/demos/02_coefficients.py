"""What the extrapolated coefficients look like.

For the KMS symbol the exact expansion of the eigenvalue angle is known:
s_j = theta_j + r1 h + r2 h^2 + ... with r1 = -eta and r2 = eta * eta'.
The extrapolation never sees these formulas, yet recovers them.

Run:  python3 demos/02_coefficients.py
"""
import numpy as np

import matrixless as ml

rho = 0.5
sym = ml.KMS(rho)
table = ml.precompute(sym, n1=100, alpha=5, method="lapack")

sigma = table.grid.nodes[1:-1]
eta, d_eta, _, _ = ml.eta_derivatives(rho, sigma)
exact = ml.sl_coefficients(rho, sigma)

print(" k   max |rhat_k - r_k| over the 100 interior nodes")
for k in range(1, 5):
    dev = np.max(np.abs(table.values[1:-1, k - 1] - exact[k - 1]))
    print(f" {k}   {dev:.3e}")

# A few nodes side by side
print("\n theta      rhat_1       -eta        rhat_2      eta*eta'")
for j in (1, 25, 50, 75, 100):
    print(f" {sigma[j - 1]:.4f}  {table.values[j, 0]: .8f} {-eta[j - 1]: .8f}  "
          f"{table.values[j, 1]: .6f} {eta[j - 1] * d_eta[j - 1]: .6f}")

# Off the grid, coefficients come from local Lagrange interpolation.
print("\nrhat_1(pi/2) =", ml.interpolate_coefficient(table, 1, np.pi / 2), " -eta(pi/2) =", -ml.eta_kms(rho, np.pi / 2))

# The free Laplacian (2 - 2cos) has s_j = theta_j exactly, so every
# coefficient should vanish. In floating point, rhat_k inherits the
# rounding of s amplified by roughly (n1+1)^k:
lap = ml.precompute(ml.RCTP(1), n1=100, alpha=5, method="lapack")
mags = np.max(np.abs(lap.values), axis=0)
h1 = lap.grid.steps[0]
print("\nLaplacian  max|rhat_k|       max|rhat_k| h1^k")
for k, m in enumerate(mags, start=1):
    print(f"   k={k}      {m:.2e}           {m * h1**k:.2e}")
# ...but the terms that actually enter an approximation, rhat_k h^k with
# h <= h1, stay far below 1e-9.
