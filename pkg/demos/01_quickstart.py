"""Approximate the whole spectrum of a large Toeplitz matrix without forming it.

Run:  python3 demos/01_quickstart.py
"""
import time

import numpy as np

import matrixless as ml

# The symbol f(theta) is even and increases on [0, pi]; its Fourier
# coefficients are the diagonals of T_n(f).
sym = ml.parse_symbol("kms:rho=0.5")
print(sym, " f(0) =", sym.lower, " f(pi) =", sym.upper)

# Precompute once: five dense eigensolves of orders 100, 201, ..., 1615,
# then extrapolation of the correction coefficients on 100 coarse nodes.
t0 = time.perf_counter()
table = ml.precompute(sym, n1=100, alpha=5, method="lapack")
print(f"precompute: {time.perf_counter() - t0:.2f}s, grid sizes {table.grid.sizes}")

# The table is a small text file and can be reused for any n.
print(table.to_text().splitlines()[0], "...", len(table.to_text()), "bytes")

# Approximate all eigenvalues of a matrix far too large for a dense solver.
n = 200_000
t0 = time.perf_counter()
res = ml.approximate_all(sym, n, table, level=4)
print(f"n={n}: {n} eigenvalues in {time.perf_counter() - t0:.3f}s")
print("  smallest:", res.lam_hat[:3])
print("  largest: ", res.lam_hat[-3:])

# Check against a dense solve at a size where that is still cheap.
n = 1024
lam = ml.eigenvalues_sorted(ml.build_matrix(sym, n), method="lapack")
for k in range(1, 5):
    err = np.max(np.abs(ml.approximate_all(sym, n, table, k).lam_hat - lam))
    print(f"  n={n} level {k}: max error {err:.3e}   (n+1)^k * err = {(n + 1) ** k * err:.4f}")

# Each level gains a factor (n+1) in accuracy; the normalized error stays put.
