"""Symmetric Toeplitz matrices ``T_n(f)`` and a dense reference eigensolver.

The default solver reduces the matrix to tridiagonal form with Householder
reflections and then runs the implicit QL iteration with Wilkinson-type
shifts. ``method="lapack"`` delegates to SciPy and is kept as an independent
cross-check and a faster path for large reference spectra.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np
import scipy.linalg

from .errors import ConvergenceFailure
from .symbols import Symbol

__all__ = [
    "ToeplitzMatrix",
    "build_matrix",
    "eigenvalues_sorted",
    "tridiagonalize",
    "tridiagonal_ql",
]

BANDWIDTH_CUTOFF = 1e-30


@dataclasses.dataclass(frozen=True)
class ToeplitzMatrix:
    """Real symmetric Toeplitz matrix stored by its first column."""

    coeffs: np.ndarray

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @property
    def bandwidth(self) -> int:
        """Smallest ``b`` with ``|c_j| < cutoff`` for every ``j > b``."""
        big = np.flatnonzero(np.abs(self.coeffs) >= BANDWIDTH_CUTOFF)
        return int(big[-1]) if big.size else 0

    def dense(self) -> np.ndarray:
        return scipy.linalg.toeplitz(self.coeffs)

    def banded(self) -> np.ndarray:
        """Lower banded storage as expected by ``scipy.linalg.eigvals_banded``."""
        b = self.bandwidth
        n = self.order
        ab = np.zeros((b + 1, n))
        for k in range(b + 1):
            ab[k, : n - k] = self.coeffs[k]
        return ab


def build_matrix(sym: Symbol, n: int) -> ToeplitzMatrix:
    """Return ``T_n(sym)``; order-dependent symbols are bound to order ``n``."""
    if n < 1:
        raise ValueError(f"matrix order must be positive, got {n}")
    return ToeplitzMatrix(sym.at_order(n).fourier_coeffs(n))


def tridiagonalize(a: np.ndarray):
    """Householder reduction of a symmetric matrix.

    Returns ``(d, e)`` with the diagonal ``d`` (length n) and the
    sub-diagonal ``e`` (length n-1) of a similar tridiagonal matrix.
    """
    a = np.array(a, dtype=float, copy=True)
    n = a.shape[0]
    d = np.empty(n)
    e = np.zeros(max(n - 1, 0))
    for k in range(n - 2):
        x = a[k + 1 :, k]
        alpha = math.sqrt(float(x @ x))
        d[k] = a[k, k]
        if alpha == 0.0:
            continue
        if x[0] > 0.0:
            alpha = -alpha
        v = x.copy()
        v[0] -= alpha
        beta = 2.0 / float(v @ v)
        sub = a[k + 1 :, k + 1 :]
        p = beta * (sub @ v)
        w = p - (0.5 * beta * float(p @ v)) * v
        sub -= np.column_stack((v, w)) @ np.vstack((w, v))
        e[k] = alpha
    if n >= 2:
        d[n - 2] = a[n - 2, n - 2]
        e[n - 2] = a[n - 1, n - 2]
    d[n - 1] = a[n - 1, n - 1]
    return d, e


def tridiagonal_ql(d, e, max_iter: int = 50) -> np.ndarray:
    """Eigenvalues of a symmetric tridiagonal matrix by implicit QL.

    ``max_iter`` caps the sweeps spent on any single eigenvalue; exceeding it
    raises :class:`ConvergenceFailure`. Returns the eigenvalues sorted.
    """
    d = [float(x) for x in d]
    n = len(d)
    e = [float(x) for x in e] + [0.0]
    if len(e) != n:
        raise ValueError("sub-diagonal must have length n - 1")
    hypot = math.hypot
    eps = np.finfo(float).eps
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            if it == max_iter:
                raise ConvergenceFailure(f"QL iteration did not converge for eigenvalue {l}")
            it += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return np.sort(np.array(d))


def eigenvalues_sorted(mat: ToeplitzMatrix, method: str = "householder-ql") -> np.ndarray:
    """All eigenvalues of ``mat`` in non-decreasing order.

    ``method`` is ``"householder-ql"`` (self-contained) or ``"lapack"``
    (SciPy; banded storage is used when the bandwidth is small).
    """
    n = mat.order
    if n == 1:
        return np.array([float(mat.coeffs[0])])
    if method == "householder-ql":
        d, e = tridiagonalize(mat.dense())
        return tridiagonal_ql(d, e)
    if method == "lapack":
        if mat.bandwidth < min(n - 1, 16):
            return np.sort(scipy.linalg.eigvals_banded(mat.banded(), lower=True))
        return scipy.linalg.eigvalsh(mat.dense())
    raise ValueError(f"unknown eigensolver {method!r}")
