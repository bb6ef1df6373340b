"""Comparator approximations.

* ``SL`` -- the exact simple-loop expansion of the KMS symbol, with the
  coefficients ``r_1..r_4`` built from the phase function ``eta`` and its
  derivatives in closed form.
* ``NA`` -- the additive expansion ``f(theta) + sum c_k(theta) h^k`` whose
  coefficients come from the same extrapolation/interpolation machinery,
  applied to ``lambda - f(sigma)`` rather than to the ``s`` variable.
"""

from __future__ import annotations

import numpy as np

from .errors import UnsupportedSymbol
from .nas import CoefficientTable, _check_level, _coefficients_at, grid_angles
from .symbols import KMS, Symbol, eta_kms

__all__ = [
    "eta_derivatives",
    "sl_coefficients",
    "sl_approximation",
    "na_approximation",
]

MAX_SL_LEVEL = 5


def eta_derivatives(rho: float, s) -> tuple:
    """``(eta, eta', eta'', eta''')`` of the KMS phase function.

    With ``D = 1 - 2 rho cos s + rho^2``::

        eta'   =  2 rho (cos s - rho) / D
        eta''  = -2 rho (1 - rho^2) sin s / D^2
        eta''' = -2 rho (1 - rho^2) (D cos s - 4 rho sin^2 s) / D^3
    """
    s = np.asarray(s, dtype=float)
    c, sn = np.cos(s), np.sin(s)
    D = 1.0 - 2.0 * rho * c + rho * rho
    e0 = np.asarray(eta_kms(rho, s))
    e1 = 2.0 * rho * (c - rho) / D
    e2 = -2.0 * rho * (1.0 - rho * rho) * sn / D**2
    e3 = -2.0 * rho * (1.0 - rho * rho) * (D * c - 4.0 * rho * sn * sn) / D**3
    return e0, e1, e2, e3


def sl_coefficients(rho: float, s) -> np.ndarray:
    """Rows ``r_1..r_4`` of the s-expansion evaluated at ``s``; shape ``(4, *s.shape)``."""
    e, d1, d2, d3 = eta_derivatives(rho, s)
    r1 = -e
    r2 = e * d1
    r3 = -e * d1**2 - 0.5 * e**2 * d2
    r4 = e * d1**3 + 1.5 * e**2 * d1 * d2 + e**3 * d3 / 6.0
    return np.array([r1, r2, r3, r4])


def _kms_rho(sym) -> float:
    if isinstance(sym, KMS):
        return sym.rho
    if isinstance(sym, Symbol):
        raise UnsupportedSymbol(f"the simple-loop expansion is only available for KMS, not {sym}")
    return float(sym)


def sl_approximation(sym, n: int, level: int, j=None):
    """Exact-coefficient approximation ``f(theta + sum_{k<level} r_k(theta) h^k)``.

    ``sym`` is a :class:`KMS` symbol or its parameter ``rho``. ``j`` selects
    indices (1-based); by default all ``j = 1..n`` are returned.
    """
    rho = _kms_rho(sym)
    if not 1 <= level <= MAX_SL_LEVEL:
        raise ValueError(f"SL level must lie in 1..{MAX_SL_LEVEL}")
    f = KMS(rho)
    h = 1.0 / (n + 1)
    theta = grid_angles(n, j)
    r = sl_coefficients(rho, theta)
    s = np.asarray(theta, dtype=float)
    for k in range(1, level):
        s = s + r[k - 1] * h**k
    out = f(np.clip(s, 0.0, np.pi))
    return out


def na_approximation(sym: Symbol, n: int, table: CoefficientTable, level: int) -> np.ndarray:
    """``f(theta) + sum_{l<level} chat_l(theta) h^l`` from a lambda-variable table."""
    if table.variable != "lambda":
        raise ValueError("na_approximation needs a lambda-variable coefficient table")
    _check_level(table, level)
    fn = sym.at_order(n)
    h = 1.0 / (n + 1)
    theta = grid_angles(n)
    coef = _coefficients_at(table, n, level - 1)
    lam = np.asarray(fn(theta), dtype=float)
    for ell in range(1, level):
        lam = lam + coef[:, ell - 1] * h**ell
    return lam
