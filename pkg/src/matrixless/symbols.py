"""Even, real symbols on [-pi, pi] and their monotone inverse on [0, pi].

Three families are provided:

* :class:`KMS`            -- rational symbol with geometric Fourier coefficients,
* :class:`RCTP`           -- real cosine trigonometric polynomial ``(2 - 2 cos)^l``,
* :class:`OrderDependent` -- ``f_2 + a1 f_1 h^2 + a0 h^4`` with ``h = 1/(n+1)``.

Evaluations use the half-angle forms ``2 - 2cos t = 4 sin^2(t/2)`` so that
values near ``t = 0`` keep full relative accuracy.
"""

from __future__ import annotations

import dataclasses
from abc import ABC, abstractmethod
from math import comb
from typing import Optional

import numpy as np

from .errors import NonMonotoneSymbol

__all__ = [
    "Symbol",
    "KMS",
    "RCTP",
    "OrderDependent",
    "parse_symbol",
    "inverse_on_half_period",
    "eta_kms",
]


def _fmt(x: float) -> str:
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


def _half_angle(theta):
    """Return ``4 sin^2(theta/2)`` (equal to ``2 - 2 cos theta``)."""
    s = np.sin(0.5 * np.asarray(theta, dtype=float))
    return 4.0 * s * s


def _maybe_scalar(x):
    return x.item() if isinstance(x, np.ndarray) and x.ndim == 0 else x


class Symbol(ABC):
    """An even real generating function, increasing on [0, pi]."""

    #: True when the symbol is simple-loop at theta = 0 (f''(0) > 0 independently of n).
    simple_loop: bool = False
    order_dependent: bool = False

    def at_order(self, n: int) -> "Symbol":
        """Return the concrete symbol used for matrices of order ``n``."""
        return self

    @property
    @abstractmethod
    def spec(self) -> str:
        """Canonical spec string, e.g. ``kms:rho=0.5``."""

    @abstractmethod
    def _eval(self, theta: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def _deriv(self, theta: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def fourier_coeff(self, k: int) -> float:
        """Exact Fourier coefficient ``a_k``; symmetric in ``k``."""

    def fourier_coeffs(self, n: int) -> np.ndarray:
        """Coefficients ``a_0 .. a_{n-1}`` (first column of ``T_n``)."""
        return np.array([self.fourier_coeff(k) for k in range(n)], dtype=float)

    def __call__(self, theta):
        return _maybe_scalar(self._eval(np.asarray(theta, dtype=float)))

    def derivative(self, theta):
        """First derivative with respect to ``theta``."""
        return _maybe_scalar(self._deriv(np.asarray(theta, dtype=float)))

    @property
    def lower(self) -> float:
        """``f(0)``, the essential infimum for a monotone even symbol."""
        return float(self(0.0))

    @property
    def upper(self) -> float:
        """``f(pi)``, the essential supremum."""
        return float(self(np.pi))

    def __str__(self) -> str:
        return self.spec


@dataclasses.dataclass(frozen=True)
class KMS(Symbol):
    """``(1+rho)^2/2 * (1 - cos t) / (1 - 2 rho cos t + rho^2)`` for ``0 < rho < 1``."""

    rho: float
    simple_loop = True

    def __post_init__(self):
        if not 0.0 < self.rho < 1.0:
            raise ValueError(f"KMS needs 0 < rho < 1, got {self.rho}")

    @property
    def spec(self) -> str:
        return f"kms:rho={_fmt(self.rho)}"

    def _eval(self, theta):
        r = self.rho
        sh = np.sin(0.5 * theta) ** 2
        return (1.0 + r) ** 2 * sh / ((1.0 - r) ** 2 + 4.0 * r * sh)

    def _deriv(self, theta):
        r = self.rho
        den = (1.0 - r) ** 2 + 4.0 * r * np.sin(0.5 * theta) ** 2
        return 0.5 * (1.0 + r) ** 2 * (1.0 - r) ** 2 * np.sin(theta) / den**2

    def fourier_coeff(self, k: int) -> float:
        k = abs(int(k))
        r = self.rho
        if k == 0:
            return 0.5 * (1.0 + r)
        return 0.25 * (r * r - 1.0) * r ** (k - 1)

    def fourier_coeffs(self, n: int) -> np.ndarray:
        r = self.rho
        c = 0.25 * (r * r - 1.0) * r ** (np.arange(n) - 1.0)
        c[0] = 0.5 * (1.0 + r)
        return c


def _rctp_coeffs(ell: int, n: int) -> np.ndarray:
    c = np.zeros(n)
    for k in range(min(ell, n - 1) + 1):
        c[k] = (-1) ** k * comb(2 * ell, ell + k)
    return c


@dataclasses.dataclass(frozen=True)
class RCTP(Symbol):
    """Real cosine trigonometric polynomial ``(2 - 2 cos t)^l``; banded with bandwidth ``l``."""

    ell: int

    def __post_init__(self):
        if int(self.ell) != self.ell or self.ell < 1:
            raise ValueError(f"RCTP needs a positive integer l, got {self.ell}")

    @property
    def simple_loop(self) -> bool:
        # f''(0) vanishes for l >= 2
        return self.ell == 1

    @property
    def spec(self) -> str:
        return f"rctp:l={self.ell}"

    def _eval(self, theta):
        return _half_angle(theta) ** self.ell

    def _deriv(self, theta):
        g = _half_angle(theta)
        return self.ell * g ** (self.ell - 1) * 2.0 * np.sin(theta)

    def fourier_coeff(self, k: int) -> float:
        k = abs(int(k))
        if k > self.ell:
            return 0.0
        return float((-1) ** k * comb(2 * self.ell, self.ell + k))

    def fourier_coeffs(self, n: int) -> np.ndarray:
        return _rctp_coeffs(self.ell, n)


@dataclasses.dataclass(frozen=True)
class OrderDependent(Symbol):
    """``F_n = f_2 + a1 f_1 h^2 + a0 f_0 h^4`` with ``f_l = (2 - 2 cos)^l`` and ``h = 1/(n+1)``.

    The family is stored without an order; :meth:`at_order` binds ``n``.
    Evaluating an unbound instance raises ``ValueError``.
    """

    a0: float
    a1: float
    n: Optional[int] = None
    order_dependent = True

    def at_order(self, n: int) -> "OrderDependent":
        return dataclasses.replace(self, n=int(n))

    @property
    def spec(self) -> str:
        return f"fdep:a0={_fmt(self.a0)},a1={_fmt(self.a1)}"

    @property
    def h(self) -> float:
        if self.n is None:
            raise ValueError("OrderDependent symbol has no matrix order; call at_order(n)")
        return 1.0 / (self.n + 1)

    def _eval(self, theta):
        h = self.h
        g = _half_angle(theta)
        return g * g + self.a1 * g * h * h + self.a0 * h**4

    def _deriv(self, theta):
        h = self.h
        g = _half_angle(theta)
        return (2.0 * g + self.a1 * h * h) * 2.0 * np.sin(theta)

    def fourier_coeff(self, k: int) -> float:
        k = abs(int(k))
        h = self.h
        a = RCTP(2).fourier_coeff(k) + self.a1 * h * h * RCTP(1).fourier_coeff(k)
        if k == 0:
            a += self.a0 * h**4
        return a

    def fourier_coeffs(self, n: int) -> np.ndarray:
        h = self.h
        c = _rctp_coeffs(2, n) + self.a1 * h * h * _rctp_coeffs(1, n)
        c[0] += self.a0 * h**4
        return c


def _parse_kv(body: str) -> dict:
    out = {}
    for part in filter(None, (p.strip() for p in body.split(","))):
        key, sep, value = part.partition("=")
        if not sep:
            raise ValueError(f"malformed symbol parameter {part!r}")
        out[key.strip()] = value.strip()
    return out


def parse_symbol(spec: str, n: Optional[int] = None) -> Symbol:
    """Parse ``kms:rho=<r>``, ``rctp:l=<int>`` or ``fdep:a0=<r>,a1=<r>``.

    ``n`` binds the order of an order-dependent symbol; it is ignored otherwise.
    """
    family, _, body = spec.strip().partition(":")
    kv = _parse_kv(body)
    family = family.lower()
    try:
        if family == "kms":
            sym: Symbol = KMS(float(kv["rho"]))
        elif family == "rctp":
            sym = RCTP(int(kv["l"]))
        elif family == "fdep":
            sym = OrderDependent(float(kv["a0"]), float(kv["a1"]))
        else:
            raise ValueError(f"unknown symbol family {family!r}")
    except KeyError as exc:
        raise ValueError(f"symbol spec {spec!r} is missing parameter {exc.args[0]!r}") from None
    return sym.at_order(n) if n is not None else sym


_EPS = np.finfo(float).eps


def inverse_on_half_period(sym: Symbol, y, tol: float = 1e-14, x0=None, maxiter: int = 200):
    """Solve ``f(theta) = y`` for ``theta`` in [0, pi].

    Safeguarded Newton inside a shrinking bisection bracket, run until the
    iterate stops moving (a few ulps), so the returned angle is accurate to
    working precision rather than merely having a small residual. ``y`` is
    clamped to ``[f(0), f(pi)]`` first; ``x0`` is an optional starting guess.
    """
    f0, fpi = sym.lower, sym.upper
    if not f0 < fpi:
        raise NonMonotoneSymbol(f"{sym}: f(0)={f0} is not below f(pi)={fpi}")
    y = np.asarray(y, dtype=float)
    scalar = y.ndim == 0
    y = np.clip(np.atleast_1d(y), f0, fpi)

    lo = np.zeros_like(y)
    hi = np.full_like(y, np.pi)
    if x0 is None:
        x = np.full_like(y, 0.5 * np.pi)
    else:
        x = np.clip(np.broadcast_to(np.asarray(x0, dtype=float), y.shape).copy(), 0.0, np.pi)
    done = (y == f0) | (y == fpi)
    x[y == f0] = 0.0
    x[y == fpi] = np.pi

    for _ in range(maxiter):
        act = ~done
        if not act.any():
            break
        xa, ya = x[act], y[act]
        fx = sym._eval(xa) - ya
        la, ha = lo[act], hi[act]
        la = np.where(fx < 0.0, xa, la)
        ha = np.where(fx > 0.0, xa, ha)
        d = sym._deriv(xa)
        with np.errstate(divide="ignore", invalid="ignore"):
            xn = xa - fx / d
        ok = np.isfinite(xn) & (d > 0.0) & (xn > la) & (xn < ha)
        xn = np.where(ok, xn, 0.5 * (la + ha))
        hit = fx == 0.0
        xn = np.where(hit, xa, xn)
        fin = hit | (np.abs(xn - xa) <= 4.0 * _EPS * np.abs(xa)) | (ha - la <= 2.0 * _EPS * ha)
        x[act], lo[act], hi[act] = xn, la, ha
        idx = np.flatnonzero(act)
        done[idx[fin]] = True

    res = np.abs(sym._eval(x) - y)
    bad = res > max(tol, 8.0 * _EPS) * np.maximum(1.0, np.abs(y)) * max(1.0, fpi)
    if bad.any():
        raise NonMonotoneSymbol(f"{sym}: inversion did not converge (max residual {res.max():.3e})")
    return float(x[0]) if scalar else x


def eta_kms(rho: float, s):
    """Phase function ``2 atan(rho sin s / (1 - rho cos s))`` of the KMS symbol."""
    s = np.asarray(s, dtype=float)
    return _maybe_scalar(2.0 * np.arctan(rho * np.sin(s) / (1.0 - rho * np.cos(s))))
