"""Matrix-less eigenvalue approximation in the ``s`` variable.

Pipeline::

    grid    = build_grid(n1, alpha)
    spectra = precompute_spectra(sym, grid)          # alpha dense eigensolves
    table   = extrapolate_coefficients(sym, grid, spectra)
    result  = approximate_all(sym, n, table, level)  # any n, O(n) work

The extrapolation solves, at each coarse node ``sigma = j1*pi/(n1+1)``, the
Vandermonde system ``sum_l rhat_l h_m^l = s_{j_m, n_m} - sigma`` over the
nested grids ``n_m = 2^(m-1) (n1+1) - 1``. Evaluation interpolates each
``rhat_l`` locally and returns ``f(theta + sum_{l<level} rhat_l(theta) h^l)``.
"""

from __future__ import annotations

import dataclasses
import io
import warnings
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

from .errors import SingularSystem
from .symbols import Symbol, inverse_on_half_period, parse_symbol
from .toeplitz import build_matrix, eigenvalues_sorted

__all__ = [
    "grid_angles",
    "ExtrapolationGrid",
    "CoefficientTable",
    "ApproximationResult",
    "build_grid",
    "compute_s_values",
    "solve_vandermonde",
    "precompute_spectra",
    "extrapolate_coefficients",
    "precompute",
    "interpolate_coefficient",
    "approximate_all",
    "approximate_levels",
]

MAX_ALPHA = 8


def grid_angles(n: int, j=None) -> np.ndarray:
    """Angles ``theta_{j,n} = j pi / (n+1)``; all ``j = 1..n`` by default."""
    j = np.arange(1, n + 1) if j is None else np.asarray(j)
    return j * np.pi / (n + 1)


@dataclasses.dataclass(frozen=True)
class ExtrapolationGrid:
    """Nested sizes ``n_k = 2^(k-1) (n1+1) - 1`` for ``k = 1..alpha``."""

    n1: int
    alpha: int

    @property
    def sizes(self) -> tuple:
        return tuple(2 ** (k - 1) * (self.n1 + 1) - 1 for k in range(1, self.alpha + 1))

    @property
    def steps(self) -> np.ndarray:
        return np.array([1.0 / (m + 1) for m in self.sizes])

    @property
    def spacing(self) -> float:
        return np.pi / (self.n1 + 1)

    def index(self, j1, k: int):
        """Index ``j_k = 2^(k-1) j1`` on grid ``k`` of the coarse index ``j1``."""
        return 2 ** (k - 1) * np.asarray(j1)

    @property
    def nodes(self) -> np.ndarray:
        """Coarse nodes ``theta_{j,n1}`` for ``j = 0..n1+1`` (endpoints included)."""
        return np.arange(self.n1 + 2) * self.spacing


def build_grid(n1: int, alpha: int) -> ExtrapolationGrid:
    if alpha < 2:
        raise ValueError("extrapolation needs at least two grids (alpha >= 2)")
    if alpha > MAX_ALPHA:
        raise ValueError(f"alpha > {MAX_ALPHA} makes the extrapolation system too ill-conditioned")
    if n1 < 4:
        raise ValueError("n1 must be at least 4")
    return ExtrapolationGrid(int(n1), int(alpha))


@dataclasses.dataclass
class CoefficientTable:
    """Extrapolated expansion coefficients on the coarse grid.

    ``values[j, k-1]`` holds ``rhat_k(theta_{j,n1})`` for ``j = 0..n1+1``;
    endpoint rows are zero. ``variable`` is ``"s"`` for the s-expansion or
    ``"lambda"`` for the additive eigenvalue expansion.
    """

    grid: ExtrapolationGrid
    values: np.ndarray
    symbol: Symbol
    variable: str = "s"

    @property
    def pool(self) -> tuple:
        """Inclusive range of node indices usable as interpolation data.

        The zero value at ``theta = 0`` is only correct for symbols that are
        simple-loop there; otherwise the node is left out of every stencil.
        """
        lo = 0 if self.symbol.simple_loop else 1
        return lo, self.grid.n1 + 1

    def to_text(self) -> str:
        out = io.StringIO()
        tag = "" if self.variable == "s" else f" {self.variable}"
        out.write(f"{self.grid.n1} {self.grid.alpha} {self.symbol.spec}{tag}\n")
        for j, (theta, row) in enumerate(zip(self.grid.nodes, self.values)):
            out.write(" ".join([str(j), f"{theta:.17g}"] + [f"{v:.17g}" for v in row]) + "\n")
        return out.getvalue()

    def save(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_text())

    @classmethod
    def from_text(cls, text: str) -> "CoefficientTable":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        head = lines[0].split()
        if len(head) not in (3, 4):
            raise ValueError(f"bad coefficient table header {lines[0]!r}")
        n1, alpha, spec = head[:3]
        variable = head[3] if len(head) == 4 else "s"
        if variable not in ("s", "lambda"):
            raise ValueError(f"unknown expansion variable {variable!r}")
        grid = build_grid(int(n1), int(alpha))
        rows = np.array([[float(x) for x in ln.split()] for ln in lines[1:]])
        if rows.shape != (grid.n1 + 2, grid.alpha + 2):
            raise ValueError(f"coefficient table has shape {rows.shape}, expected {(grid.n1 + 2, grid.alpha + 2)}")
        if not np.array_equal(rows[:, 0], np.arange(grid.n1 + 2)):
            raise ValueError("coefficient table rows must be numbered 0..n1+1")
        return cls(grid, rows[:, 2:].copy(), parse_symbol(spec), variable)

    @classmethod
    def load(cls, path) -> "CoefficientTable":
        with open(path) as fh:
            return cls.from_text(fh.read())


@dataclasses.dataclass
class ApproximationResult:
    n: int
    level: int
    theta: np.ndarray
    s_hat: np.ndarray
    lam_hat: np.ndarray


def compute_s_values(sym: Symbol, n: int, spectrum: np.ndarray, tol: float = 1e-14) -> np.ndarray:
    """``s_{j,n} = f|_[0,pi]^{-1}(lambda_j)`` for a sorted spectrum of ``T_n``."""
    spectrum = np.asarray(spectrum, dtype=float)
    if spectrum.shape != (n,):
        raise ValueError(f"expected {n} eigenvalues, got {spectrum.shape}")
    theta = grid_angles(n)
    return inverse_on_half_period(sym.at_order(n), spectrum, tol=tol, x0=theta)


def solve_vandermonde(steps: Sequence[float], rhs: np.ndarray) -> np.ndarray:
    """Solve ``sum_{l=1..a} steps[m]^l x_l = rhs[m]`` for every column of ``rhs``.

    The unknowns are rescaled by powers of the largest step so the matrix
    entries ``(steps[m]/steps.max())^l`` lie in (0, 1]; the system is then
    solved by LU with partial pivoting.
    """
    h = np.asarray(steps, dtype=float)
    a = len(h)
    if len(np.unique(h)) != a or np.any(h <= 0.0):
        raise SingularSystem(f"step sizes must be distinct and positive: {h}")
    b = np.asarray(rhs, dtype=float)
    if b.shape[0] != a:
        raise ValueError("rhs must have one row per step size")
    scale = h.max()
    powers = np.arange(1, a + 1)
    V = (h / scale)[:, None] ** powers
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        x = scipy.linalg.lu_solve(scipy.linalg.lu_factor(V, check_finite=False), b)
    x = x / (scale**powers).reshape((a,) + (1,) * (b.ndim - 1))
    if not np.all(np.isfinite(x)):
        raise SingularSystem("extrapolation system produced non-finite coefficients")
    return x


def precompute_spectra(sym: Symbol, grid: ExtrapolationGrid, method: str = "householder-ql") -> list:
    """Full sorted spectra of ``T_{n_k}`` for every grid size."""
    return [eigenvalues_sorted(build_matrix(sym, m), method=method) for m in grid.sizes]


def extrapolate_coefficients(
    sym: Symbol,
    grid: ExtrapolationGrid,
    spectra: Sequence[np.ndarray],
    variable: str = "s",
) -> CoefficientTable:
    """Estimate ``rhat_1..rhat_alpha`` at every interior coarse node.

    With ``variable="lambda"`` the right-hand side is ``lambda - f(sigma)``
    instead, which yields the coefficients of the additive expansion.
    """
    if len(spectra) != grid.alpha:
        raise ValueError(f"need {grid.alpha} spectra, got {len(spectra)}")
    if variable not in ("s", "lambda"):
        raise ValueError(f"unknown expansion variable {variable!r}")
    j1 = np.arange(1, grid.n1 + 1)
    sigma = j1 * grid.spacing
    rhs = np.empty((grid.alpha, grid.n1))
    for k, (m, spec) in enumerate(zip(grid.sizes, spectra), start=1):
        spec = np.asarray(spec, dtype=float)
        if spec.shape != (m,):
            raise ValueError(f"spectrum {k} should have {m} entries, got {spec.shape}")
        lam = spec[grid.index(j1, k) - 1]
        fm = sym.at_order(m)
        if variable == "s":
            rhs[k - 1] = inverse_on_half_period(fm, lam, x0=sigma) - sigma
        else:
            rhs[k - 1] = lam - fm(sigma)
    values = np.zeros((grid.n1 + 2, grid.alpha))
    values[1:-1] = solve_vandermonde(grid.steps, rhs).T
    return CoefficientTable(grid, values, sym, variable)


def precompute(
    sym: Symbol, n1: int = 100, alpha: int = 5, method: str = "householder-ql", variable: str = "s"
) -> CoefficientTable:
    """Build the grid, run the eigensolves and extrapolate, in one call."""
    grid = build_grid(n1, alpha)
    return extrapolate_coefficients(sym, grid, precompute_spectra(sym, grid, method), variable)


def _stencil_weights(x: np.ndarray, p: int, lo: int, hi: int):
    """Start index and Lagrange weights of the ``p`` nodes nearest to ``x``.

    ``x`` is measured in coarse-grid units. On an exact tie the left window
    wins. Windows are shifted to stay within ``[lo, hi]``.
    """
    p = min(p, hi - lo + 1)
    i0 = np.ceil(x - 0.5 * (p - 1) - 0.5).astype(int)
    i0 = np.clip(i0, lo, hi - p + 1)
    offs = np.arange(p)
    t = x[:, None] - (i0[:, None] + offs)
    denom = np.array([np.prod([a - b for b in offs if b != a]) for a in offs], dtype=float)
    w = np.empty_like(t)
    for a in range(p):
        others = np.delete(t, a, axis=1)
        w[:, a] = np.prod(others, axis=1) / denom[a]
    on_node = t == 0.0
    hit = on_node.any(axis=1)
    w[hit] = on_node[hit].astype(float)
    return i0, w


def _interp(table: CoefficientTable, k: int, x: np.ndarray) -> np.ndarray:
    lo, hi = table.pool
    p = table.grid.alpha - k + 5
    i0, w = _stencil_weights(x, p, lo, hi)
    idx = i0[:, None] + np.arange(w.shape[1])
    return np.sum(w * table.values[idx, k - 1], axis=1)


def _snap(x: np.ndarray) -> np.ndarray:
    half = np.round(2.0 * x) / 2.0
    return np.where(np.abs(x - half) <= 1e-12 * np.maximum(1.0, np.abs(x)), half, x)


def interpolate_coefficient(table: CoefficientTable, k: int, theta):
    """Local Lagrange estimate of ``rhat_k(theta)`` from ``alpha - k + 5`` nearest nodes."""
    if not 1 <= k <= table.grid.alpha:
        raise ValueError(f"coefficient index must lie in 1..{table.grid.alpha}")
    th = np.atleast_1d(np.asarray(theta, dtype=float))
    out = _interp(table, k, _snap(th / table.grid.spacing))
    return float(out[0]) if np.ndim(theta) == 0 else out


def _coefficients_at(table: CoefficientTable, n: int, upto: int) -> np.ndarray:
    """``rhat_1..rhat_upto`` at ``theta_{j,n}``, j = 1..n, shape (n, upto)."""
    j = np.arange(1, n + 1)
    x = j * (table.grid.n1 + 1) / (n + 1)
    return np.column_stack([_interp(table, k, x) for k in range(1, upto + 1)]) if upto else np.zeros((n, 0))


def _check_level(table: CoefficientTable, level: int) -> None:
    if not 1 <= level <= table.grid.alpha:
        raise ValueError(f"level must lie in 1..{table.grid.alpha}, got {level}")


def approximate_all(sym: Symbol, n: int, table: CoefficientTable, level: int) -> ApproximationResult:
    """Approximate every eigenvalue of ``T_n(sym)`` at the given level."""
    return approximate_levels(sym, n, table, [level])[level]


def approximate_levels(
    sym: Symbol, n: int, table: CoefficientTable, levels: Iterable[int]
) -> dict:
    """Like :func:`approximate_all` for several levels, sharing the interpolation work."""
    if table.variable != "s":
        raise ValueError("approximate_all needs an s-variable coefficient table")
    levels = sorted(set(levels))
    if not levels:
        raise ValueError("no levels requested")
    for lv in levels:
        _check_level(table, lv)
    fn = sym.at_order(n)
    h = 1.0 / (n + 1)
    theta = grid_angles(n)
    coef = _coefficients_at(table, n, max(levels) - 1)
    out = {}
    for lv in levels:
        s_hat = theta.copy()
        for ell in range(1, lv):
            s_hat = s_hat + coef[:, ell - 1] * h**ell
        out[lv] = ApproximationResult(n, lv, theta, s_hat, np.asarray(fn(np.clip(s_hat, 0.0, np.pi))))
    return out
