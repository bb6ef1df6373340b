"""Matrix-less eigenvalue approximation for symmetric Toeplitz matrices.

The eigenvalues of ``T_n(f)`` for an even symbol ``f`` that increases on
[0, pi] are approximated as ``f(s_hat_j)`` where the angle ``s_hat_j`` is
``theta_j`` plus an asymptotic correction in powers of ``h = 1/(n+1)``. The
correction coefficients are extrapolated from a few small dense eigensolves
and interpolated to any ``n`` at linear cost.

>>> import matrixless as ml
>>> sym = ml.parse_symbol("kms:rho=0.5")
>>> table = ml.precompute(sym, n1=100, alpha=5)          # doctest: +SKIP
>>> lam = ml.approximate_all(sym, 10_000, table, level=4).lam_hat  # doctest: +SKIP
"""

from .baselines import eta_derivatives, na_approximation, sl_approximation, sl_coefficients
from .errors import (
    ConvergenceFailure,
    InfeasibleReference,
    MatrixlessError,
    NonMonotoneSymbol,
    SingularSystem,
    UnsupportedSymbol,
)
from .harness import (
    PRESETS,
    REFERENCE_VALUES,
    ErrorReport,
    ExperimentConfig,
    emit,
    reference_spectrum,
    reports_for_table,
    run_experiment,
)
from .nas import (
    ApproximationResult,
    CoefficientTable,
    ExtrapolationGrid,
    approximate_all,
    approximate_levels,
    build_grid,
    compute_s_values,
    extrapolate_coefficients,
    grid_angles,
    interpolate_coefficient,
    precompute,
    precompute_spectra,
    solve_vandermonde,
)
from .symbols import KMS, RCTP, OrderDependent, Symbol, eta_kms, inverse_on_half_period, parse_symbol
from .toeplitz import ToeplitzMatrix, build_matrix, eigenvalues_sorted, tridiagonal_ql, tridiagonalize

__version__ = "0.1.0"

__all__ = [
    "approximate_all",
    "approximate_levels",
    "ApproximationResult",
    "build_grid",
    "build_matrix",
    "CoefficientTable",
    "compute_s_values",
    "ConvergenceFailure",
    "eigenvalues_sorted",
    "emit",
    "ErrorReport",
    "eta_derivatives",
    "eta_kms",
    "ExperimentConfig",
    "extrapolate_coefficients",
    "ExtrapolationGrid",
    "grid_angles",
    "InfeasibleReference",
    "interpolate_coefficient",
    "inverse_on_half_period",
    "KMS",
    "MatrixlessError",
    "na_approximation",
    "NonMonotoneSymbol",
    "OrderDependent",
    "parse_symbol",
    "precompute",
    "precompute_spectra",
    "PRESETS",
    "RCTP",
    "reference_spectrum",
    "REFERENCE_VALUES",
    "reports_for_table",
    "run_experiment",
    "SingularSystem",
    "sl_approximation",
    "sl_coefficients",
    "solve_vandermonde",
    "Symbol",
    "ToeplitzMatrix",
    "tridiagonal_ql",
    "tridiagonalize",
    "UnsupportedSymbol",
]
