import numpy as np
import pytest

from matrixless import (
    KMS,
    RCTP,
    UnsupportedSymbol,
    approximate_all,
    build_matrix,
    eigenvalues_sorted,
    eta_derivatives,
    eta_kms,
    na_approximation,
    sl_approximation,
    sl_coefficients,
)
from matrixless.harness import reference_spectrum
from conftest import coefficient_table

S = np.linspace(0.05, np.pi - 0.05, 41)


@pytest.mark.parametrize("rho", [0.2, 0.5, 0.8])
def test_eta_derivatives_finite_difference(rho):
    d = 1e-5
    e = [eta_derivatives(rho, S + t * d)[0] for t in (-2, -1, 1, 2)]
    fd1 = (e[0] - 8 * e[1] + 8 * e[2] - e[3]) / (12 * d)
    _, d1, d2, d3 = eta_derivatives(rho, S)
    assert np.max(np.abs(d1 - fd1)) <= 1e-8
    d1s = [eta_derivatives(rho, S + t * d)[1] for t in (-1, 1)]
    d2s = [eta_derivatives(rho, S + t * d)[2] for t in (-1, 1)]
    assert np.allclose((d1s[1] - d1s[0]) / (2 * d), d2, atol=1e-8)
    assert np.allclose((d2s[1] - d2s[0]) / (2 * d), d3, atol=1e-8)


def test_eta_series():
    # 2 atan(rho sin s / (1 - rho cos s)) = 2 sum rho^m sin(m s) / m
    rho = 0.5
    m = np.arange(1, 80)[:, None]
    series = 2 * np.sum(rho**m * np.sin(m * S) / m, axis=0)
    series_d1 = 2 * np.sum(rho**m * np.cos(m * S), axis=0)
    series_d2 = -2 * np.sum(m * rho**m * np.sin(m * S), axis=0)
    series_d3 = -2 * np.sum(m**2 * rho**m * np.cos(m * S), axis=0)
    e, d1, d2, d3 = eta_derivatives(rho, S)
    assert np.allclose(e, series, atol=1e-14)
    assert np.allclose(e, eta_kms(rho, S), atol=0)
    assert np.allclose(d1, series_d1, atol=1e-13)
    assert np.allclose(d2, series_d2, atol=1e-12)
    assert np.allclose(d3, series_d3, atol=1e-11)


def test_sl_first_coefficients():
    e, d1, _, _ = eta_derivatives(0.5, S)
    r = sl_coefficients(0.5, S)
    assert r.shape == (4, S.size)
    assert np.array_equal(r[0], -e) and np.array_equal(r[1], e * d1)


def test_sl_coefficients_solve_fixed_point():
    # s = theta + sum r_k h^k must satisfy (n+1) s + eta(s) = pi j up to O(h^5)
    rho = 0.5
    for n in (400, 800):
        h = 1 / (n + 1)
        theta = np.arange(1, n + 1) * np.pi * h
        r = sl_coefficients(rho, theta)
        s = theta + sum(r[k] * h ** (k + 1) for k in range(4))
        resid = np.abs(s + eta_kms(rho, s) * h - theta)
        assert resid.max() <= 10 * h**5


def test_sl_level_one_and_index_selection():
    n = 64
    theta = np.arange(1, n + 1) * np.pi / (n + 1)
    assert np.array_equal(sl_approximation(0.5, n, 1), KMS(0.5)(theta))
    full = sl_approximation(KMS(0.5), n, 4)
    assert sl_approximation(0.5, n, 4, j=[3, 10])[1] == full[9]


def test_sl_rejects():
    with pytest.raises(UnsupportedSymbol):
        sl_approximation(RCTP(2), 100, 2)
    with pytest.raises(ValueError):
        sl_approximation(0.5, 100, 6)


def test_sl_level4_error_order():
    n = 512
    lam = eigenvalues_sorted(build_matrix(KMS(0.5), n), method="lapack")
    err = np.max(np.abs(sl_approximation(0.5, n, 4) - lam))
    assert err * (n + 1) ** 4 < 3


def test_na_first_coefficient(kms_lambda_table):
    sym = KMS(0.5)
    sigma = kms_lambda_table.grid.nodes[1:-1]
    c1 = kms_lambda_table.values[1:-1, 0]
    assert np.max(np.abs(c1 + sym.derivative(sigma) * eta_kms(0.5, sigma))) <= 1e-3


def test_na_laplacian_exact():
    t = coefficient_table("rctp:l=1", "lambda")
    assert np.max(np.abs(t.values) * t.grid.steps[0] ** np.arange(1, 6)) <= 1e-9
    n = 300
    exact = 2 - 2 * np.cos(np.arange(1, n + 1) * np.pi / (n + 1))
    assert np.max(np.abs(na_approximation(RCTP(1), n, t, 4) - exact)) <= 1e-9


def test_na_needs_lambda_table(kms_table):
    with pytest.raises(ValueError):
        na_approximation(KMS(0.5), 100, kms_table, 2)


def test_level_one_identical_across_methods(kms_table, kms_lambda_table):
    n = 700
    sym = KMS(0.5)
    a = approximate_all(sym, n, kms_table, 1).lam_hat
    assert np.array_equal(a, na_approximation(sym, n, kms_lambda_table, 1))
    assert np.array_equal(a, sl_approximation(0.5, n, 1))


def test_nas_dominates_na_kms_1024_level4(kms_table, kms_lambda_table):
    n = 1024
    sym = KMS(0.5)
    lam = reference_spectrum(sym, n)
    e_nas = np.max(np.abs(approximate_all(sym, n, kms_table, 4).lam_hat - lam))
    e_na = np.max(np.abs(na_approximation(sym, n, kms_lambda_table, 4) - lam))
    assert e_nas <= e_na


def test_nas_tracks_sl_mid_spectrum(kms_table):
    n = 1024
    sym = KMS(0.5)
    lam = reference_spectrum(sym, n)
    mid = slice(n // 4 - 1, 3 * n // 4)
    e_nas = np.abs(approximate_all(sym, n, kms_table, 4).lam_hat - lam)[mid]
    e_sl = np.abs(sl_approximation(0.5, n, 4) - lam)[mid]
    # compare the error profiles where they sit above the rounding floor
    assert e_nas.max() <= 10 * e_sl.max() and e_sl.max() <= 10 * e_nas.max()
    floor = 1e-14
    live = np.maximum(e_nas, floor) / np.maximum(e_sl, floor)
    assert np.median(live) <= 10 and np.median(live) >= 0.1
