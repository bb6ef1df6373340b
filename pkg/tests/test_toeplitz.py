import numpy as np
import pytest
import scipy.integrate

from matrixless import KMS, RCTP, ConvergenceFailure, OrderDependent, build_matrix, eigenvalues_sorted
from matrixless.toeplitz import ToeplitzMatrix, tridiagonal_ql, tridiagonalize


def laplacian_eigs(n):
    return 2 - 2 * np.cos(np.arange(1, n + 1) * np.pi / (n + 1))


def test_rctp1_n3_matrix():
    a = build_matrix(RCTP(1), 3).dense()
    assert np.array_equal(a, [[2, -1, 0], [-1, 2, -1], [0, -1, 2]])


def test_kms_n2_matrix():
    c = build_matrix(KMS(0.5), 2).coeffs
    assert c[0] == 0.75 and c[1] == pytest.approx(-0.1875, abs=1e-16)


def test_order_dependent_is_pentadiagonal():
    m = build_matrix(OrderDependent(3, 2), 20)
    assert m.bandwidth == 2
    assert m.coeffs[0] == pytest.approx(6 + 2 * 2 / 21**2 + 3 / 21**4, rel=1e-15)


def test_persymmetric_and_symmetric():
    a = build_matrix(KMS(0.3), 9).dense()
    assert np.array_equal(a, a.T)
    assert np.array_equal(a, a[::-1, ::-1])


def test_banded_storage():
    m = build_matrix(RCTP(3), 8)
    ab = m.banded()
    assert ab.shape == (4, 8)
    assert ab[1, 0] == m.coeffs[1] and ab[3, 4] == m.coeffs[3]


def test_laplacian_n3_closed_form():
    lam = eigenvalues_sorted(build_matrix(RCTP(1), 3))
    assert np.allclose(lam, [2 - np.sqrt(2), 2, 2 + np.sqrt(2)], atol=1e-15)


def test_one_by_one():
    assert eigenvalues_sorted(ToeplitzMatrix(np.array([0.75]))).tolist() == [0.75]


@pytest.mark.parametrize("n", list(range(1, 41)) + [64, 101, 150, 200])
def test_laplacian_exact_spectrum(n):
    lam = eigenvalues_sorted(build_matrix(RCTP(1), n))
    assert np.max(np.abs(lam - laplacian_eigs(n))) <= 1e-12 * n


@pytest.mark.parametrize("method", ["householder-ql", "lapack"])
def test_kms_localization(method):
    lam = eigenvalues_sorted(build_matrix(KMS(0.5), 256), method=method)
    assert np.all(np.diff(lam) >= 0)
    assert lam[0] > 0 and lam[-1] < 1


@pytest.mark.parametrize("sym", [KMS(0.5), RCTP(2), RCTP(3), OrderDependent(3, 2)], ids=str)
@pytest.mark.parametrize("n", [17, 100, 300])
def test_localization_all_symbols(sym, n):
    lam = eigenvalues_sorted(build_matrix(sym, n))
    fn = sym.at_order(n)
    assert np.all(lam > fn.lower) and np.all(lam < fn.upper)


@pytest.mark.parametrize("sym", [KMS(0.5), KMS(0.9), RCTP(3), OrderDependent(3, 2)], ids=str)
def test_householder_ql_matches_lapack(sym):
    m = build_matrix(sym, 180)
    a = eigenvalues_sorted(m)
    b = eigenvalues_sorted(m, method="lapack")
    assert np.max(np.abs(a - b)) <= 1e-13 * max(1.0, np.max(np.abs(b)))


def test_tridiagonalize_preserves_spectrum():
    rng = np.random.default_rng(1)
    x = rng.standard_normal((30, 30))
    a = x + x.T
    d, e = tridiagonalize(a)
    t = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    assert np.allclose(np.linalg.eigvalsh(t), np.linalg.eigvalsh(a), atol=1e-12)


def test_ql_iteration_cap():
    d, e = tridiagonalize(build_matrix(KMS(0.5), 10).dense())
    with pytest.raises(ConvergenceFailure):
        tridiagonal_ql(d, e, max_iter=0)


def test_unknown_method():
    with pytest.raises(ValueError):
        eigenvalues_sorted(build_matrix(KMS(0.5), 4), method="magic")


def test_mean_matches_symbol_average():
    n = 512
    sym = KMS(0.5)
    lam = eigenvalues_sorted(build_matrix(sym, n), method="lapack")
    avg = scipy.integrate.quad(sym, 0, np.pi)[0] / np.pi
    assert abs(lam.mean() - avg) <= 2 / n
