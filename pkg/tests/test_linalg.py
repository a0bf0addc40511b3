import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gossippower.errors import ParameterError
from gossippower.linalg import hermitian_evd_oracle, inner, principal_angles, svd_oracle


def _cplx(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _hermitian(rng, n):
    a = _cplx(rng, n, n)
    return (a + a.conj().T) / 2


def test_evd_diagonal():
    w, V = hermitian_evd_oracle(np.diag([3.0, 1.0]))
    np.testing.assert_allclose(w, [3.0, 1.0], atol=1e-15)
    np.testing.assert_allclose(V, np.eye(2), atol=1e-15)


def test_evd_two_by_two():
    w, V = hermitian_evd_oracle(np.array([[2.0, 1.0], [1.0, 2.0]]))
    np.testing.assert_allclose(w, [3.0, 1.0], atol=1e-14)
    r = 1 / np.sqrt(2)
    np.testing.assert_allclose(np.abs(V[:, 0].conj() @ np.array([r, r])), 1.0, atol=1e-14)
    np.testing.assert_allclose(np.abs(V[:, 1].conj() @ np.array([r, -r])), 1.0, atol=1e-14)


def test_evd_random_10_residual():
    rng = np.random.default_rng(0)
    A = _hermitian(rng, 10)
    w, V = hermitian_evd_oracle(A)
    assert np.linalg.norm(A - (V * w) @ V.conj().T) <= 1e-9
    assert np.all(np.diff(w) <= 0)


def test_evd_rejects_non_hermitian():
    with pytest.raises(ParameterError):
        hermitian_evd_oracle(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_evd_phase_convention():
    rng = np.random.default_rng(4)
    _, V = hermitian_evd_oracle(_hermitian(rng, 6))
    piv = V[np.argmax(np.abs(V), axis=0), np.arange(6)]
    np.testing.assert_allclose(piv.imag, 0, atol=1e-15)
    assert np.all(piv.real > 0)


def test_svd_diagonal():
    _, s, _ = svd_oracle(np.diag([2.0, 1.0]))
    np.testing.assert_allclose(s, [2.0, 1.0], atol=1e-15)


def test_svd_zero_matrix():
    U, s, V = svd_oracle(np.zeros((4, 3)))
    assert np.all(s == 0)
    np.testing.assert_allclose(U.conj().T @ U, np.eye(3), atol=1e-14)
    np.testing.assert_allclose(V.conj().T @ V, np.eye(3), atol=1e-14)


def test_svd_random_10x12_orthogonal():
    rng = np.random.default_rng(1)
    M = _cplx(rng, 10, 12)
    U, s, V = svd_oracle(M)
    assert U.shape == (10, 10) and V.shape == (12, 10)
    assert np.linalg.norm(U.conj().T @ U - np.eye(10)) <= 1e-10
    assert np.linalg.norm(V.conj().T @ V - np.eye(10)) <= 1e-10
    assert np.linalg.norm(M - (U * s) @ V.conj().T) <= 1e-10 * np.linalg.norm(M)


def test_svd_rank_deficient_completes_basis():
    rng = np.random.default_rng(2)
    a, b = _cplx(rng, 7, 1), _cplx(rng, 5, 1)
    U, s, V = svd_oracle(a @ b.conj().T)
    assert s[0] > 0 and np.all(s[1:] == 0)
    np.testing.assert_allclose(U.conj().T @ U, np.eye(5), atol=1e-12)


def test_oracles_agree_with_numpy_on_random_instances():
    # 1000 instances up to dimension 32; numpy's LAPACK is the independent check
    rng = np.random.default_rng(2024)
    for trial in range(1000):
        n = int(rng.integers(1, 33))
        A = _hermitian(rng, n)
        w, V = hermitian_evd_oracle(A)
        scale = max(1.0, np.linalg.norm(A))
        assert np.linalg.norm(A @ V - V * w) <= 1e-10 * scale, trial
        assert np.linalg.norm(V.conj().T @ V - np.eye(n)) <= 1e-11 * n, trial
        np.testing.assert_allclose(w, np.linalg.eigvalsh(A)[::-1], atol=1e-10 * scale)

        m = int(rng.integers(1, 33))
        M = _cplx(rng, n, m)
        U, s, Vs = svd_oracle(M)
        k = min(n, m)
        assert np.linalg.norm(M - (U * s) @ Vs.conj().T) <= 1e-10 * max(1.0, np.linalg.norm(M)), trial
        assert np.linalg.norm(U.conj().T @ U - np.eye(k)) <= 1e-11 * k, trial
        assert np.linalg.norm(Vs.conj().T @ Vs - np.eye(k)) <= 1e-11 * k, trial
        np.testing.assert_allclose(s, np.linalg.svd(M, compute_uv=False), atol=1e-10 * max(1.0, s[0]))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 16), st.integers(0, 2**31 - 1))
def test_svd_of_psd_equals_evd(n, seed):
    rng = np.random.default_rng(seed)
    X = _cplx(rng, n, n + 3)
    A = X @ X.conj().T
    np.testing.assert_allclose(svd_oracle(A).s, hermitian_evd_oracle(A).eigenvalues,
                               atol=1e-9 * max(1.0, np.linalg.norm(A)))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 12), st.integers(1, 12), st.integers(0, 2**31 - 1))
def test_svd_descending_nonnegative(n, m, seed):
    s = svd_oracle(_cplx(np.random.default_rng(seed), n, m)).s
    assert np.all(s >= 0) and np.all(np.diff(s) <= 0)


def test_inner_examples():
    assert inner([1, 1], [2, 4]) == 6
    assert inner([1j], [1j]) == 1
    with pytest.raises(ParameterError):
        inner([1, 2], [1, 2, 3])


def test_principal_angles():
    e = np.eye(4)
    np.testing.assert_allclose(principal_angles(e[:, :2], e[:, :2]), [0, 0], atol=1e-15)
    np.testing.assert_allclose(principal_angles(e[:, :1], e[:, 1:2]), [np.pi / 2], atol=1e-15)
    t = 1e-7
    ang = principal_angles(e[:, :1], (np.cos(t) * e[:, 0] + np.sin(t) * e[:, 1])[:, None])
    np.testing.assert_allclose(ang, [t], rtol=1e-8)
