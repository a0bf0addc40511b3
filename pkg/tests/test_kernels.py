import numpy as np
import pytest

from gossippower import _kernels_py, kernels
from gossippower.graph import best_constant_weights, generate_small_world
from gossippower.linalg import hermitian_evd_oracle, svd_oracle

try:
    from gossippower import _kernels as compiled
except ImportError:  # extension not built
    compiled = None

BACKENDS = [pytest.param(_kernels_py, id="python")]
BACKENDS.append(pytest.param(compiled, id="cython",
                             marks=pytest.mark.skipif(compiled is None, reason="extension not built")))


def _rand_hermitian(rng, n):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (a + a.conj().T) / 2


def test_backend_flag_matches_import():
    assert kernels.BACKEND in ("cython", "python")
    if kernels.BACKEND == "cython":
        assert kernels.gossip_rounds is compiled.gossip_rounds


@pytest.mark.parametrize("impl", BACKENDS)
def test_gossip_rounds_equals_matrix_power(impl):
    rng = np.random.default_rng(3)
    w = best_constant_weights(generate_small_world(10, 4, 0.2, 5))
    indptr, indices, data = w.csr
    Z = rng.standard_normal((10, 6)) + 1j * rng.standard_normal((10, 6))
    out = impl.gossip_rounds(indptr, indices, data, Z, 17)
    ref = np.linalg.matrix_power(w.matrix, 17) @ Z
    np.testing.assert_allclose(out, ref, rtol=0, atol=1e-12)


@pytest.mark.parametrize("impl", BACKENDS)
def test_gossip_rounds_zero_rounds_copies(impl):
    w = best_constant_weights(generate_small_world(8, 4, 0.2, 1))
    indptr, indices, data = w.csr
    Z = np.arange(16, dtype=complex).reshape(8, 2)
    out = impl.gossip_rounds(indptr, indices, data, Z, 0)
    assert out is not Z
    np.testing.assert_array_equal(out, Z)


@pytest.mark.parametrize("impl", BACKENDS)
@pytest.mark.parametrize("n", [1, 2, 5, 17, 32])
def test_jacobi_eigh_diagonalises(impl, n):
    rng = np.random.default_rng(n)
    A = _rand_hermitian(rng, n)
    w, V, _ = impl.jacobi_eigh(A)
    assert np.linalg.norm(A @ V - V * w) <= 1e-10 * max(1.0, np.linalg.norm(A))
    assert np.linalg.norm(V.conj().T @ V - np.eye(n)) <= 1e-12 * n
    np.testing.assert_allclose(np.sort(w), np.linalg.eigvalsh(A), atol=1e-11)


@pytest.mark.parametrize("impl", BACKENDS)
@pytest.mark.parametrize("shape", [(1, 1), (4, 3), (12, 10), (32, 20)])
def test_jacobi_svd_factorises(impl, shape):
    rng = np.random.default_rng(sum(shape))
    G = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    B, V, _ = impl.jacobi_svd(G)
    np.testing.assert_allclose(G @ V, B, atol=1e-12)
    assert np.linalg.norm(V.conj().T @ V - np.eye(shape[1])) <= 1e-12 * shape[1]
    np.testing.assert_allclose(np.sort(np.linalg.norm(B, axis=0)),
                               np.sort(np.linalg.svd(G, compute_uv=False)), atol=1e-11)


@pytest.mark.skipif(compiled is None, reason="extension not built")
def test_backends_agree_after_postprocessing(monkeypatch):
    # raw rotations may differ; the ordered, phase-fixed factors must not
    rng = np.random.default_rng(11)
    A = _rand_hermitian(rng, 9)
    G = rng.standard_normal((9, 7)) + 1j * rng.standard_normal((9, 7))
    results = {}
    for name, impl in (("python", _kernels_py), ("cython", compiled)):
        monkeypatch.setattr(kernels, "jacobi_eigh", impl.jacobi_eigh)
        monkeypatch.setattr(kernels, "jacobi_svd", impl.jacobi_svd)
        results[name] = (hermitian_evd_oracle(A), svd_oracle(G))
    (ep, sp), (ec, sc) = results["python"], results["cython"]
    np.testing.assert_allclose(ep.eigenvalues, ec.eigenvalues, atol=1e-12)
    np.testing.assert_allclose(ep.eigenvectors, ec.eigenvectors, atol=1e-10)
    np.testing.assert_allclose(sp.s, sc.s, atol=1e-12)
    np.testing.assert_allclose(sp.U[:, :7], sc.U[:, :7], atol=1e-10)
    np.testing.assert_allclose(sp.V, sc.V, atol=1e-10)
