import numpy as np
import pytest
from dataclasses import replace

from gossippower.centralized import PowerConfig, centralized_power_evd, centralized_power_svd, initial_vectors
from gossippower.errors import ParameterError
from gossippower.linalg import hermitian_evd_oracle, svd_oracle
from gossippower.signal import (SignalModelConfig, generate_passive_radar, sample_covariance,
                                sample_cross_correlation)


def _gap_ok(values, H, ratio=1.1):
    v = np.asarray(values)[: H + 1]
    return bool(np.all(v[:-1] >= ratio * v[1:]))


def _separated_evd_seeds(count, H=3, **kw):
    out = []
    seed = 0
    while len(out) < count:
        x = generate_passive_radar(SignalModelConfig(seed=seed, **kw)).s_samples
        if _gap_ok(hermitian_evd_oracle(sample_covariance(x)).eigenvalues, H):
            out.append((seed, x))
        seed += 1
    return out


def _sin(a, b):
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    return np.linalg.norm(b - a * np.vdot(a, b))


def test_rank1_svd_aligns_with_channel():
    cfg = SignalModelConfig(s_sources=1, r_sources=1, shared_sources=True, noise_scale=0.0, seed=3)
    ss = generate_passive_radar(cfg)
    res = centralized_power_svd(ss, PowerConfig(0.1, 200, 1), seed=1)
    h = ss.H_s[:, 0] / np.linalg.norm(ss.H_s[:, 0])
    assert abs(np.vdot(res.U[:, 0], h)) >= 1 - 1e-8
    o = svd_oracle(sample_cross_correlation(ss.s_samples, ss.r_samples))
    assert abs(np.vdot(res.U[:, 0], o.U[:, 0])) >= 1 - 1e-8


def test_svd_values_match_oracle():
    cfg = SignalModelConfig(s_sources=4, r_sources=4, shared_sources=True)
    checked = 0
    seed = 0
    while checked < 5:
        ss = generate_passive_radar(replace(cfg, seed=seed))
        seed += 1
        o = svd_oracle(sample_cross_correlation(ss.s_samples, ss.r_samples))
        if not _gap_ok(o.s, 3):
            continue
        res = centralized_power_svd(ss, PowerConfig(0.1, 200, 3), seed=seed)
        # the per-entry estimator recovers sigma itself, not sigma squared
        np.testing.assert_allclose(res.singular_values, o.s[:3], rtol=1e-6)
        checked += 1


def test_svd_too_many_components():
    ss = generate_passive_radar(SignalModelConfig(snapshots=20))
    with pytest.raises(ParameterError):
        centralized_power_svd(ss, PowerConfig(0.1, 5, 11), seed=0)


def test_evd_too_many_components():
    x = generate_passive_radar(SignalModelConfig(snapshots=20)).s_samples
    with pytest.raises(ParameterError):
        centralized_power_evd(x, PowerConfig(0.1, 5, 11), seed=0)


def test_evd_diagonal_dominant():
    rng = np.random.default_rng(0)
    scales = np.array([4.0, 2.5, 1.5, 0.4, 0.3, 0.2])[:, None]
    x = scales * (rng.standard_normal((6, 4000)) + 1j * rng.standard_normal((6, 4000))) / np.sqrt(2)
    truth = hermitian_evd_oracle(sample_covariance(x)).eigenvalues[:3]
    res = centralized_power_evd(x, PowerConfig(0.1, 200, 3), seed=2)
    np.testing.assert_allclose(res.eigenvalues, truth, rtol=1e-6)


def test_evd_rank1_noiseless():
    x = generate_passive_radar(SignalModelConfig(s_sources=1, noise_scale=0.0, seed=8)).s_samples
    res = centralized_power_evd(x, PowerConfig(0.1, 200, 1), seed=0)
    top = hermitian_evd_oracle(sample_covariance(x)).eigenvalues[0]
    assert res.eigenvalues[0] == pytest.approx(top, rel=1e-8)
    np.testing.assert_allclose(res.entry_values[:, 0].real, top, rtol=1e-8)


def test_shift_does_not_move_eigenvectors():
    (_, x), = _separated_evd_seeds(1)
    a = centralized_power_evd(x, PowerConfig(0.1, 300, 3), seed=4).U
    b = centralized_power_evd(x, PowerConfig(0.5, 300, 3), seed=4).U
    for h in range(3):
        assert _sin(a[:, h], b[:, h]) <= 1e-6


def test_unit_norm_and_deflation_orthogonality():
    for seed, x in _separated_evd_seeds(5):
        U = centralized_power_evd(x, PowerConfig(0.1, 200, 3), seed=seed).U
        np.testing.assert_allclose(np.linalg.norm(U, axis=0), 1.0, atol=1e-12)
        G = np.abs(U.conj().T @ U - np.eye(3))
        assert G.max() <= 1e-6


def test_svd_unit_norm():
    ss = generate_passive_radar(SignalModelConfig(s_sources=2, r_sources=2, shared_sources=True))
    res = centralized_power_svd(ss, PowerConfig(0.1, 20, 3), seed=0)
    np.testing.assert_allclose(np.linalg.norm(res.U, axis=0), 1.0, atol=1e-12)
    np.testing.assert_allclose(np.linalg.norm(res.V, axis=0), 1.0, atol=1e-12)


def test_successive_iterate_angles_shrink():
    # with H = 1 the output after l iterations is the normalised l-th iterate
    passed = 0
    trials = _separated_evd_seeds(100, H=1, snapshots=100)
    for seed, x in trials:
        U = [centralized_power_evd(x, PowerConfig(0.1, ell, 1), seed=seed).U[:, 0] for ell in range(1, 26)]
        angles = [_sin(U[i], U[i + 1]) for i in range(len(U) - 1)]
        tail = angles[4:]
        passed += all(b <= a or max(a, b) < 1e-13 for a, b in zip(tail, tail[1:]))
    assert passed >= 95


def test_initial_vectors_order():
    U0, V0 = initial_vectors(5, 4, 3, 2)
    U1, none = initial_vectors(5, 4, 0, 2)
    np.testing.assert_array_equal(U0, U1)
    assert none is None and V0.shape == (3, 2)


@pytest.mark.parametrize("kw", [{"shift": 0.0}, {"shift": 1.0}, {"power_iters": 0}, {"num_components": 0}])
def test_power_config_validation(kw):
    with pytest.raises(ParameterError):
        PowerConfig(**kw)


def test_deterministic():
    x = generate_passive_radar(SignalModelConfig(seed=1)).s_samples
    a = centralized_power_evd(x, PowerConfig(), seed=9)
    b = centralized_power_evd(x, PowerConfig(), seed=9)
    np.testing.assert_array_equal(a.U, b.U)
