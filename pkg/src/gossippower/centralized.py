"""Centralized power EVD/SVD with deflation.

This is the fusion-centre reference: the same updates as the distributed
methods, with every network inner product replaced by its exact value.
Per-entry value estimates are kept so that each entry can be compared
with the matching node of a distributed run.
"""
from dataclasses import dataclass

import numpy as np

from .errors import NumericError, ParameterError
from .signal import SampleSet, complex_normal

GUARD_EPS = 1e-8
_RESCALE_EXP = 512


@dataclass(frozen=True)
class PowerConfig:
    shift: float = 0.1
    power_iters: int = 20
    num_components: int = 3

    def __post_init__(self):
        if not 0.0 < self.shift < 1.0:
            raise ParameterError(f"shift must lie in (0, 1), got {self.shift}")
        if self.power_iters < 1:
            raise ParameterError("power_iters must be >= 1")
        if self.num_components < 1:
            raise ParameterError("num_components must be >= 1")


@dataclass(frozen=True, eq=False)
class CentralizedSVD:
    U: np.ndarray
    V: np.ndarray
    singular_values: np.ndarray
    u_entry_values: np.ndarray
    v_entry_values: np.ndarray


@dataclass(frozen=True, eq=False)
class CentralizedEVD:
    U: np.ndarray
    eigenvalues: np.ndarray
    entry_values: np.ndarray


def initial_vectors(seed, n_s, n_r, H):
    """Independent CN(0, I) starting vectors, column ``h`` for component ``h``.

    The left vectors are drawn first, so an EVD run sees the same ``U0``
    as an SVD run with the same seed.
    """
    rng = np.random.default_rng(seed)
    U0 = complex_normal(rng, (n_s, H))
    V0 = complex_normal(rng, (n_r, H)) if n_r else None
    return U0, V0


def _entry_ratio(numer, entries, scale):
    """``numer / entries`` with tiny (normalised) entries replaced by the best-conditioned estimate."""
    est = np.empty_like(numer)
    ok = np.abs(entries) / scale >= GUARD_EPS
    est[ok] = numer[ok] / entries[ok]
    if not ok.all():
        best = int(np.argmax(np.abs(entries)))
        est[~ok] = numer[best] / entries[best]
    return est


def _rescale(*vecs):
    # power-of-two scaling is exact in floating point, so results are unchanged
    top = max(np.abs(v).max() for v in vecs)
    if top > 2.0**_RESCALE_EXP:
        return tuple(np.ldexp(v.real, -_RESCALE_EXP) + 1j * np.ldexp(v.imag, -_RESCALE_EXP) for v in vecs)
    return vecs


def centralized_power_svd(samples: SampleSet, cfg: PowerConfig, seed) -> CentralizedSVD:
    S = np.asarray(samples.s_samples)
    R = np.asarray(samples.r_samples)
    n_s, T = S.shape
    n_r = R.shape[0]
    H = cfg.num_components
    if R.shape[1] != T:
        raise ParameterError("s and r snapshot counts differ")
    if H > min(n_s, n_r):
        raise ParameterError(f"num_components={H} exceeds min(|S|, |R|)={min(n_s, n_r)}")
    alpha = cfg.shift
    C = S @ R.conj().T / T
    U0, V0 = initial_vectors(seed, n_s, n_r, H)
    U = np.zeros((n_s, H), dtype=complex)
    V = np.zeros((n_r, H), dtype=complex)
    su = np.zeros((n_s, H), dtype=complex)
    sv = np.zeros((n_r, H), dtype=complex)
    for h in range(H):
        u = U0[:, h].copy()
        v = V0[:, h].copy()
        for _ in range(cfg.power_iters):
            nu = C @ v + alpha * u
            nv = C.conj().T @ u + alpha * v
            for m in range(h):
                nu -= su[:, m] * U[:, m] * np.vdot(V[:, m], v)
                nv -= sv[:, m] * V[:, m] * np.vdot(U[:, m], u)
            u, v = _rescale(nu, nv)
            if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
                raise NumericError("power iterate became non-finite")
        nu2 = np.vdot(u, u).real
        nv2 = np.vdot(v, v).real
        if not (nu2 > 0 and nv2 > 0):
            raise NumericError("power iterate collapsed to zero")
        U[:, h] = u / np.sqrt(nu2)
        V[:, h] = v / np.sqrt(nv2)
        su[:, h] = _entry_ratio(C @ v, u, np.sqrt(nu2)) / np.sqrt(nv2 / nu2)
        sv[:, h] = _entry_ratio(C.conj().T @ u, v, np.sqrt(nv2)) / np.sqrt(nu2 / nv2)
    return CentralizedSVD(U, V, np.abs(su.mean(axis=0)), su, sv)


def centralized_power_evd(x, cfg: PowerConfig, seed) -> CentralizedEVD:
    """Power EVD of the sample covariance of ``x`` (node x snapshot)."""
    X = np.asarray(x)
    n, T = X.shape
    H = cfg.num_components
    if H > n:
        raise ParameterError(f"num_components={H} exceeds node count {n}")
    alpha = cfg.shift
    C = X @ X.conj().T / T
    U0, _ = initial_vectors(seed, n, 0, H)
    U = np.zeros((n, H), dtype=complex)
    lam = np.zeros((n, H), dtype=complex)
    for h in range(H):
        u = U0[:, h].copy()
        for _ in range(cfg.power_iters):
            nu = C @ u + alpha * u
            for m in range(h):
                nu -= lam[:, m].real * U[:, m] * np.vdot(U[:, m], u)
            (u,) = _rescale(nu)
            if not np.all(np.isfinite(u)):
                raise NumericError("power iterate became non-finite")
        nu2 = np.vdot(u, u).real
        if not nu2 > 0:
            raise NumericError("power iterate collapsed to zero")
        U[:, h] = u / np.sqrt(nu2)
        lam[:, h] = _entry_ratio(C @ u, u, np.sqrt(nu2))
    return CentralizedEVD(U, lam.mean(axis=0).real, lam)
