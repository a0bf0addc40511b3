"""Dense complex decompositions used as ground truth.

Both oracles run the in-repo Jacobi kernels (compiled when available) and
then fix ordering and phase so their output is deterministic.
"""
from typing import NamedTuple

import numpy as np

from . import kernels
from .errors import NumericError, ParameterError

HERMITIAN_TOL = 1e-10


class EVD(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


class SVD(NamedTuple):
    U: np.ndarray
    s: np.ndarray
    V: np.ndarray


def _phase_fix(cols):
    """Unit phases that make each column's largest-magnitude entry real positive."""
    idx = np.argmax(np.abs(cols), axis=0)
    pivots = cols[idx, np.arange(cols.shape[1])]
    mags = np.abs(pivots)
    return np.where(mags > 0, np.conj(pivots) / np.where(mags > 0, mags, 1.0), 1.0)


def hermitian_evd_oracle(m) -> EVD:
    """Eigen-decomposition of a Hermitian matrix, eigenvalues descending."""
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ParameterError(f"expected a square matrix, got shape {m.shape}")
    norm = np.linalg.norm(m)
    if np.abs(m - m.conj().T).max(initial=0.0) > HERMITIAN_TOL * max(norm, 1.0):
        raise ParameterError("matrix is not Hermitian")
    herm = 0.5 * (m + m.conj().T)
    w, V, sweeps = kernels.jacobi_eigh(herm)
    if not np.all(np.isfinite(w)):
        raise NumericError("Jacobi eigensolver produced non-finite eigenvalues")
    order = np.argsort(-w, kind="stable")
    w = np.asarray(w)[order]
    V = np.asarray(V)[:, order]
    return EVD(w, V * _phase_fix(V))


def _complete_basis(Q, k):
    """Fill columns ``k:`` of ``Q`` with an orthonormal complement of ``Q[:, :k]``."""
    m, r = Q.shape
    j = 0
    for col in range(k, r):
        while True:
            e = np.zeros(m, dtype=np.complex128)
            e[j % m] = 1.0
            j += 1
            for _ in range(2):
                e -= Q[:, :col] @ (Q[:, :col].conj().T @ e)
            nrm = np.linalg.norm(e)
            if nrm > 1e-8:
                Q[:, col] = e / nrm
                break
    return Q


def svd_oracle(m) -> SVD:
    """Thin SVD ``m = U diag(s) V^H`` with ``s`` descending."""
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2:
        raise ParameterError(f"expected a matrix, got shape {m.shape}")
    rows, cols = m.shape
    if rows < cols:
        Ut, s, Vt = svd_oracle(m.conj().T)
        return SVD(Vt, s, Ut)
    B, V, _ = kernels.jacobi_svd(m)
    B = np.asarray(B)
    V = np.asarray(V)
    s = np.linalg.norm(B, axis=0)
    if not np.all(np.isfinite(s)):
        raise NumericError("Jacobi SVD produced non-finite singular values")
    order = np.argsort(-s, kind="stable")
    s = s[order]
    B = B[:, order]
    V = V[:, order]
    cutoff = (s[0] if s.size else 0.0) * cols * np.finfo(float).eps
    rank = int(np.sum(s > cutoff)) if s.size and s[0] > 0 else 0
    U = np.zeros((rows, cols), dtype=np.complex128)
    U[:, :rank] = B[:, :rank] / s[:rank]
    s[rank:] = 0.0
    U = _complete_basis(U, rank)
    ph = _phase_fix(U)
    return SVD(U * ph, s, V * ph)


def inner(a, b) -> complex:
    """``a^H b``."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ParameterError(f"length mismatch: {a.shape} vs {b.shape}")
    return complex(np.sum(np.conj(a) * b))


def orthonormalize(X):
    """Orthonormal basis for the column span of ``X`` (via the SVD oracle)."""
    U, s, _ = svd_oracle(X)
    return U[:, : int(np.sum(s > s[0] * 1e-12))] if s.size and s[0] > 0 else U[:, :0]


def principal_angles(A, B):
    """Principal angles (radians, ascending) between the column spans of A and B.

    Computed from sines so that small angles keep full precision.
    """
    Qa = orthonormalize(np.asarray(A, dtype=np.complex128))
    Qb = orthonormalize(np.asarray(B, dtype=np.complex128))
    if Qa.shape[1] > Qb.shape[1]:
        Qa, Qb = Qb, Qa
    resid = Qa - Qb @ (Qb.conj().T @ Qa)
    sines = svd_oracle(resid).s
    return np.sort(np.arcsin(np.clip(sines, 0.0, 1.0)))
