"""Error metrics and closed-form communication costs."""
import numpy as np

from .errors import ParameterError


def nmse_evd(true_eigs, est_eigs) -> float:
    """``sum |l_true - l_est|^2 / sum l_true^2``."""
    t = np.asarray(true_eigs, dtype=float)
    e = np.asarray(est_eigs)
    if t.shape != e.shape or t.ndim != 1 or t.size < 1:
        raise ParameterError(f"eigenvalue lists must have equal nonzero length: {t.shape} vs {e.shape}")
    denom = float(np.sum(t ** 2))
    if denom <= 0:
        raise ParameterError("true spectrum has zero norm")
    return float(np.sum(np.abs(t - e) ** 2) / denom)


def align_phase(est, true):
    """Rotate each estimated column by the unit phase of ``<est, true>``."""
    est = np.asarray(est, dtype=complex)
    true = np.asarray(true, dtype=complex)
    # real arithmetic keeps Im<u, u> exactly zero, so identical inputs stay put
    c = (np.sum(est.real * true.real + est.imag * true.imag, axis=0)
         + 1j * np.sum(est.real * true.imag - est.imag * true.real, axis=0))
    mag = np.abs(c)
    ph = np.where(mag > 0, c / np.where(mag > 0, mag, 1.0), 1.0)
    return est * ph


def svd_error_terms(true_U, true_V, est_U, est_V):
    """Per-entry squared errors after phase alignment, scaled so they sum to NMSE_SVD."""
    tU, tV, eU, eV = (np.atleast_2d(np.asarray(a, dtype=complex)) for a in (true_U, true_V, est_U, est_V))
    if tU.shape != eU.shape or tV.shape != eV.shape or tU.shape[1] != tV.shape[1]:
        raise ParameterError(
            f"dimension mismatch: U {tU.shape} vs {eU.shape}, V {tV.shape} vs {eV.shape}")
    du = np.abs(align_phase(eU, tU) - tU) ** 2 / np.sum(np.abs(tU) ** 2, axis=0)
    dv = np.abs(align_phase(eV, tV) - tV) ** 2 / np.sum(np.abs(tV) ** 2, axis=0)
    return 0.5 * du.sum(axis=1), 0.5 * dv.sum(axis=1)


def nmse_svd(true_U, true_V, est_U, est_V) -> float:
    """Half the summed relative squared errors of left and right vectors, phase-aligned."""
    eu, ev = svd_error_terms(true_U, true_V, est_U, est_V)
    return float(eu.sum() + ev.sum())


def predicted_handshakes(algorithm: str, H: int, K, power_iters: int) -> int:
    """Shaking-hand count of ``algorithm`` (``"sequential-evd"``, ``"parallel-svd"``, ...).

    ``K`` is the round count, or a ``(K_s, K_r)`` pair for SVD.
    """
    algo, _, problem = algorithm.lower().partition("-")
    if algo == "centralized":
        return 0
    if algo not in ("sequential", "parallel") or problem not in ("evd", "svd"):
        raise ParameterError(f"unknown algorithm {algorithm!r}")
    if isinstance(K, (tuple, list)):
        if problem == "evd":
            raise ParameterError("EVD takes a single K")
        per_iter = int(K[0]) + int(K[1])
    else:
        per_iter = int(K) if problem == "evd" else 2 * int(K)
    reps = H if algo == "sequential" else 1
    return reps * per_iter * (power_iters + 1)
