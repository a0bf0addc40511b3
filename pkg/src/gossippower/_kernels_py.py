"""Pure numpy fallback for the compiled kernels in ``_kernels.pyx``.

Signatures and results match the compiled versions; only speed differs.
"""
import numpy as np


def gossip_rounds(indptr, indices, data, Z, rounds):
    """Apply ``rounds`` synchronous averaging steps ``Z <- W Z``.

    ``W`` is given in CSR form. ``Z`` is not modified.
    """
    n = len(indptr) - 1
    W = np.zeros((n, n))
    for i in range(n):
        for k in range(indptr[i], indptr[i + 1]):
            W[i, indices[k]] = data[k]
    out = np.array(Z, dtype=np.complex128, copy=True)
    for _ in range(rounds):
        out = W @ out
    return out


def _rotation(app, aqq, apq):
    # (c, s, e) such that J = [[c, s], [-s*e, c*e]] zeroes the (p, q) entry.
    mag = abs(apq)
    e = np.conj(apq) / mag
    theta = (aqq - app) / (2.0 * mag)
    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
    if theta < 0.0:
        t = -t
    c = 1.0 / np.sqrt(t * t + 1.0)
    return c, t * c, e


def jacobi_eigh(A, tol=1e-14, max_sweeps=100):
    """Cyclic Jacobi on a Hermitian matrix.

    Returns ``(w, V, sweeps)`` with unsorted real eigenvalues ``w`` and
    unitary ``V`` such that ``A V = V diag(w)``.
    """
    A = np.array(A, dtype=np.complex128, copy=True)
    n = A.shape[0]
    V = np.eye(n, dtype=np.complex128)
    scale = np.sqrt(np.sum(np.abs(A) ** 2))
    sweeps = 0
    while sweeps < max_sweeps:
        off = np.sqrt(np.sum(np.abs(A - np.diag(np.diag(A))) ** 2))
        if off <= tol * scale or scale == 0.0:
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0:
                    continue
                c, s, e = _rotation(A[p, p].real, A[q, q].real, apq)
                colp = A[:, p].copy()
                colq = A[:, q]
                A[:, p] = c * colp - s * e * colq
                A[:, q] = s * colp + c * e * colq
                rowp = A[p, :].copy()
                rowq = A[q, :]
                A[p, :] = c * rowp - s * np.conj(e) * rowq
                A[q, :] = s * rowp + c * np.conj(e) * rowq
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                vp = V[:, p].copy()
                vq = V[:, q]
                V[:, p] = c * vp - s * e * vq
                V[:, q] = s * vp + c * e * vq
    return np.diag(A).real.copy(), V, sweeps


def jacobi_svd(G, tol=1e-15, max_sweeps=100):
    """One-sided (Hestenes) Jacobi orthogonalisation of the columns of ``G``.

    Returns ``(B, V, sweeps)`` with ``G V = B`` and mutually orthogonal
    columns in ``B``.
    """
    B = np.array(G, dtype=np.complex128, copy=True)
    n = B.shape[1]
    V = np.eye(n, dtype=np.complex128)
    sweeps = 0
    while sweeps < max_sweeps:
        sweeps += 1
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                bp = B[:, p]
                bq = B[:, q]
                alpha = np.vdot(bp, bp).real
                beta = np.vdot(bq, bq).real
                gamma = np.vdot(bp, bq)
                if alpha == 0.0 or beta == 0.0:
                    continue
                if abs(gamma) <= tol * np.sqrt(alpha * beta):
                    continue
                rotated = True
                c, s, e = _rotation(alpha, beta, gamma)
                colp = bp.copy()
                B[:, p] = c * colp - s * e * bq
                B[:, q] = s * colp + c * e * bq
                vp = V[:, p].copy()
                vq = V[:, q]
                V[:, p] = c * vp - s * e * vq
                V[:, q] = s * vp + c * e * vq
        if not rotated:
            break
    return B, V, sweeps
