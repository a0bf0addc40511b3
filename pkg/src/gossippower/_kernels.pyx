# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: sparse gossip rounds and complex Jacobi sweeps."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs

cnp.import_array()

cdef extern from "complex.h" nogil:
    double creal(double complex)
    double cimag(double complex)
    double cabs(double complex)
    double complex conj(double complex)


def gossip_rounds(long[::1] indptr, long[::1] indices, double[::1] data,
                  Z, long rounds):
    # complex payload viewed as interleaved doubles: W is real, so each
    # real and imaginary part mixes independently
    src = np.array(Z, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t n = src.shape[0]
    cdef double[:, ::1] cur = src.view(np.float64)
    cdef double[:, ::1] nxt = np.empty((n, cur.shape[1]), dtype=np.float64)
    cdef double[:, ::1] tmp
    cdef Py_ssize_t width = cur.shape[1]
    cdef Py_ssize_t r, i, k, col, j
    cdef double w
    cdef double* out
    cdef double* inp
    with nogil:
        for r in range(rounds):
            for i in range(n):
                out = &nxt[i, 0]
                for col in range(width):
                    out[col] = 0.0
                for k in range(indptr[i], indptr[i + 1]):
                    j = indices[k]
                    w = data[k]
                    inp = &cur[j, 0]
                    for col in range(width):
                        out[col] += w * inp[col]
            tmp = cur
            cur = nxt
            nxt = tmp
    return np.asarray(cur).view(np.complex128)


cdef inline void _rotation(double app, double aqq, double complex apq,
                           double* c, double* s, double complex* e) nogil:
    cdef double mag = cabs(apq)
    cdef double theta, t
    e[0] = conj(apq) / mag
    theta = (aqq - app) / (2.0 * mag)
    t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
    if theta < 0.0:
        t = -t
    c[0] = 1.0 / sqrt(t * t + 1.0)
    s[0] = t * c[0]


def jacobi_eigh(A, double tol=1e-14, int max_sweeps=100):
    cdef double complex[:, ::1] a = np.array(A, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t n = a.shape[0]
    cdef double complex[:, ::1] v = np.eye(n, dtype=np.complex128)
    cdef Py_ssize_t p, q, k
    cdef double c, s, scale = 0.0, off
    cdef double complex e, ec, x, y
    cdef int sweeps = 0
    for p in range(n):
        for q in range(n):
            scale += creal(a[p, q]) ** 2 + cimag(a[p, q]) ** 2
    scale = sqrt(scale)
    with nogil:
        while sweeps < max_sweeps:
            off = 0.0
            for p in range(n):
                for q in range(n):
                    if p != q:
                        off += creal(a[p, q]) ** 2 + cimag(a[p, q]) ** 2
            off = sqrt(off)
            if off <= tol * scale or scale == 0.0:
                break
            sweeps += 1
            for p in range(n - 1):
                for q in range(p + 1, n):
                    if a[p, q] == 0:
                        continue
                    _rotation(creal(a[p, p]), creal(a[q, q]), a[p, q], &c, &s, &e)
                    ec = conj(e)
                    for k in range(n):
                        x = a[k, p]
                        y = a[k, q]
                        a[k, p] = c * x - s * e * y
                        a[k, q] = s * x + c * e * y
                    for k in range(n):
                        x = a[p, k]
                        y = a[q, k]
                        a[p, k] = c * x - s * ec * y
                        a[q, k] = s * x + c * ec * y
                    a[p, q] = 0
                    a[q, p] = 0
                    a[p, p] = creal(a[p, p])
                    a[q, q] = creal(a[q, q])
                    for k in range(n):
                        x = v[k, p]
                        y = v[k, q]
                        v[k, p] = c * x - s * e * y
                        v[k, q] = s * x + c * e * y
    w = np.empty(n)
    for p in range(n):
        w[p] = creal(a[p, p])
    return w, np.asarray(v), sweeps


def jacobi_svd(G, double tol=1e-15, int max_sweeps=100):
    cdef double complex[:, ::1] b = np.array(G, dtype=np.complex128, order="C", copy=True)
    cdef Py_ssize_t m = b.shape[0]
    cdef Py_ssize_t n = b.shape[1]
    cdef double complex[:, ::1] v = np.eye(n, dtype=np.complex128)
    cdef Py_ssize_t p, q, k
    cdef double c, s, alpha, beta
    cdef double complex e, gamma, x, y
    cdef int sweeps = 0
    cdef bint rotated
    with nogil:
        while sweeps < max_sweeps:
            sweeps += 1
            rotated = False
            for p in range(n - 1):
                for q in range(p + 1, n):
                    alpha = 0.0
                    beta = 0.0
                    gamma = 0
                    for k in range(m):
                        alpha += creal(b[k, p]) ** 2 + cimag(b[k, p]) ** 2
                        beta += creal(b[k, q]) ** 2 + cimag(b[k, q]) ** 2
                        gamma = gamma + conj(b[k, p]) * b[k, q]
                    if alpha == 0.0 or beta == 0.0:
                        continue
                    if cabs(gamma) <= tol * sqrt(alpha * beta):
                        continue
                    rotated = True
                    _rotation(alpha, beta, gamma, &c, &s, &e)
                    for k in range(m):
                        x = b[k, p]
                        y = b[k, q]
                        b[k, p] = c * x - s * e * y
                        b[k, q] = s * x + c * e * y
                    for k in range(n):
                        x = v[k, p]
                        y = v[k, q]
                        v[k, p] = c * x - s * e * y
                        v[k, q] = s * x + c * e * y
            if not rotated:
                break
    return np.asarray(b), np.asarray(v), sweeps
