# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the two hot numerical kernels.

Semantics match _kernels_py exactly; see that module for the contracts.
"""
import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin, sqrt, log2
from scipy.linalg.cython_lapack cimport zheev

cnp.import_array()

BACKEND_NAME = "compiled"

cdef double complex J_UNIT = 1j


cdef inline double _entropy_pair(double pk, double lo) nogil:
    """pk * S(conditional state) given the Bloch length lo of pk*sigma."""
    cdef double l1, l2, ent
    if pk <= 1e-15:
        return 0.0
    l1 = 0.5 * (pk + lo) / pk
    l2 = 0.5 * (pk - lo) / pk
    if l1 > 1.0:
        l1 = 1.0
    if l2 < 0.0:
        l2 = 0.0
    ent = 0.0
    if l1 > 1e-300:
        ent -= l1 * log2(l1)
    if l2 > 1e-300:
        ent -= l2 * log2(l2)
    return pk * ent


def cond_entropy_grid(rho, thetas, phis):
    """Post-measurement conditional entropy over a grid of Bloch angles."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2, mode="c"] r = \
        np.ascontiguousarray(rho, dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] th = \
        np.ascontiguousarray(thetas, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] ph = \
        np.ascontiguousarray(phis, dtype=np.float64)
    cdef Py_ssize_t n = th.shape[0], m = ph.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] out = np.zeros((n, m))
    cdef Py_ssize_t i, j, a, c, side
    cdef double ct, st, cp, sp, pk, df, lo, total
    cdef double complex e, p00, p01, p10, p11, n00, n01, n11, coef00, coef01, coef10, coef11

    with nogil:
        for i in range(n):
            ct = cos(0.5 * th[i])
            st = sin(0.5 * th[i])
            for j in range(m):
                cp = cos(ph[j])
                sp = sin(ph[j])
                e = cp + J_UNIT * sp
                p00 = ct * ct
                p10 = ct * st * e
                p01 = ct * st * (cp - J_UNIT * sp)
                p11 = st * st
                total = 0.0
                for side in range(2):
                    if side == 0:
                        coef00 = p00
                        coef01 = p01
                        coef10 = p10
                        coef11 = p11
                    else:
                        coef00 = 1.0 - p00
                        coef01 = -p01
                        coef10 = -p10
                        coef11 = 1.0 - p11
                    # N[a,c] = sum_{b,b'} rho[2a+b, 2c+b'] * P[b',b]
                    n00 = (r[0, 0] * coef00 + r[0, 1] * coef10
                           + r[1, 0] * coef01 + r[1, 1] * coef11)
                    n01 = (r[0, 2] * coef00 + r[0, 3] * coef10
                           + r[1, 2] * coef01 + r[1, 3] * coef11)
                    n11 = (r[2, 2] * coef00 + r[2, 3] * coef10
                           + r[3, 2] * coef01 + r[3, 3] * coef11)
                    pk = n00.real + n11.real
                    df = n00.real - n11.real
                    lo = sqrt(df * df + 4.0 * (n01.real * n01.real + n01.imag * n01.imag))
                    total += _entropy_pair(pk, lo)
                out[i, j] = total
    return out


def trace_norm_diff_batch(rho, chis):
    """Schatten 1-norms ||rho - chis[k]||_1 for a stack of 4x4 Hermitian chis."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2, mode="c"] r = \
        np.ascontiguousarray(rho, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=3, mode="c"] cs = \
        np.ascontiguousarray(np.asarray(chis, dtype=np.complex128).reshape(-1, 4, 4))
    cdef Py_ssize_t nb = cs.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] out = np.empty(nb)
    cdef double complex a[16]
    cdef double complex work[64]
    cdef double w[4]
    cdef double rwork[16]
    cdef int n4 = 4, lda = 4, lwork = 64, info = 0
    cdef char jobz = b"N", uplo = b"L"
    cdef Py_ssize_t k, p, q
    cdef double s

    with nogil:
        for k in range(nb):
            for p in range(4):
                for q in range(4):
                    # column-major; Hermitian input makes the transpose harmless
                    a[p + 4 * q] = r[p, q] - cs[k, p, q]
            zheev(&jobz, &uplo, &n4, &a[0], &lda, &w[0], &work[0], &lwork,
                  &rwork[0], &info)
            if info != 0:
                out[k] = -1.0
                continue
            s = 0.0
            for p in range(4):
                s += w[p] if w[p] >= 0.0 else -w[p]
            out[k] = s
    if np.any(out < 0.0):
        raise RuntimeError("eigenvalue routine failed on a batch entry")
    return out
