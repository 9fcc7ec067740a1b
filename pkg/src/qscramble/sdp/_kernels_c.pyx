# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled svec/congruence kernels.

Semantics match ``_kernels_py`` exactly (same coordinate order, same
scaling); see that module for the conventions.  The congruence map is
assembled column by column, each column being two outer products of
columns of A, so no (s^2, r^2) Kronecker intermediate is materialized.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()

cdef double _SQRT2 = sqrt(2.0)


def svec(x):
    """Isometric real vectorization of a Hermitian matrix."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] xa = \
        np.ascontiguousarray(x, dtype=np.complex128)
    cdef Py_ssize_t n = xa.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n * n)
    cdef Py_ssize_t i, j, t = n
    cdef Py_ssize_t m = n * (n - 1) // 2
    for i in range(n):
        out[i] = xa[i, i].real
    for i in range(n):
        for j in range(i + 1, n):
            out[t] = _SQRT2 * xa[i, j].real
            out[t + m] = _SQRT2 * xa[i, j].imag
            t += 1
    return out


def smat(v, Py_ssize_t n):
    """Inverse of :func:`svec`."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] va = \
        np.ascontiguousarray(v, dtype=np.float64)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] out = \
        np.zeros((n, n), dtype=np.complex128)
    cdef Py_ssize_t m = n * (n - 1) // 2
    cdef Py_ssize_t i, j, t = 0
    cdef double re, im
    for i in range(n):
        out[i, i] = va[i]
    for i in range(n):
        for j in range(i + 1, n):
            re = va[n + t] / _SQRT2
            im = va[n + m + t] / _SQRT2
            out[i, j] = re + 1j * im
            out[j, i] = re - 1j * im
            t += 1
    return out


def congruence_rep(a):
    """Real matrix of H -> A H A^dag in svec coordinates.

    Each source svec basis element B is alpha * E_cd + beta * E_dc, so
    its image A B A^dag is alpha * u_c u_d^dag + beta * u_d u_c^dag with
    u_k the k-th column of A; target coordinates read off entrywise.
    """
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] av = \
        np.ascontiguousarray(a, dtype=np.complex128)
    cdef Py_ssize_t s = av.shape[0], r = av.shape[1]
    cdef Py_ssize_t ms = s * (s - 1) // 2, mr = r * (r - 1) // 2
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((s * s, r * r))

    # pair tables for the off-diagonal coordinates, row-major upper
    cdef cnp.ndarray[cnp.int64_t, ndim=1] si = np.empty(ms, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] sj = np.empty(ms, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] rp = np.empty(mr, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] rq = np.empty(mr, dtype=np.int64)
    cdef Py_ssize_t i, j, t
    t = 0
    for i in range(s):
        for j in range(i + 1, s):
            si[t] = i
            sj[t] = j
            t += 1
    t = 0
    for i in range(r):
        for j in range(i + 1, r):
            rp[t] = i
            rq[t] = j
            t += 1

    cdef double complex alpha, beta, z
    cdef double inv2 = 1.0 / _SQRT2
    cdef Py_ssize_t col, kind, c, d, u
    for kind in range(3):
        for t in range(r if kind == 0 else mr):
            if kind == 0:
                c = t
                d = t
                col = t
                alpha = 1.0
                beta = 0.0
            elif kind == 1:
                c = rp[t]
                d = rq[t]
                col = r + t
                alpha = inv2
                beta = inv2
            else:
                c = rp[t]
                d = rq[t]
                col = r + mr + t
                alpha = 1j * inv2
                beta = -1j * inv2
            for u in range(s):
                z = (alpha * av[u, c] * av[u, d].conjugate()
                     + beta * av[u, d] * av[u, c].conjugate())
                out[u, col] = z.real
            for u in range(ms):
                i = si[u]
                j = sj[u]
                z = (alpha * av[i, c] * av[j, d].conjugate()
                     + beta * av[i, d] * av[j, c].conjugate())
                out[s + u, col] = _SQRT2 * z.real
                out[s + ms + u, col] = _SQRT2 * z.imag
    return out
