# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops for per-frame signal processing.

Mirrors humeval._kernels_py; keep both in sync.  The third difference uses
the same (x[t+3] - x[t]) - 3 (x[t+2] - x[t+1]) grouping so constant signals
cancel exactly in both backends.
"""

from libc.math cimport sqrt

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "compiled"


cdef inline Py_ssize_t _reflect(Py_ssize_t i, Py_ssize_t n) nogil:
    # edge-inclusive reflection, folding as often as needed
    cdef Py_ssize_t period = 2 * n
    if n == 1:
        return 0
    i = i % period
    if i < 0:
        i += period
    if i >= n:
        i = period - 1 - i
    return i


def smooth_columns(object signal, object kernel):
    cdef cnp.ndarray[double, ndim=2, mode="c"] sig = np.ascontiguousarray(signal, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1, mode="c"] ker = np.ascontiguousarray(kernel, dtype=np.float64)
    cdef Py_ssize_t T = sig.shape[0]
    cdef Py_ssize_t D = sig.shape[1]
    cdef Py_ssize_t K = ker.shape[0]
    cdef Py_ssize_t half = (K - 1) // 2
    cdef cnp.ndarray[double, ndim=2, mode="c"] out = np.zeros((T, D), dtype=np.float64)
    cdef Py_ssize_t t, k, d, src
    cdef double w
    with nogil:
        for k in range(K):
            w = ker[k]
            for t in range(T):
                src = _reflect(t - half + k, T)
                for d in range(D):
                    out[t, d] += w * sig[src, d]
    return out


def third_difference(object signal, double fps):
    cdef cnp.ndarray[double, ndim=2, mode="c"] x = np.ascontiguousarray(signal, dtype=np.float64)
    cdef Py_ssize_t T = x.shape[0]
    cdef Py_ssize_t D = x.shape[1]
    cdef Py_ssize_t n = T - 3 if T > 3 else 0
    cdef cnp.ndarray[double, ndim=2, mode="c"] out = np.empty((n, D), dtype=np.float64)
    cdef double scale = fps * fps * fps
    cdef Py_ssize_t t, d
    with nogil:
        for t in range(n):
            for d in range(D):
                out[t, d] = ((x[t + 3, d] - x[t, d]) - 3.0 * (x[t + 2, d] - x[t + 1, d])) * scale
    return out


def residual_mean_norm(object a, object b):
    cdef cnp.ndarray[double, ndim=2, mode="c"] xa = np.ascontiguousarray(a, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=2, mode="c"] xb = np.ascontiguousarray(b, dtype=np.float64)
    cdef Py_ssize_t T = xa.shape[0]
    cdef Py_ssize_t D = xa.shape[1]
    if xb.shape[0] != T or xb.shape[1] != D:
        raise ValueError("shape mismatch")
    cdef double acc = 0.0
    cdef double row, diff
    cdef Py_ssize_t t, d
    with nogil:
        for t in range(T):
            row = 0.0
            for d in range(D):
                diff = xa[t, d] - xb[t, d]
                row += diff * diff
            acc += sqrt(row)
    return acc / T
