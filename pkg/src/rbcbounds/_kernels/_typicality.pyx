# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled counting kernels for the Monte Carlo typicality decoders."""
import numpy as np

cimport numpy as cnp

cnp.import_array()


def joint_counts(idx, int n_bins):
    """Per-row histogram of composite tuple indices; mirrors fallback.joint_counts."""
    cdef cnp.ndarray[cnp.int64_t, ndim=2] a = np.ascontiguousarray(idx, dtype=np.int64)
    cdef Py_ssize_t c = a.shape[0], n = a.shape[1]
    cdef cnp.ndarray[cnp.int64_t, ndim=2] out = np.zeros((c, n_bins), dtype=np.int64)
    cdef Py_ssize_t i, j
    for i in range(c):
        for j in range(n):
            out[i, a[i, j]] += 1
    return out


def typical_mask(idx, ref, double eps):
    """Strong joint typicality for a batch of rows; mirrors fallback.typical_mask."""
    cdef cnp.ndarray[cnp.int64_t, ndim=2] a = np.ascontiguousarray(
        np.atleast_2d(idx), dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] r = np.ascontiguousarray(
        ref, dtype=np.float64)
    cdef Py_ssize_t c = a.shape[0], n = a.shape[1], k = r.shape[0]
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] out = np.zeros(c, dtype=np.uint8)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] counts = np.zeros(k, dtype=np.int64)
    cdef double fn = <double> n
    cdef Py_ssize_t i, j
    cdef int ok
    for i in range(c):
        for j in range(k):
            counts[j] = 0
        for j in range(n):
            counts[a[i, j]] += 1
        ok = 1
        for j in range(k):
            if r[j] > 0.0:
                if abs(counts[j] / fn - r[j]) > eps * r[j]:
                    ok = 0
                    break
            elif counts[j] != 0:
                ok = 0
                break
        out[i] = ok
    return out.view(np.bool_)
