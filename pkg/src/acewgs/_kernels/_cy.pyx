# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the inverse-model hot path.

Mirrors ``acewgs._kernels._py`` operation for operation; keep the two in
sync. The win over the fallback is the per-call overhead: PSO evaluates
these once per particle per iteration.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "compiled"

cdef extern from "math.h" nogil:
    double INFINITY
    double fabs(double x)


cdef inline double _wgs_residual(double k_eq, double x, double y_co,
                                 double y_h2o, double y_co2, double y_h2) nogil:
    cdef double num = (y_co2 + x * y_co) * (y_h2 + x * y_co)
    cdef double den = (y_co * (1.0 - x)) * (y_h2o - x * y_co)
    if den <= 0.0:
        return INFINITY
    return k_eq - num / den


cdef double _xeq_scalar(double k_eq, double y_co, double y_h2o,
                        double y_co2, double y_h2) nogil:
    cdef double x_hi, lo, hi, mid, num, den, r_lo, r_hi
    cdef int it
    if y_h2o <= 0.0:
        return 0.0
    x_hi = y_h2o / y_co
    if x_hi > 1.0:
        x_hi = 1.0
    if y_co2 * y_h2 >= k_eq * (y_co * y_h2o):
        return 0.0
    lo = 0.0
    hi = x_hi
    for it in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        num = (y_co2 + mid * y_co) * (y_h2 + mid * y_co)
        den = (y_co * (1.0 - mid)) * (y_h2o - mid * y_co)
        if den <= 0.0 or num >= k_eq * den:
            hi = mid
        else:
            lo = mid
    r_lo = fabs(_wgs_residual(k_eq, lo, y_co, y_h2o, y_co2, y_h2))
    r_hi = fabs(_wgs_residual(k_eq, hi, y_co, y_h2o, y_co2, y_h2))
    return lo if r_lo <= r_hi else hi


def wgs_xeq_batch(k_eq, y_co, y_h2o, y_co2, y_h2):
    """Equilibrium CO conversion for each feed, as fractions in [0, 1]."""
    cdef double[::1] k = np.ascontiguousarray(k_eq, dtype=np.float64)
    cdef double[::1] co = np.ascontiguousarray(y_co, dtype=np.float64)
    cdef double[::1] h2o = np.ascontiguousarray(y_h2o, dtype=np.float64)
    cdef double[::1] co2 = np.ascontiguousarray(y_co2, dtype=np.float64)
    cdef double[::1] h2 = np.ascontiguousarray(y_h2, dtype=np.float64)
    cdef Py_ssize_t n = k.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            out[i] = _xeq_scalar(k[i], co[i], h2o[i], co2[i], h2[i])
    return out_arr


def mlp_forward(x, weights, biases, relu_flags):
    """Forward pass of one dense network over a batch (see _py variant)."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2] h = \
        np.ascontiguousarray(x, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] w
    cdef cnp.ndarray[cnp.float64_t, ndim=1] b
    cdef cnp.ndarray[cnp.float64_t, ndim=2] nxt
    cdef Py_ssize_t n, fin, fout, i, j, kk
    cdef double acc
    cdef int relu
    cdef double[:, ::1] hv, wv, nv
    cdef double[::1] bv
    for layer in range(len(weights)):
        w = np.ascontiguousarray(weights[layer], dtype=np.float64)
        b = np.ascontiguousarray(biases[layer], dtype=np.float64)
        relu = relu_flags[layer]
        n = h.shape[0]
        fin = h.shape[1]
        fout = w.shape[0]
        nxt = np.empty((n, fout), dtype=np.float64)
        hv = h
        wv = w
        bv = b
        nv = nxt
        with nogil:
            for i in range(n):
                for j in range(fout):
                    acc = bv[j]
                    for kk in range(fin):
                        acc += wv[j, kk] * hv[i, kk]
                    if relu and acc < 0.0:
                        acc = 0.0
                    nv[i, j] = acc
        h = nxt
    return h
