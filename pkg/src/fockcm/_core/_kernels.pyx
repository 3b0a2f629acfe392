# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled trajectory kernel; same contract as ``_fallback.cm_trajectory``."""

from libc.math cimport cos, sin, sqrt
import numpy as np


cdef inline double cabs2(double complex z) nogil:
    return z.real * z.real + z.imag * z.imag


def cm_trajectory(double complex[::1] d, double complex ai, double complex bi,
                  double complex[::1] afc, double complex[::1] bfc,
                  double[::1] angles, double[::1] uniforms, bint born,
                  double tail_threshold, double null_eps,
                  double[::1] mean_out, double[::1] dn_out, double[::1] p_out,
                  signed char[::1] outcome_out):
    cdef Py_ssize_t dim = d.shape[0]
    cdef Py_ssize_t steps = angles.shape[0]
    cdef Py_ssize_t n, k
    cdef double[::1] roots = np.sqrt(np.arange(1, dim + 1, dtype=np.float64))
    cdef double complex[::1] e_br = np.empty(dim, dtype=np.complex128)
    cdef double complex[::1] g_br = np.empty(dim, dtype=np.complex128)
    cdef double complex[::1] out = np.empty(dim, dtype=np.complex128)
    cdef double[::1] c = np.empty(dim, dtype=np.float64)
    cdef double[::1] s = np.empty(dim, dtype=np.float64)
    cdef double complex mi = -1j
    cdef double complex a, b
    cdef double prob, scale, mean, var, pop, dev
    cdef signed char outcome

    for k in range(steps):
        for n in range(dim):
            c[n] = cos(angles[k] * roots[n])
            s[n] = sin(angles[k] * roots[n])

        for n in range(dim):
            e_br[n] = ai * c[n] * d[n]
            if n + 1 < dim:
                e_br[n] = e_br[n] + mi * bi * s[n] * d[n + 1]
        g_br[0] = bi * d[0]
        for n in range(1, dim):
            g_br[n] = bi * c[n - 1] * d[n] + mi * ai * s[n - 1] * d[n - 1]

        a = afc[k]
        b = bfc[k]
        prob = 0.0
        for n in range(dim):
            out[n] = a * e_br[n] + b * g_br[n]
            prob += cabs2(out[n])
        outcome = 0
        if born and not uniforms[k] < prob:
            a = -bfc[k].conjugate()
            b = afc[k].conjugate()
            prob = 0.0
            for n in range(dim):
                out[n] = a * e_br[n] + b * g_br[n]
                prob += cabs2(out[n])
            outcome = 1
        if not prob >= null_eps:
            p_out[k] = prob
            outcome_out[k] = outcome
            return k, 1

        scale = 1.0 / sqrt(prob)
        mean = 0.0
        for n in range(dim):
            d[n] = out[n] * scale
            mean += n * cabs2(d[n])
        var = 0.0
        for n in range(dim):
            dev = n - mean
            var += dev * dev * cabs2(d[n])
        mean_out[k] = mean
        dn_out[k] = sqrt(var)
        p_out[k] = prob
        outcome_out[k] = outcome
        if tail_threshold > 0 and cabs2(d[dim - 1]) + cabs2(d[dim - 2]) >= tail_threshold:
            return k + 1, 2
    return steps, 0
