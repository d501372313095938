# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loop: the Volterra memory convolution over 2x2 blocks.

Computes out[k] = w0*M[0]@G[m] + sum_{j=1..m-1} M[j]@G[m-j] + wm*M[m]@G[0]
for every momentum k.  This O(m*N) contraction runs once per time step and
dominates the solver's runtime; a NumPy fallback with identical semantics
lives in _volterra_py.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()

BACKEND = "compiled"


def conv_step(cnp.complex128_t[:, :, :, ::1] m_hist,
              cnp.complex128_t[:, :, :, ::1] g_hist,
              Py_ssize_t m,
              double w0,
              double wm):
    """Weighted block-matrix convolution of kernel and propagator histories."""
    cdef Py_ssize_t n = m_hist.shape[1]
    out_arr = np.zeros((n, 2, 2), dtype=np.complex128)
    cdef cnp.complex128_t[:, :, ::1] out = out_arr
    cdef Py_ssize_t j, k
    cdef double w
    cdef double complex m00, m01, m10, m11, g00, g01, g10, g11
    if m < 1:
        return out_arr
    for j in range(m + 1):
        if j == 0:
            w = w0
        elif j == m:
            w = wm
        else:
            w = 1.0
        if w == 0.0:
            continue
        for k in range(n):
            m00 = m_hist[j, k, 0, 0]
            m01 = m_hist[j, k, 0, 1]
            m10 = m_hist[j, k, 1, 0]
            m11 = m_hist[j, k, 1, 1]
            g00 = g_hist[m - j, k, 0, 0]
            g01 = g_hist[m - j, k, 0, 1]
            g10 = g_hist[m - j, k, 1, 0]
            g11 = g_hist[m - j, k, 1, 1]
            out[k, 0, 0] = out[k, 0, 0] + w * (m00 * g00 + m01 * g10)
            out[k, 0, 1] = out[k, 0, 1] + w * (m00 * g01 + m01 * g11)
            out[k, 1, 0] = out[k, 1, 0] + w * (m10 * g00 + m11 * g10)
            out[k, 1, 1] = out[k, 1, 1] + w * (m10 * g01 + m11 * g11)
    return out_arr
