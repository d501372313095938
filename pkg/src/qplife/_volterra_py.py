"""NumPy fallback for the Volterra memory convolution.

Same contract as the compiled extension in _volterra.pyx; selected at import
time by :mod:`qplife.melonic` when the extension is unavailable.
"""

from __future__ import annotations

import numpy as np

BACKEND = "numpy"


def conv_step(m_hist: np.ndarray, g_hist: np.ndarray, m: int, w0: float, wm: float) -> np.ndarray:
    """out[k] = w0*M[0]@G[m] + sum_{j=1..m-1} M[j]@G[m-j] + wm*M[m]@G[0]."""
    n = m_hist.shape[1]
    out = np.zeros((n, 2, 2), dtype=np.complex128)
    if m < 1:
        return out
    if m >= 2:
        out += np.einsum("jkab,jkbc->kac", m_hist[1:m], g_hist[m - 1 : 0 : -1], optimize=True)
    if w0 != 0.0:
        out += w0 * (m_hist[0] @ g_hist[m])
    if wm != 0.0:
        out += wm * (m_hist[m] @ g_hist[0])
    return out
