"""Second-order memory kernel of the staggered-field chain.

The kernel enters the exact equation of motion for the two-band propagator,

    dG_k/dt + i eps_k G_k + int_0^t dtau M_k(tau) G_k(t - tau) = 0 ,

and is built from three propagator factors.  With a = (1-eta)/2 labelling
the site inside the unit cell, the block elements are

  (M chi)_{k,eta eta'}(t) =
      (64 D^2/N^2) sum_{p1,p2} cos^2(p2/2) e^{i p2 (a'-a)}
          G_{k+p1,-eta,-eta'} [G_{k+p1+p2,-eta,-eta'}]^* G_{k+p2,eta,eta'}
    - (16 D^2/N^2) sum_{p1,p2} (1+e^{i p2})(1+e^{-i p1}) e^{-i p2 a} e^{i p1 a'}
          G_{k+p1,-eta,eta'} [G_{k+p1+p2,-eta,-eta'}]^* G_{k+p2,eta,-eta'}

with all G factors evaluated at the kernel's own time argument, and
M = (M chi) chi^{-1} = 2 (M chi) since chi = I/2.  Here D is the coupling
of the staggered Hamiltonian's zz-type term D * sum_r (1-2n_r)(1-2n_{r+1});
at h = 0 the kernel collapses to the single-band form

    M_k(t) = (8 D^2/L^2) sum_{p,q} (cos q - cos p)^2
             e^{i (eps_{k+q+p} - eps_{k+q} - eps_{k+p}) t} .

Two evaluation routes are provided: a direct double momentum sum
(O(N^2) per k, the reference) and an FFT factorization (O(N log N) for the
whole k row) that is algebraically identical.
"""

from __future__ import annotations

import numpy as np

from .bands import epsilon_cosine
from .grids import cyclic_corr

# eta index convention: index 0 <-> eta = +1 (a = 0), index 1 <-> eta = -1 (a = 1).


def kernel_row_direct(g_row: np.ndarray, delta: float) -> np.ndarray:
    """Direct O(N^2)-per-k evaluation of M_k = 2 (M chi)_k for one time slice.

    `g_row` holds the site-basis blocks G_{k,eta eta'} on the unit-cell grid,
    shape (N, 2, 2).  Intended as the oracle for the FFT route; cost grows
    as N^3.
    """
    g_row = np.asarray(g_row)
    n = g_row.shape[0]
    idx = np.arange(n)
    kk = 2.0 * np.pi * idx / n
    out = np.zeros((n, 2, 2), dtype=complex)
    c1 = 64.0 * delta**2 / n**2
    c2 = 16.0 * delta**2 / n**2
    # p1 varies along axis 0, p2 along axis 1
    i1 = (idx[:, None] + idx[None, :]) % n  # index of p1 + p2
    cos_half = np.cos(kk / 2.0) ** 2
    for ik in range(n):
        s1 = (ik + idx) % n  # k + p1 (or k + p2) indices
        s12 = (ik + i1) % n  # k + p1 + p2
        for i in range(2):
            for j in range(2):
                a, ap = i, j
                term1 = (
                    cos_half[None, :]
                    * np.exp(1j * kk[None, :] * (ap - a))
                    * g_row[s1, 1 - i, 1 - j][:, None]
                    * np.conj(g_row[s12, 1 - i, 1 - j])
                    * g_row[s1, i, j][None, :]
                )
                term2 = (
                    (1.0 + np.exp(1j * kk[None, :]))
                    * (1.0 + np.exp(-1j * kk[:, None]))
                    * np.exp(-1j * kk[None, :] * a)
                    * np.exp(1j * kk[:, None] * ap)
                    * g_row[s1, 1 - i, j][:, None]
                    * np.conj(g_row[s12, 1 - i, 1 - j])
                    * g_row[s1, i, 1 - j][None, :]
                )
                out[ik, i, j] = c1 * term1.sum() - c2 * term2.sum()
    return 2.0 * out


def kernel_row_fft(g_row: np.ndarray, delta: float) -> np.ndarray:
    """FFT evaluation of the same kernel row, O(N log N) overall.

    Factorization: for each (eta, eta') the double sum splits into an inner
    momentum correlation h(s) = sum_u A(u) B^*(u+s) (k-independent) followed
    by an outer correlation in k; the (1+e^{-i p1}) factor is split into two
    k-independent inner sums via e^{-i p1} = e^{-iu} e^{+ik}.  Agrees with
    :func:`kernel_row_direct` to ~1e-10 relative.
    """
    g_row = np.asarray(g_row)
    n = g_row.shape[0]
    kk = 2.0 * np.pi * np.arange(n) / n
    c1 = 64.0 * delta**2 / n**2
    c2 = 16.0 * delta**2 / n**2
    cos_half = np.cos(kk / 2.0) ** 2
    out = np.zeros((n, 2, 2), dtype=complex)
    for i in range(2):
        for j in range(2):
            a, ap = i, j
            big = g_row[:, 1 - i, 1 - j]
            # term 1: inner corr of (A, A), outer corr against G_{., eta eta'}
            h1 = cyclic_corr(big, np.conj(big))
            f1 = cos_half * np.exp(1j * kk * (ap - a))
            t1 = cyclic_corr(f1 * h1, g_row[:, i, j])
            # term 2: phases e^{i p1 s}, s in {a', a'-1}
            d = g_row[:, 1 - i, j]
            e = g_row[:, i, 1 - j]
            f2 = (1.0 + np.exp(1j * kk)) * np.exp(-1j * kk * a)
            t2 = np.zeros(n, dtype=complex)
            for s in (ap, ap - 1):
                hs = cyclic_corr(np.exp(1j * s * kk) * d, np.conj(big))
                t2 += np.exp(-1j * s * kk) * cyclic_corr(f2 * hs, e)
            out[:, i, j] = c1 * t1 - c2 * t2
    return 2.0 * out


def single_band_kernel(k, t, delta: float, n_sites: int) -> np.ndarray:
    """h = 0 single-band kernel from the closed double sum.

    M_k(t) = (8 D^2/L^2) sum_{p,q} (cos q - cos p)^2
             e^{i (eps_{k+q+p} - eps_{k+q} - eps_{k+p}) t},  eps = -cos.
    Broadcasts over array-valued t; used for reduction checks and as a
    frozen-kernel reference.
    """
    k = float(k)
    t = np.asarray(t, dtype=float)
    qs = 2.0 * np.pi * np.arange(n_sites) / n_sites
    q = qs[:, None]
    p = qs[None, :]
    weight = (np.cos(q) - np.cos(p)) ** 2
    phase = epsilon_cosine(k + q + p) - epsilon_cosine(k + q) - epsilon_cosine(k + p)
    factor = 8.0 * delta**2 / n_sites**2
    return factor * np.tensordot(
        np.exp(1j * np.multiply.outer(t, phase)), weight, axes=([-2, -1], [0, 1])
    )
