"""Scratch: validate the momentum-space memory kernel against a real-space
Wick-contraction oracle (independent route: L x L matrix exponential)."""

import numpy as np
from scipy.linalg import expm

import sys

sys.path.insert(0, "src")

from qplife.bands import free_propagator
from qplife.memory_kernel import kernel_row_direct, kernel_row_fft, single_band_kernel


def real_space_hamiltonian(L, h):
    eps = np.zeros((L, L), dtype=complex)
    for r in range(L):
        eps[r, (r + 1) % L] = -0.5
        eps[(r + 1) % L, r] = -0.5
        eps[r, r] = 2.0 * h * (+1 if r % 2 == 0 else -1)
    return eps


def real_space_free_G(L, h, t):
    return 0.5 * expm(-1j * real_space_hamiltonian(L, h) * t)


def wick_kernel_real(L, h, t, delta):
    """(M chi)_{rr'} = 16 D^2 sum_{d,d'} conj(G_{r+d,r'+d'}) *
    (G_{r+d,r'+d'} G_{rr'} - G_{r+d,r'} G_{r,r'+d'})."""
    G = real_space_free_G(L, h, t)
    out = np.zeros((L, L), dtype=complex)
    for d in (+1, -1):
        for dp in (+1, -1):
            Gs = np.roll(np.roll(G, -d, axis=0), -dp, axis=1)  # G_{r+d, r'+dp}
            G_r_dp = np.roll(G, -dp, axis=1)  # G_{r, r'+dp}
            G_d_rp = np.roll(G, -d, axis=0)  # G_{r+d, r'}
            out += np.conj(Gs) * (Gs * G - G_d_rp * G_r_dp)
    return 16.0 * delta**2 * out


def to_blocks(mat_real, L):
    """(1/N) sum_{x,x'} e^{-iK(x-x')} mat[2x+a, 2x'+a'] -> (N,2,2) blocks."""
    N = L // 2
    Ks = 2.0 * np.pi * np.arange(N) / N
    out = np.zeros((N, 2, 2), dtype=complex)
    xs = np.arange(N)
    for a in range(2):
        for ap in range(2):
            sub = mat_real[np.ix_(2 * xs + a, 2 * xs + ap)]
            for ik, K in enumerate(Ks):
                phase = np.exp(-1j * K * (xs[:, None] - xs[None, :]))
                out[ik, a, ap] = (phase * sub).sum() / N
    return out


def main():
    L, h, delta = 12, 0.5, 0.3
    N = L // 2
    Ks = 2.0 * np.pi * np.arange(N) / N

    # 1. free propagator momentum blocks vs real-space expm
    for t in (0.0, 0.7, 2.3):
        blocks_closed = free_propagator(Ks, t, h)
        blocks_real = to_blocks(real_space_free_G(L, h, t), L)
        err = np.max(np.abs(blocks_closed - blocks_real))
        print(f"free prop   t={t:4.1f}  max err = {err:.3e}")

    # 2. momentum kernel (direct sum) vs real-space Wick oracle
    for t in (0.0, 0.7, 2.3):
        g_row = free_propagator(Ks, t, h)
        mk_direct = kernel_row_direct(g_row, delta)  # = 2 (M chi)
        mk_wick = 2.0 * to_blocks(wick_kernel_real(L, h, t, delta), L)
        err = np.max(np.abs(mk_direct - mk_wick))
        scale = np.max(np.abs(mk_wick))
        print(f"kernel      t={t:4.1f}  max err = {err:.3e}   scale = {scale:.3e}")

    # 3. FFT route vs direct
    rng = np.random.default_rng(0)
    g_rand = rng.normal(size=(N, 2, 2)) + 1j * rng.normal(size=(N, 2, 2))
    err = np.max(np.abs(kernel_row_fft(g_rand, delta) - kernel_row_direct(g_rand, delta)))
    print(f"fft vs direct (random row)  max err = {err:.3e}")

    # 4. h = 0 reduction to the single-band kernel
    h0 = 0.0
    Lred = 16
    Nred = Lred // 2
    Ksr = 2.0 * np.pi * np.arange(Nred) / Nred
    for t in (0.0, 0.9, 3.1):
        g_row = free_propagator(Ksr, t, h0)
        mk = kernel_row_direct(g_row, delta)
        ks_single = 2.0 * np.pi * np.arange(Lred) / Lred
        m_red = np.zeros(Lred, dtype=complex)
        for m, k in enumerate(ks_single):
            blk = mk[m % Nred]
            m_red[m] = 0.5 * (
                blk[0, 0] + blk[1, 1] + np.exp(1j * k) * blk[0, 1] + np.exp(-1j * k) * blk[1, 0]
            )
        m_scalar = np.array([single_band_kernel(k, t, delta, Lred) for k in ks_single])
        err = np.max(np.abs(m_red - m_scalar))
        print(f"h=0 reduce  t={t:4.1f}  max err = {err:.3e}   scale = {np.max(np.abs(m_scalar)):.3e}")
        if t == 0.0:
            print(f"   M(0) diag value = {mk[0,0,0]:.6f} (expect {8*delta**2:.6f} = 8 D^2)")


if __name__ == "__main__":
    main()
