"""Scratch: end-to-end check of the self-consistent melonic solver against
exact diagonalization of the full many-body problem at small L.

Model: H = -1/2 sum (f+ f + h.c.) + D sum_r (1-2n_r)(1-2n_{r+1}), PBC,
infinite temperature: G_k(t) = tr(f_k(t) f_k^dagger) / 2^L.
"""

import numpy as np

from qplife.melonic import SolverConfig, solve


def fermion_ops(L):
    """Jordan-Wigner fermion annihilation operators as dense matrices."""
    dim = 2**L
    ops = []
    sz = np.array([[1.0, 0.0], [0.0, -1.0]])
    sm = np.array([[0.0, 0.0], [1.0, 0.0]])  # lowers |0><1|? define below
    # convention: site occupied = index 1; annihilator |0><1|
    ann = np.array([[0.0, 1.0], [0.0, 0.0]])
    for i in range(L):
        mats = []
        for j in range(L):
            if j < i:
                mats.append(sz)
            elif j == i:
                mats.append(ann)
            else:
                mats.append(np.eye(2))
        full = mats[0]
        for m in mats[1:]:
            full = np.kron(full, m)
        ops.append(full)
    return ops


def main():
    L = 12
    D = 0.3
    f = fermion_ops(L)
    dim = 2**L
    H = np.zeros((dim, dim))
    for r in range(L):
        rp = (r + 1) % L
        H += -0.5 * (f[rp].T @ f[r] + f[r].T @ f[rp])
        n_r = f[r].T @ f[r]
        n_rp = f[rp].T @ f[rp]
        H += D * (np.eye(dim) - 2 * n_r) @ (np.eye(dim) - 2 * n_rp)
    H = 0.5 * (H + H.T)
    print("diagonalizing", dim, "x", dim)
    w, v = np.linalg.eigh(H)
    # f_{k=0} = L^{-1/2} sum_r f_r
    fk = sum(f) / np.sqrt(L)
    fk_e = v.T @ fk @ v  # eigenbasis
    fkd_e = fk_e.T.conj()
    ts = np.arange(0, 5.01, 0.25)
    g_ed = []
    for t in ts:
        ph = np.exp(1j * w * t)
        # f_k(t) = e^{iHt} f_k e^{-iHt}: matrix elements ph_a fk_ab conj(ph_b)
        fk_t = (ph[:, None] * fk_e) * np.conj(ph[None, :])
        g_ed.append(np.trace(fk_t @ fkd_e) / dim)
    g_ed = np.array(g_ed)

    cfg = SolverConfig(n_sites=L, dt=0.05, t_max=5.0, delta=D, h=0.0)
    res = solve(cfg)
    g_mel = res.single_band_g()[:, 0]
    idx = [int(round(t / 0.05)) for t in ts]
    print(" t     |G| exact   |G| melonic   ratio")
    for i, t in enumerate(ts):
        ge = abs(g_ed[i])
        gm = abs(g_mel[idx[i]])
        print(f"{t:5.2f}   {ge:.6f}    {gm:.6f}    {gm/ge:.4f}")


if __name__ == "__main__":
    main()
