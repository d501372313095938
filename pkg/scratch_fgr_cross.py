"""Scratch: cross-validate the frozen-kernel melonic decay against the
independent golden-rule integral at k = pi/2 (finite limit, no log)."""

import numpy as np

from qplife.golden_rule import fgr_rate_curve, classify_divergences
from qplife.grids import MomentumGrid
from qplife.bands import Dispersion
from qplife.melonic import SolverConfig, solve


def main():
    grid = MomentumGrid(2048)
    # nn-coupling convention: vertex Delta*(cos q - cos p).
    # If the solver coupling D is the zz coupling, the matching vertex
    # coupling is Delta = 4 D.
    d_zz = 0.15
    for name, d_vertex in (("Delta = 4*D (zz->nn map)", 4 * d_zz), ("Delta = D", d_zz)):
        rates = fgr_rate_curve(np.pi / 2, d_vertex, [0.05, 0.02, 0.01, 0.005], grid)
        print(f"FGR k=pi/2 {name}: rate(eta) = {rates}")

    # frozen melonic at the same physics: rate of |G_{k=pi/2}|
    cfg = SolverConfig(
        n_sites=256, dt=0.1, t_max=120.0, delta=d_zz, h=0.0, kernel_mode="fgr-frozen"
    )
    res = solve(cfg)
    g = res.single_band_g()
    ks = res.single_band_momenta()
    ik = int(np.argmin(np.abs(ks - np.pi / 2)))
    print("single-band k used:", ks[ik])
    gk = np.abs(g[:, ik]) / np.abs(g[0, ik])
    t = res.times
    lo = np.argmax(gk < 0.2)
    hi = np.argmax(gk < 0.02)
    print("window:", t[lo], t[hi])
    coef = np.polyfit(t[lo:hi], np.log(gk[lo:hi]), 1)
    print(f"frozen melonic rate at k=pi/2, D={d_zz}: {-coef[0]:.6e}")

    rep = classify_divergences([Dispersion.cosine()], 0.3)
    for pt in rep.points:
        print(f"  point ({pt.q:.8f}, {pt.p:.8f}) {pt.classification} sig={pt.hessian_signature}")
    print("  expected:", (0.0, np.pi - 0.6), (np.pi - 0.6, 0.0), "and (0,0) nullified")


if __name__ == "__main__":
    main()
