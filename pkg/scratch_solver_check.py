"""Scratch: melonic solver sanity — free-limit exactness and rate magnitude."""

import time

import numpy as np

from qplife.bands import epsilon_cosine
from qplife.melonic import SolverConfig, solve


def main():
    # 1. Delta = 0 exactness (rotating frame), t <= 100
    cfg = SolverConfig(n_sites=16, dt=0.1, t_max=100.0, delta=0.0, h=0.5)
    res = solve(cfg)
    # qp-basis free evolution: diag(e^{+i w t}, e^{-i w t})/2
    w = res.omegas  # (N,2), (-w, +w)
    expected = np.zeros_like(res.g_qp)
    phases = np.exp(-1j * w[None, :, :] * res.times[:, None, None])  # e^{-i w_a t}
    expected[:, :, 0, 0] = 0.5 * phases[:, :, 0]
    expected[:, :, 1, 1] = 0.5 * phases[:, :, 1]
    print("Delta=0 max dev (rotating):", np.max(np.abs(res.g_qp - expected)))

    cfg_lab = SolverConfig(n_sites=16, dt=0.1, t_max=100.0, delta=0.0, h=0.5, frame="lab")
    res_lab = solve(cfg_lab)
    print("Delta=0 max dev (lab):     ", np.max(np.abs(res_lab.g_qp - expected)))

    # 2. rate magnitude at Delta = 0.3, h = 0, k = 0
    t0 = time.time()
    cfg = SolverConfig(n_sites=200, dt=0.1, t_max=40.0, delta=0.3, h=0.0)
    res = solve(cfg)
    dt_run = time.time() - t0
    g = res.single_band_g()  # (T+1, L)
    gk0 = np.abs(g[:, 0]) / np.abs(g[0, 0])
    t = res.times
    # fit log decay over |G|/G0 in [0.2, 0.02]
    lo = np.argmax(gk0 < 0.2)
    hi = np.argmax(gk0 < 0.02)
    coef = np.polyfit(t[lo:hi], np.log(gk0[lo:hi]), 1)
    rate = -coef[0]
    print(f"run time {dt_run:.1f}s; rate(D=0.3, k=0) = {rate:.4f}  "
          f"(expect ~0.48 if figure-unit convention; ~0.03 if nn-coupling)")
    # self-energy early decay
    sig = res.single_band_sigma_abs()[:, 0]
    for tt in (2.0, 3.0, 4.0):
        i = int(round(tt / 0.1))
        i2 = int(round(1.25 * tt / 0.1))
        slope = (np.log(sig[i2]) - np.log(sig[i])) / (np.log(t[i2]) - np.log(t[i]))
        print(f"  local log-slope of |Sigma| at t={tt}: {slope:.3f}")
    # check free-vs-dressed norm behavior
    print("  |G(0)| =", np.abs(g[0, 0]), " max block norm ok")


if __name__ == "__main__":
    main()
