"""Scratch: coupling-dependence of frozen-melonic vs FGR, and the
self-consistent k=0 rate after the quadrature fix."""

import numpy as np

from qplife.golden_rule import fgr_rate_curve
from qplife.grids import MomentumGrid
from qplife.melonic import SolverConfig, solve


def extract(times, series):
    s = np.abs(series) / np.abs(series[0])
    lo = np.argmax(s < 0.2)
    hi = np.argmax(s < 0.02)
    if hi == 0:
        return np.nan
    coef = np.polyfit(times[lo:hi], np.log(s[lo:hi]), 1)
    return -coef[0]


def main():
    grid = MomentumGrid(2048)
    for d_zz, tmax in ((0.15, 120.0), (0.075, 450.0)):
        fgr = fgr_rate_curve(np.pi / 2, 4 * d_zz, [0.02, 0.01, 0.005, 0.0025], grid)
        cfg = SolverConfig(n_sites=256, dt=0.1, t_max=tmax, delta=d_zz, h=0.0,
                           kernel_mode="fgr-frozen")
        res = solve(cfg)
        g = res.single_band_g()
        ik = res.config.n_sites // 4  # k = pi/2
        rate = extract(res.times, g[:, ik])
        print(f"D={d_zz}: frozen melonic k=pi/2 rate = {rate:.5f}, "
              f"FGR(eta->0) ~ {fgr[-1]:.5f}, ratio = {rate/fgr[-1]:.3f}")

    # self-consistent k=0 after fix
    cfg = SolverConfig(n_sites=200, dt=0.1, t_max=60.0, delta=0.3, h=0.0)
    res = solve(cfg)
    g = res.single_band_g()
    rate = extract(res.times, g[:, 0])
    print(f"self-consistent D=0.3 k=0 rate = {rate:.4f} "
          f"(fig-fit value a*D^2*log(b/D^2) = {6.7*0.09*np.log(0.2/0.09):.4f})")
    sig = res.single_band_sigma_abs()[:, 0]
    t = res.times
    for tt in (2.0, 3.0, 4.0, 8.0):
        i = int(round(tt / 0.1 / 1.12))
        i2 = int(round(1.25 * tt / 0.1))
        slope = (np.log(sig[i2]) - np.log(sig[i])) / (np.log(t[i2]) - np.log(t[i]))
        print(f"  |Sigma| local log-slope near t={tt}: {slope:.3f}")


if __name__ == "__main__":
    main()
