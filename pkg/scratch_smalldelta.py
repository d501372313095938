"""Scratch: fit (a,b) over a small-Delta melonic sweep; compare to the
(6.7, 0.2)-type constants to confirm the fit-range degeneracy story."""

import numpy as np
from scipy.optimize import least_squares

from qplife.melonic import SolverConfig, solve


def extract(times, series):
    s = np.abs(series) / np.abs(series[0])
    lo = np.argmax(s < 0.2)
    hi = np.argmax(s < 0.02)
    if hi == 0:
        return np.nan
    coef = np.polyfit(times[lo:hi], np.log(s[lo:hi]), 1)
    return -coef[0]


def fit_ab_log(deltas, rates):
    def resid(p):
        a, logb = p
        model = a * deltas**2 * (logb + np.log(1.0 / deltas**2))
        bad = model <= 0
        out = np.where(bad, 1e3, np.log(rates) - np.log(np.where(bad, 1.0, model)))
        return out

    x1 = deltas**2 * np.log(1.0 / deltas**2)
    design = np.column_stack([x1, deltas**2])
    lin = np.linalg.lstsq(design, rates, rcond=None)[0]
    p0 = [max(lin[0], 1e-3), lin[1] / max(lin[0], 1e-3)]
    sol = least_squares(resid, p0)
    a, logb = sol.x
    return a, np.exp(logb / 1.0)


def main():
    deltas = np.array([0.05, 0.075, 0.1, 0.15, 0.2])
    rates = []
    for d in deltas:
        est = 3.5 * d**2 * np.log(1.3 / d**2)
        tmax = 4.5 / est + 8.0
        cfg = SolverConfig(n_sites=200, dt=0.1, t_max=tmax, delta=d, h=0.0)
        res = solve(cfg)
        r = extract(res.times, res.single_band_g()[:, 0])
        rates.append(r)
        fitval = 6.7 * d**2 * np.log(0.2 / d**2)
        print(f"D={d}: rate = {r:.5f}   6.7*D^2*log(0.2/D^2) = {fitval:.5f}  ratio {r/fitval:.3f}")
    rates = np.array(rates)
    a, b = fit_ab_log(deltas, rates)
    print(f"log-residual fit over D in [0.05, 0.2]: a = {a:.2f}, b = {b:.3f}")


if __name__ == "__main__":
    main()
