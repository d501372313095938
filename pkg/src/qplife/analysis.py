"""Rate extraction, scaling-law comparison, and collapse tables.

Shared by every solver: decay rates are taken from a weighted linear
regression of log|G| over a window defined by fractions of the initial
value; interaction-strength sweeps are compared against the two candidate
laws

    quadratic:     rate = c * Delta^2
    log-enhanced:  rate = a * Delta^2 * log(b / Delta^2)

with residuals measured in log(rate) so every decade of the sweep counts
equally.  The (a, b) pair is degenerate along a*log(b) = const for narrow
sweeps; the fit is therefore seeded by a linear solve in the
(Delta^2 log Delta^-2, Delta^2) basis and polished in (a, log b).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import least_squares


class InsufficientDecayError(ValueError):
    """The series never decays into the requested fit window."""


@dataclass(frozen=True)
class RateFit:
    """An extracted decay rate with its fit window and quality numbers."""

    rate: float
    window: tuple
    r_squared: float
    rate_error: float  # half-range over +-25% window shifts
    intercept: float
    n_points: int


def _weighted_line(t, y, w):
    sw = np.sum(w)
    tm = np.sum(w * t) / sw
    ym = np.sum(w * y) / sw
    cov = np.sum(w * (t - tm) * (y - ym))
    var = np.sum(w * (t - tm) ** 2)
    slope = cov / var
    inter = ym - slope * tm
    resid = y - (inter + slope * t)
    ss_res = np.sum(w * resid**2)
    ss_tot = np.sum(w * (y - ym) ** 2)
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return slope, inter, r2


def _fit_on_window(t, logy, w, i0, i1):
    sl, inter, r2 = _weighted_line(t[i0 : i1 + 1], logy[i0 : i1 + 1], w[i0 : i1 + 1])
    return -sl, inter, r2


def extract_rate(
    times: np.ndarray,
    series: np.ndarray,
    stderr: np.ndarray | None = None,
    window: tuple = (0.2, 0.02),
) -> RateFit:
    """Decay rate of |series| from a weighted log-linear fit.

    The window is (hi, lo) as fractions of the initial value: the fit runs
    from the first crossing below hi*|s(0)| to the first crossing below
    lo*|s(0)|.  With per-point standard errors given, points are weighted
    by 1/sigma_log^2 with sigma_log = stderr/|s|.  The returned error bar
    is the half-range of rates over windows shifted by +-25% of the window
    length (invariance under overall rescaling of the series is exact).
    """
    times = np.asarray(times, dtype=float)
    s = np.abs(np.asarray(series))
    if len(times) != len(s):
        raise ValueError("times and series must have equal length")
    hi, lo = window
    if not 0 < lo < hi <= 1.0:
        raise ValueError(f"window fractions must satisfy 0 < lo < hi <= 1, got {window}")
    s0 = s[0]
    if s0 <= 0:
        raise ValueError("series must start positive")
    rel = s / s0
    below_hi = np.nonzero(rel < hi)[0]
    below_lo = np.nonzero(rel < lo)[0]
    if len(below_lo) == 0 or len(below_hi) == 0:
        raise InsufficientDecayError(
            f"series never decays below {lo} of its initial value within the data"
        )
    i0 = int(below_hi[0])
    i1 = int(below_lo[0])
    if i1 - i0 < 3:
        raise InsufficientDecayError("fewer than 4 samples inside the fit window")
    good = s > 0
    logy = np.where(good, np.log(np.where(good, s, 1.0)), 0.0)
    if stderr is not None:
        stderr = np.asarray(stderr, dtype=float)
        sig = np.where(good, stderr / np.maximum(s, 1e-300), np.inf)
        w = 1.0 / np.maximum(sig, 1e-12) ** 2
    else:
        w = np.ones_like(s)
    w = np.where(good, w, 0.0)
    rate, inter, r2 = _fit_on_window(times, logy, w, i0, i1)
    # window-shift sensitivity
    span = i1 - i0
    shift = max(1, int(round(0.25 * span)))
    rates = [rate]
    for ds in (-shift, +shift):
        j0 = max(0, i0 + ds)
        j1 = min(len(s) - 1, i1 + ds)
        if j1 - j0 >= 3:
            r_s, _, _ = _fit_on_window(times, logy, w, j0, j1)
            rates.append(r_s)
    err = 0.5 * (max(rates) - min(rates))
    return RateFit(
        rate=float(rate),
        window=(float(times[i0]), float(times[i1])),
        r_squared=float(r2),
        rate_error=float(err),
        intercept=float(inter),
        n_points=i1 - i0 + 1,
    )


@dataclass(frozen=True)
class ScalingLaw:
    """One fitted rate-vs-coupling model with its log-space residual."""

    model: str  # quadratic | log-enhanced
    params: dict
    ss_residual: float
    identifiable: bool = True

    def evaluate(self, deltas):
        deltas = np.asarray(deltas, dtype=float)
        if self.model == "quadratic":
            return self.params["c"] * deltas**2
        a, b = self.params["a"], self.params["b"]
        return a * deltas**2 * np.log(b / deltas**2)


def _log_enhanced_residuals(p, deltas, logr):
    a, logb = p
    arg = logb + np.log(1.0 / deltas**2)
    model = a * deltas**2 * arg
    bad = (model <= 0) | (a <= 0)
    safe = np.where(bad, 1.0, model)
    return np.where(bad, 1e3 + np.abs(p).sum(), logr - np.log(safe))


def fit_scaling(deltas: Sequence[float], rates: Sequence[float]):
    """Fit both scaling models; returns (quadratic, log_enhanced, preferred).

    Requires >= 5 couplings spanning at least a factor of 4.  The
    log-enhanced law is flagged unidentifiable when the fitted b does not
    keep b*Delta^-2 > 1 across the data (the log would change sign inside
    the range).
    """
    deltas = np.asarray(list(deltas), dtype=float)
    rates = np.asarray(list(rates), dtype=float)
    order = np.argsort(deltas)
    deltas, rates = deltas[order], rates[order]
    if len(deltas) < 5:
        raise ValueError("need at least 5 coupling values")
    if deltas.max() / deltas.min() < 4.0:
        raise ValueError("couplings must span at least a factor of 4")
    if np.any(rates <= 0):
        raise ValueError("rates must be positive")
    logr = np.log(rates)
    # quadratic: exact log-space solution
    c = float(np.exp(np.mean(logr - 2.0 * np.log(deltas))))
    ss_q = float(np.sum((logr - np.log(c * deltas**2)) ** 2))
    quad = ScalingLaw(model="quadratic", params={"c": c}, ss_residual=ss_q)
    # log-enhanced: linear seed, then log-residual polish
    x1 = deltas**2 * np.log(1.0 / deltas**2)
    x2 = deltas**2
    lin = np.linalg.lstsq(np.column_stack([x1, x2]), rates, rcond=None)[0]
    a0 = max(float(lin[0]), 1e-6)
    logb0 = float(lin[1]) / a0
    # keep the seed inside the positive-model region
    logb_min = float(np.max(2.0 * np.log(deltas))) + 1e-6
    sol = least_squares(
        _log_enhanced_residuals, [a0, max(logb0, logb_min + 0.5)], args=(deltas, logr)
    )
    a, logb = sol.x
    b = float(np.exp(logb))
    ss_l = float(np.sum(sol.fun**2))
    identifiable = bool(b / deltas.max() ** 2 > 1.0) and sol.success
    log_law = ScalingLaw(
        model="log-enhanced",
        params={"a": float(a), "b": b},
        ss_residual=ss_l,
        identifiable=identifiable,
    )
    preferred = "log-enhanced" if ss_l < ss_q else "quadratic"
    return quad, log_law, preferred


def collapse_table(
    curves: Sequence[tuple],
    taus: Sequence[float],
    normalize: str = "initial",
    value_range: tuple = (0.05, 0.8),
):
    """Rescale decay curves to (t/tau, value) and score their collapse.

    `curves` is a sequence of (delta, times, values); `taus` the rescaling
    time per curve.  normalize: "initial" divides by the first value,
    "at-tau" by the value interpolated at t = tau, "none" leaves values
    as given.  Returns (rows, metric): rows of (delta, t/tau, value), and
    the collapse metric = max over curve pairs of the sup-norm distance on
    the overlapping rescaled-time range, restricted to points where either
    curve lies inside value_range.
    """
    if len(curves) != len(taus):
        raise ValueError("need one tau per curve")
    if normalize not in ("initial", "at-tau", "none"):
        raise ValueError(f"unknown normalize mode {normalize!r}")
    rescaled = []
    rows = []
    for (delta, times, values), tau in zip(curves, taus):
        times = np.asarray(times, dtype=float)
        vals = np.abs(np.asarray(values)).astype(float)
        if normalize == "initial":
            vals = vals / vals[0]
        elif normalize == "at-tau":
            ref = np.interp(tau, times, vals)
            if ref <= 0:
                raise ValueError("cannot normalize at tau: nonpositive reference value")
            vals = vals / ref
        s = times / tau
        rescaled.append((s, vals))
        for si, vi in zip(s, vals):
            rows.append((float(delta), float(si), float(vi)))
    lo, hi = value_range
    metric = 0.0
    for i in range(len(rescaled)):
        for j in range(i + 1, len(rescaled)):
            s1, v1 = rescaled[i]
            s2, v2 = rescaled[j]
            left = max(s1[0], s2[0])
            right = min(s1[-1], s2[-1])
            if right <= left:
                continue
            grid = np.linspace(left, right, 512)
            a = np.interp(grid, s1, v1)
            b = np.interp(grid, s2, v2)
            mask = ((a >= lo) & (a <= hi)) | ((b >= lo) & (b <= hi))
            if not np.any(mask):
                continue
            metric = max(metric, float(np.max(np.abs(a - b)[mask])))
    return rows, metric


def local_log_slope(times: np.ndarray, values: np.ndarray, t_eval: float, span: float = 1.25):
    """d(log values)/d(log t) around t_eval, from a least-squares fit over
    the points with t in [t_eval/span, t_eval*span]."""
    times = np.asarray(times, dtype=float)
    vals = np.abs(np.asarray(values))
    mask = (times >= t_eval / span) & (times <= t_eval * span) & (vals > 0) & (times > 0)
    if np.count_nonzero(mask) < 3:
        raise ValueError(f"not enough samples around t = {t_eval}")
    return float(np.polyfit(np.log(times[mask]), np.log(vals[mask]), 1)[0])
