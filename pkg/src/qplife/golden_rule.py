"""Leading-order (golden-rule) decay-rate integrals with finite broadening.

The on-shell rate for a particle at momentum k scattering off a thermal
background through the density-density vertex v(q,p) = Delta*(cos q - cos p)
is evaluated as a Brillouin-zone double sum with the i0+ prescription
replaced by a Lorentzian broadening eta:

    rate(eta) = -2 Delta^2 Im (1/L^2) sum_{q,p}
                (cos q - cos p)^2 W(q,p) / (phi_k(q,p) + i eta),

    phi_k(q,p) = eps(k) + eps(k+q+p) - eps(k+q) - eps(k+p).

W is the occupation weight: for fermions
W = n3 (1 - n1 - n2) + n1 n2 with Fermi factors n_i at momenta
(k+q, k+p, k+q+p); at infinite temperature every n = 1/2 and W = 1/4.
For bosons W = n3 (1 + n1 + n2) - n1 n2 with Bose factors, which requires
a chemical potential below the band bottom.

Because phi has points where the gradient vanishes on shell, the eta -> 0
limit diverges logarithmically for generic k; rate(eta) is studied as a
family in eta and fitted to c0 + c1 log(1/eta).  The stationary-point
classifier locates those points for arbitrary (multi-band) dispersions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bands import Dispersion
from .grids import MomentumGrid


@dataclass(frozen=True)
class FgrRequest:
    """One broadened golden-rule evaluation."""

    k: float
    delta: float
    eta: float
    grid: MomentumGrid
    statistics: str = "fermion"  # fermion | boson
    beta: float = 0.0  # 0 = infinite temperature
    mu: float = 0.0
    dispersion: Dispersion = field(default_factory=Dispersion.cosine)

    def __post_init__(self):
        if self.eta <= 0:
            raise ValueError(f"broadening eta must be positive, got {self.eta}")
        if self.grid.n_sites < 64:
            raise ValueError("grid too coarse: L >= 64 required")
        if self.statistics not in ("fermion", "boson"):
            raise ValueError(f"unknown statistics {self.statistics!r}")
        if self.statistics == "boson":
            if not 0 < self.beta < np.inf:
                raise ValueError("boson rates need a finite positive beta")
            eps_min = float(np.min(self.dispersion.eps(self.grid.points)))
            if self.beta * (eps_min - self.mu) <= 0:
                raise ValueError(
                    "divergent Bose occupations: require mu below the band bottom"
                )


def _occupation(eps, req: FgrRequest):
    x = req.beta * (eps - req.mu)
    if req.statistics == "fermion":
        if req.beta == np.inf:
            return np.where(eps < req.mu, 1.0, np.where(eps > req.mu, 0.0, 0.5))
        return 1.0 / (np.exp(x) + 1.0)
    return 1.0 / (np.expm1(x))


def _weight(req: FgrRequest, e1, e2, e3):
    """Occupation combination at the three outgoing momenta."""
    if req.statistics == "fermion" and req.beta == 0:
        return 0.25 * np.ones(np.broadcast_shapes(np.shape(e1), np.shape(e2)))
    n1 = _occupation(e1, req)
    n2 = _occupation(e2, req)
    n3 = _occupation(e3, req)
    if req.statistics == "fermion":
        return n3 * (1.0 - n1 - n2) + n1 * n2
    return n3 * (1.0 + n1 + n2) - n1 * n2


def _integrand_tables(req: FgrRequest):
    qs = req.grid.points
    q = qs[:, None]
    p = qs[None, :]
    eps = req.dispersion.eps
    e1 = eps(req.k + q)
    e2 = eps(req.k + p)
    e3 = eps(req.k + q + p)
    phi = eps(req.k) + e3 - e1 - e2
    num = (np.cos(q) - np.cos(p)) ** 2 * _weight(req, e1, e2, e3)
    return phi, num


def fgr_rate(req: FgrRequest) -> float:
    """Broadened golden-rule rate; nonnegative, exactly Delta^2-scaled."""
    phi, num = _integrand_tables(req)
    lor = req.eta / (phi**2 + req.eta**2)
    return float(2.0 * req.delta**2 * np.mean(num * lor))


def fgr_rate_curve(
    k: float,
    delta: float,
    etas: Sequence[float],
    grid: MomentumGrid,
    **kwargs,
) -> np.ndarray:
    """rate(eta) for several broadenings, reusing the integrand tables."""
    etas = np.asarray(list(etas), dtype=float)
    if np.any(etas <= 0):
        raise ValueError("all broadenings must be positive")
    req = FgrRequest(k=k, delta=delta, eta=float(etas[0]), grid=grid, **kwargs)
    phi, num = _integrand_tables(req)
    phi2 = phi**2
    out = np.empty(len(etas))
    for i, eta in enumerate(etas):
        out[i] = 2.0 * delta**2 * np.mean(num * (eta / (phi2 + eta**2)))
    return out


@dataclass(frozen=True)
class LogSlopeFit:
    """Least-squares fit of rate(eta) = c0 + c1 * log(1/eta)."""

    c0: float
    c1: float
    r_squared: float


def log_slope(
    k: float,
    delta: float,
    etas: Sequence[float],
    grid: MomentumGrid,
    **kwargs,
) -> LogSlopeFit:
    """Quantify the eta -> 0 divergence of the broadened rate."""
    etas = np.asarray(list(etas), dtype=float)
    if len(etas) < 4:
        raise ValueError("need at least 4 broadening values")
    rates = fgr_rate_curve(k, delta, etas, grid, **kwargs)
    x = np.log(1.0 / etas)
    design = np.column_stack([np.ones_like(x), x])
    coef, _, _, _ = np.linalg.lstsq(design, rates, rcond=None)
    resid = rates - design @ coef
    ss_tot = float(np.sum((rates - rates.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return LogSlopeFit(c0=float(coef[0]), c1=float(coef[1]), r_squared=r2)


@dataclass(frozen=True)
class ScatteringChannel:
    """One allowed scattering channel (b, b1, b2, b3) of a multi-band model.

    The incoming particle in band b scatters into particles in bands b2, b3
    and a hole in band b1.  vertex "pauli" is the antisymmetric single-band
    form (cos q - cos p); "constant" is a structureless (Hubbard-like)
    interband coupling.
    """

    b: int
    b1: int
    b2: int
    b3: int
    vertex: str = "pauli"

    def __post_init__(self):
        if self.vertex not in ("pauli", "constant"):
            raise ValueError(f"unknown vertex {self.vertex!r}")


@dataclass(frozen=True)
class StationaryPoint:
    """One velocity-matched on-shell point of phi, with diagnostics."""

    q: float
    p: float
    channel: ScatteringChannel
    residual_phi: float
    residual_dq: float
    residual_dp: float
    hessian_signature: tuple
    weight: float
    classification: str  # log-divergent | nullified | unresolved


@dataclass(frozen=True)
class DivergenceReport:
    points: tuple
    unresolved: tuple
    tolerance: float

    @property
    def divergent(self) -> tuple:
        return tuple(pt for pt in self.points if pt.classification == "log-divergent")

    @property
    def nullified(self) -> tuple:
        return tuple(pt for pt in self.points if pt.classification == "nullified")


def _channel_phi(bands, ch: ScatteringChannel, k: float):
    e_b, e1, e2, e3 = bands[ch.b], bands[ch.b1], bands[ch.b2], bands[ch.b3]

    def phi(q, p):
        return e_b.eps(k) + e1.eps(k + q + p) - e2.eps(k + q) - e3.eps(k + p)

    def grad(q, p):
        dq = e1.deps(k + q + p) - e2.deps(k + q)
        dp = e1.deps(k + q + p) - e3.deps(k + p)
        return dq, dp

    def hess(q, p):
        s = e1.d2eps(k + q + p)
        return np.array(
            [[s - e2.d2eps(k + q), s], [s, s - e3.d2eps(k + p)]]
        )

    return phi, grad, hess


def _channel_weight(ch: ScatteringChannel, q, p):
    if ch.vertex == "pauli":
        return (np.cos(q) - np.cos(p)) ** 2 * 0.25
    return 0.25 * np.ones(np.broadcast_shapes(np.shape(q), np.shape(p)))


def classify_divergences(
    bands: Sequence[Dispersion],
    k: float,
    channels: Sequence[ScatteringChannel] | None = None,
    scan_points: int = 256,
    tolerance: float = 1e-8,
    max_newton: int = 60,
) -> DivergenceReport:
    """Locate and classify the stationary on-shell points of every channel.

    Coarse scan_points x scan_points residual map, then damped Newton on the
    two velocity-matching conditions; a converged point is kept only when
    all three residuals (|phi| and both gradient components) are below the
    tolerance.  Points where the vertex/occupation numerator vanishes are
    flagged "nullified" (no divergence despite the vanishing denominator).
    """
    if channels is None:
        channels = [ScatteringChannel(0, 0, 0, 0, "pauli")]

    def canonical(x: float) -> float:
        x = x % (2.0 * np.pi)
        return 0.0 if x > 2.0 * np.pi - 1e-7 else x

    grid = 2.0 * np.pi * np.arange(scan_points) / scan_points
    qg = grid[:, None]
    pg = grid[None, :]
    accepted: list[StationaryPoint] = []
    unresolved: list[StationaryPoint] = []
    for ch in channels:
        phi_f, grad_f, hess_f = _channel_phi(bands, ch, k)
        gq, gp = grad_f(qg, pg)
        resid = np.abs(phi_f(qg, pg)) + np.abs(gq) + np.abs(gp)
        # candidate cells: local minima of the combined residual
        rolled = np.stack(
            [np.roll(np.roll(resid, dq, 0), dp, 1) for dq in (-1, 0, 1) for dp in (-1, 0, 1)]
        )
        is_min = resid <= rolled.min(axis=0) + 1e-15
        # loose cut: Newton + the residual filters decide what survives
        cand = np.argwhere(is_min & (resid < 0.5))
        w_max = float(np.max(_channel_weight(ch, qg, pg)))
        found: list[tuple[float, float]] = []
        for iq, ip in cand:
            q, p = grid[iq], grid[ip]
            ok = False
            for _ in range(max_newton):
                dq, dp = grad_f(q, p)
                if abs(dq) < tolerance and abs(dp) < tolerance:
                    ok = True
                    break
                hess = hess_f(q, p)
                try:
                    step = np.linalg.lstsq(hess, -np.array([dq, dp]), rcond=None)[0]
                except np.linalg.LinAlgError:
                    break
                norm = float(np.max(np.abs(step)))
                if norm > 0.5:  # damping: trust region of half a radian
                    step *= 0.5 / norm
                q = (q + step[0]) % (2.0 * np.pi)
                p = (p + step[1]) % (2.0 * np.pi)
            q, p = canonical(q), canonical(p)
            r_phi = abs(float(phi_f(q, p)))
            dq, dp = grad_f(q, p)
            if not ok:
                pt = StationaryPoint(
                    q=float(q),
                    p=float(p),
                    channel=ch,
                    residual_phi=r_phi,
                    residual_dq=abs(float(dq)),
                    residual_dp=abs(float(dp)),
                    hessian_signature=(),
                    weight=float(_channel_weight(ch, q, p)),
                    classification="unresolved",
                )
                if not any(
                    abs(u.q - pt.q) < 1e-4 and abs(u.p - pt.p) < 1e-4 for u in unresolved
                ):
                    unresolved.append(pt)
                continue
            if r_phi >= tolerance:
                continue  # genuine critical point of phi, but off shell
            if any(
                abs((q - q0 + np.pi) % (2 * np.pi) - np.pi) < 1e-6
                and abs((p - p0 + np.pi) % (2 * np.pi) - np.pi) < 1e-6
                for q0, p0 in found
            ):
                continue
            found.append((float(q), float(p)))
            eigs = np.linalg.eigvalsh(hess_f(q, p))
            signature = tuple(int(np.sign(e)) if abs(e) > 1e-10 else 0 for e in eigs)
            weight = float(_channel_weight(ch, q, p))
            cls = "nullified" if weight < 1e-10 * max(w_max, 1e-300) else "log-divergent"
            accepted.append(
                StationaryPoint(
                    q=float(q),
                    p=float(p),
                    channel=ch,
                    residual_phi=r_phi,
                    residual_dq=abs(float(dq)),
                    residual_dp=abs(float(dp)),
                    hessian_signature=signature,
                    weight=weight,
                    classification=cls,
                )
            )
    return DivergenceReport(points=tuple(accepted), unresolved=tuple(unresolved), tolerance=tolerance)
