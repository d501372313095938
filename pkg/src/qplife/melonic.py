"""Self-consistent memory-matrix solver for the staggered-field chain.

Integrates the Volterra equation of motion

    dG_k/dt + i eps_k G_k + int_0^t dtau M_k(tau) G_k(t - tau) = 0,
    G_k(0) = I/2,

per unit-cell momentum k, with the 2x2 memory kernel M_k built from the
propagators themselves (mode "self-consistent") or from the free ones
(mode "fgr-frozen"); see :mod:`qplife.memory_kernel`.

All blocks are stored in the band eigenbasis where eps_k is diagonal with
entries (-omega_k, +omega_k).  The free oscillation is removed exactly by
an integrating factor: writing Gt = e^{+i eps t} G, the drift term drops and

    Gt(t+dt) = Gt(t) - dt e^{+i eps t} * quadrature( M * G, [0, t] ).

With the memory term switched off this reproduces e^{-i eps t}/2 to
round-off at any dt, which pins the treatment of the drift term (a naive
explicit Euler step on i eps G would be unconditionally unstable for the
purely oscillatory part).  The quadrature over the memory integral is a
left rectangle rule by default, with a trapezoid variant for convergence
studies.  frame="lab" stores the undressed propagator and applies the
per-step phase e^{-i eps dt} directly; the two frames agree to round-off.

The memory convolution is the hot loop; a compiled extension is used when
available and a NumPy fallback otherwise (see ``CONV_BACKEND``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bands import free_propagator, quasiparticle_frame, unit_cell_reduce
from .memory_kernel import kernel_row_fft

try:
    from . import _volterra as _conv_default

    HAVE_COMPILED = True
except ImportError:  # extension not built; pure NumPy route
    from . import _volterra_py as _conv_default

    HAVE_COMPILED = False

from . import _volterra_py as _conv_numpy

CONV_BACKEND = _conv_default.BACKEND


class NumericalFailure(RuntimeError):
    """A run violated a solver invariant (propagator norm blow-up)."""


@dataclass(frozen=True)
class SolverConfig:
    """Parameters of one memory-matrix run.

    n_sites is the number of lattice sites L = 2N (two-site unit cells);
    delta is the coupling of the zz-type interaction
    delta * sum_r (1 - 2 n_r)(1 - 2 n_{r+1}) and h the staggered field.
    """

    n_sites: int
    dt: float
    t_max: float
    delta: float
    h: float = 0.0
    kernel_mode: str = "self-consistent"  # self-consistent | fgr-frozen
    frame: str = "rotating"  # rotating | lab
    integrator: str = "rectangle"  # rectangle | trapezoid
    norm_tolerance: float = 0.05
    history_cutoff: bool = False
    conv_backend: str = "auto"  # auto | compiled | numpy

    def __post_init__(self):
        if self.n_sites < 8 or self.n_sites % 4 != 0:
            raise ValueError(f"n_sites must be a multiple of 4 and >= 8, got {self.n_sites}")
        if not 0 < self.dt <= 0.1:
            raise ValueError(f"dt must be in (0, 0.1], got {self.dt}")
        if self.t_max < self.dt:
            raise ValueError("t_max must cover at least one step")
        if self.delta < 0:
            raise ValueError("delta must be >= 0")
        if self.kernel_mode not in ("self-consistent", "fgr-frozen"):
            raise ValueError(f"unknown kernel_mode {self.kernel_mode!r}")
        if self.frame not in ("rotating", "lab"):
            raise ValueError(f"unknown frame {self.frame!r}")
        if self.integrator not in ("rectangle", "trapezoid"):
            raise ValueError(f"unknown integrator {self.integrator!r}")
        if self.conv_backend not in ("auto", "compiled", "numpy"):
            raise ValueError(f"unknown conv_backend {self.conv_backend!r}")

    @property
    def n_cells(self) -> int:
        return self.n_sites // 2

    @property
    def n_steps(self) -> int:
        return max(1, int(math.ceil(self.t_max / self.dt - 1e-9)))

    def rate_run_t_max(self) -> float:
        """Suggested horizon 5/(delta^2 log delta^-2) for rate extraction."""
        if not 0 < self.delta < 1:
            raise ValueError("rate-run horizon defined for 0 < delta < 1")
        return 5.0 / (self.delta**2 * math.log(1.0 / self.delta**2))


@dataclass
class SolverResult:
    """Histories of one run: propagators, kernel, and derived observables.

    Blocks are in the band eigenbasis; row m is time m*dt.  The kernel rows
    double as the self-energy, |Sigma_k(t)| = |M_k(t)|.
    """

    config: SolverConfig
    times: np.ndarray
    uc_momenta: np.ndarray
    omegas: np.ndarray  # (N, 2) eigenvalues, ascending (-omega, +omega)
    basis: np.ndarray  # (N, 2, 2) unitaries, eps = U diag(omega) U^dagger
    g_qp: np.ndarray  # (T+1, N, 2, 2)
    m_qp: np.ndarray  # (T+1, N, 2, 2)

    def site_blocks(self, rows=slice(None)) -> np.ndarray:
        u = self.basis
        udag = np.conj(np.swapaxes(u, -1, -2))
        return u @ self.g_qp[rows] @ udag

    def kernel_site_blocks(self, rows=slice(None)) -> np.ndarray:
        u = self.basis
        udag = np.conj(np.swapaxes(u, -1, -2))
        return u @ self.m_qp[rows] @ udag

    def single_band_momenta(self) -> np.ndarray:
        L = self.config.n_sites
        return 2.0 * np.pi * np.arange(L) / L

    def _reduce(self, blocks: np.ndarray) -> np.ndarray:
        """Map unit-cell blocks to the L-momentum single-band scalar."""
        n = self.config.n_cells
        ks = self.single_band_momenta()
        idx = np.arange(self.config.n_sites) % n
        return unit_cell_reduce(blocks[:, idx], ks)

    def single_band_g(self) -> np.ndarray:
        """Reduced scalar G_k(t), shape (T+1, L); meaningful at h = 0."""
        return self._reduce(self.site_blocks())

    def single_band_sigma_abs(self) -> np.ndarray:
        """|Sigma_k(t)| = |M_k(t)| after unit-cell reduction, shape (T+1, L)."""
        return np.abs(self._reduce(self.kernel_site_blocks()))

    def qp_topleft_g(self) -> np.ndarray:
        """Quasiparticle-basis (-omega branch) propagator, shape (T+1, N)."""
        return self.g_qp[:, :, 0, 0]

    def qp_topleft_sigma_abs(self) -> np.ndarray:
        return np.abs(self.m_qp[:, :, 0, 0])


class MelonicSolver:
    """Step-by-step integrator; most callers just use :func:`solve`."""

    def __init__(self, config: SolverConfig):
        self.config = config
        n = config.n_cells
        self.uc_momenta = 2.0 * np.pi * np.arange(n) / n
        self.omegas, self.basis = quasiparticle_frame(self.uc_momenta, config.h)
        self._udag = np.conj(np.swapaxes(self.basis, -1, -2))
        steps = config.n_steps
        self.times = config.dt * np.arange(steps + 1)
        self.g_qp = np.zeros((steps + 1, n, 2, 2), dtype=np.complex128)
        self.m_qp = np.zeros((steps + 1, n, 2, 2), dtype=np.complex128)
        self.g_qp[0, :, 0, 0] = 0.5
        self.g_qp[0, :, 1, 1] = 0.5
        self._g_tilde = self.g_qp[0].copy()
        self._kernel_built = np.zeros(steps + 1, dtype=bool)
        self._kernel_rowmax = np.zeros(steps + 1)
        self._tail_cut: int | None = None
        self.m = 0
        if config.conv_backend == "compiled":
            if not HAVE_COMPILED:
                raise RuntimeError("compiled convolution backend requested but not built")
            self._conv = _conv_default
        elif config.conv_backend == "numpy":
            self._conv = _conv_numpy
        else:
            self._conv = _conv_default
        if config.integrator == "rectangle":
            self._w0, self._wm = 1.0, 0.0
        else:
            self._w0, self._wm = 0.5, 0.5

    @property
    def conv_backend_name(self) -> str:
        return self._conv.BACKEND

    def _site_row_for_kernel(self, m: int) -> np.ndarray:
        if self.config.kernel_mode == "fgr-frozen":
            return free_propagator(self.uc_momenta, self.times[m], self.config.h)
        return self.basis @ self.g_qp[m] @ self._udag

    def build_kernel_row(self, m: int) -> None:
        """Fill kernel row m from the propagator at the same time."""
        if self._kernel_built[m]:
            return
        if m > self.m:
            raise ValueError(f"history incomplete: row {m} not yet available (at step {self.m})")
        m_site = kernel_row_fft(self._site_row_for_kernel(m), self.config.delta)
        self.m_qp[m] = self._udag @ m_site @ self.basis
        self._kernel_built[m] = True
        self._kernel_rowmax[m] = np.max(np.abs(self.m_qp[m]))
        if self.config.history_cutoff and self._tail_cut is None and m >= 16:
            scale = 1e-12 * self._kernel_rowmax[0]
            if np.all(self._kernel_rowmax[m - 15 : m + 1] < scale):
                self._tail_cut = m

    def step(self) -> None:
        """Advance the propagator one time step."""
        m = self.m
        if m >= self.config.n_steps:
            raise ValueError("run already complete")
        self.build_kernel_row(m)
        if self._tail_cut is None or self._tail_cut >= m:
            conv = self._conv.conv_step(self.m_qp, self.g_qp, m, self._w0, self._wm)
        else:
            # kernel tail below threshold: sum j <= tail_cut only, pairing
            # kernel row j with propagator row m - j via a shifted view
            j_max = self._tail_cut
            conv = self._conv.conv_step(self.m_qp, self.g_qp[m - j_max :], j_max, self._w0, 1.0)
        dt = self.config.dt
        memory = dt * dt * conv  # dt from the quadrature, dt from the Euler step
        if self.config.frame == "rotating":
            phase_now = np.exp(1j * self.omegas * self.times[m])
            self._g_tilde -= phase_now[:, :, None] * memory
            phase_next = np.exp(-1j * self.omegas * self.times[m + 1])
            self.g_qp[m + 1] = phase_next[:, :, None] * self._g_tilde
        else:
            phase_dt = np.exp(-1j * self.omegas * dt)
            self.g_qp[m + 1] = phase_dt[:, :, None] * (self.g_qp[m] - memory)
        self.m = m + 1
        norms = np.linalg.norm(self.g_qp[m + 1], ord=2, axis=(-2, -1))
        worst = float(np.max(norms))
        if worst > 0.5 + self.config.norm_tolerance:
            k_bad = self.uc_momenta[int(np.argmax(norms))]
            raise NumericalFailure(
                f"propagator norm {worst:.4f} exceeded 1/2 + {self.config.norm_tolerance} "
                f"at t = {self.times[m + 1]:.2f}, k = {k_bad:.4f}; the run is unstable "
                f"(reduce dt or delta)"
            )

    def run(self) -> SolverResult:
        while self.m < self.config.n_steps:
            self.step()
        self.build_kernel_row(self.config.n_steps)
        return SolverResult(
            config=self.config,
            times=self.times,
            uc_momenta=self.uc_momenta,
            omegas=self.omegas,
            basis=self.basis,
            g_qp=self.g_qp,
            m_qp=self.m_qp,
        )


def solve(config: SolverConfig) -> SolverResult:
    """Run the full evolution for one configuration."""
    return MelonicSolver(config).run()
