"""Momentum and time discretization shared by all solvers.

Conventions used throughout the package (every module converts to these):

* momenta live on the uniform grid k_j = 2*pi*j/L, j = 0..L-1 (lattice
  constant 1),
* the discrete Fourier transform is unitary with an e^{-ikx} kernel,
  f_k = L^{-1/2} sum_x e^{-ikx} f_x,
* Brillouin-zone integrals int dq/2pi are evaluated as (1/L) sum_j over
  the grid (periodic trapezoid rule, spectrally accurate for smooth
  periodic integrands).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class MomentumGrid:
    """Uniform Brillouin-zone grid with L points in [0, 2*pi)."""

    n_sites: int

    def __post_init__(self):
        if self.n_sites < 2 or self.n_sites % 2 != 0:
            raise ValueError(f"n_sites must be a positive even integer, got {self.n_sites}")

    @property
    def points(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.n_sites) / self.n_sites

    @property
    def spacing(self) -> float:
        return 2.0 * np.pi / self.n_sites

    def index_of(self, k: float) -> int:
        """Index of the grid momentum closest to k (mod 2*pi)."""
        j = int(round((k % (2.0 * np.pi)) / self.spacing))
        return j % self.n_sites

    def bz_mean(self, values: np.ndarray, axis=-1) -> np.ndarray:
        """(1/L) sum_j values_j, the discrete form of int dq/2pi."""
        return np.mean(values, axis=axis)


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time grid t_m = m*dt for m = 0..n_steps."""

    dt: float
    n_steps: int

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.n_steps < 1:
            raise ValueError(f"n_steps must be >= 1, got {self.n_steps}")

    @property
    def times(self) -> np.ndarray:
        return self.dt * np.arange(self.n_steps + 1)

    @property
    def t_max(self) -> float:
        return self.dt * self.n_steps


def forward_transform(values: np.ndarray) -> np.ndarray:
    """Unitary DFT, f_k = L^{-1/2} sum_x e^{-ikx} f_x.

    Accepts batched input; the transform acts on the last axis.
    """
    values = np.asarray(values)
    n = values.shape[-1]
    return np.fft.fft(values, axis=-1) / np.sqrt(n)


def inverse_transform(values: np.ndarray) -> np.ndarray:
    """Inverse of :func:`forward_transform`, f_x = L^{-1/2} sum_k e^{+ikx} f_k."""
    values = np.asarray(values)
    n = values.shape[-1]
    return np.fft.ifft(values, axis=-1) * np.sqrt(n)


def transform_on_grid(grid: MomentumGrid, values: np.ndarray) -> np.ndarray:
    """Forward transform with an explicit length check against the grid."""
    values = np.asarray(values)
    if values.shape[-1] != grid.n_sites:
        raise ValueError(
            f"input length {values.shape[-1]} does not match grid size {grid.n_sites}"
        )
    return forward_transform(values)


def cyclic_corr(f: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Circular cross-correlation c[s] = sum_x f[x] h[x+s], via FFTs.

    Both inputs must share the same last-axis length; broadcasting over
    leading axes is supported.
    """
    f = np.asarray(f)
    h = np.asarray(h)
    return np.fft.ifft(np.fft.fft(h, axis=-1) * np.conj(np.fft.fft(np.conj(f), axis=-1)), axis=-1)
