"""Dispersions, vertex factors, and exact free propagators.

Two models live here: the single-band chain with dispersion eps(k) = -cos k
(hopping sets the unit of energy, J = 1), and its staggered-field variant
with a two-site unit cell.  The staggered single-particle block at unit-cell
momentum k is

    eps_k = [[ 2h,              -(1+e^{-ik})/2 ],
             [ -(1+e^{+ik})/2,  -2h            ]]

with eigenvalues +-omega_k, omega_k = sqrt((1+cos k)/2 + 4 h^2).  All
propagators follow the equation of motion dG/dt + i eps G = 0 with
G(0) = I/2 (infinite-temperature normalization), so the free single-band
propagator is e^{-i eps_k t}/2 = e^{+i cos(k) t}/2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .grids import forward_transform, inverse_transform


def epsilon_cosine(k):
    """Single-band dispersion, eps(k) = -cos k."""
    return -np.cos(k)


def epsilon_cosine_prime(k):
    return np.sin(k)


def epsilon_cosine_second(k):
    return np.cos(k)


@dataclass(frozen=True)
class Dispersion:
    """A 2*pi-periodic band with evaluable first and second derivatives."""

    eps: Callable[[np.ndarray], np.ndarray]
    deps: Callable[[np.ndarray], np.ndarray]
    d2eps: Callable[[np.ndarray], np.ndarray]
    tag: str = "user"

    @staticmethod
    def cosine() -> "Dispersion":
        return Dispersion(epsilon_cosine, epsilon_cosine_prime, epsilon_cosine_second, "cosine")

    @staticmethod
    def staggered(h: float, branch: int) -> "Dispersion":
        """One branch (+1 upper / -1 lower) of the staggered two-band model."""
        if branch not in (+1, -1):
            raise ValueError("branch must be +1 or -1")
        s = float(branch)

        def eps(k):
            return s * two_band_omega(k, h)

        def deps(k):
            w = two_band_omega(k, h)
            return s * np.where(w > 0, -np.sin(k) / (4.0 * np.maximum(w, 1e-300)), 0.0)

        def d2eps(k):
            w = np.maximum(two_band_omega(k, h), 1e-300)
            return s * (-np.cos(k) / (4.0 * w) - np.sin(k) ** 2 / (16.0 * w**3))

        return Dispersion(eps, deps, d2eps, f"staggered{'+' if branch > 0 else '-'}")

    @staticmethod
    def from_table(k: np.ndarray, eps: np.ndarray) -> "Dispersion":
        """Dispersion tabulated on the uniform grid, with spectral derivatives.

        The table must cover k_j = 2*pi*j/L; derivatives are obtained by
        Fourier differentiation, so the band should be smooth and periodic.
        """
        k = np.asarray(k, dtype=float)
        eps = np.asarray(eps, dtype=float)
        L = len(k)
        expected = 2.0 * np.pi * np.arange(L) / L
        if not np.allclose(np.sort(k), expected, atol=1e-9):
            raise ValueError("tabulated momenta must be the uniform grid 2*pi*j/L")
        order = np.argsort(k)
        eps = eps[order]
        modes = np.fft.fft(eps)
        freqs = np.fft.fftfreq(L, d=1.0 / L)  # integer mode numbers

        def _interp(kq, deriv):
            kq = np.atleast_1d(np.asarray(kq, dtype=float))
            phase = np.exp(1j * np.outer(kq, freqs))
            coef = modes * (1j * freqs) ** deriv
            out = (phase @ coef).real / L
            return out if out.size > 1 else out[0]

        return Dispersion(
            lambda kq: _interp(kq, 0),
            lambda kq: _interp(kq, 1),
            lambda kq: _interp(kq, 2),
            "table",
        )


def dispersion_from_file(path) -> Dispersion:
    """Load a two-column (k, eps) text table on the uniform grid."""
    data = np.loadtxt(path)
    if data.ndim != 2 or data.shape[1] != 2:
        raise ValueError("dispersion table must have two columns: k, eps")
    return Dispersion.from_table(data[:, 0], data[:, 1])


def vertex_v(q, p, delta: float):
    """Density-density interaction vertex Delta*(cos q - cos p).

    Antisymmetric under q <-> p; vanishes at q = p (Pauli exclusion).
    """
    return delta * (np.cos(q) - np.cos(p))


def two_band_matrix(k, h: float) -> np.ndarray:
    """Single-particle block of the staggered model at unit-cell momentum k.

    Broadcasts over array-valued k; the block indices are the last two axes.
    """
    k = np.asarray(k, dtype=float)
    off = -(1.0 + np.exp(-1j * k)) / 2.0
    out = np.zeros(k.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = 2.0 * h
    out[..., 1, 1] = -2.0 * h
    out[..., 0, 1] = off
    out[..., 1, 0] = np.conj(off)
    return out


def two_band_omega(k, h: float):
    """Positive eigenvalue omega_k = sqrt((1+cos k)/2 + 4 h^2)."""
    return np.sqrt(np.maximum((1.0 + np.cos(np.asarray(k, dtype=float))) / 2.0 + 4.0 * h * h, 0.0))


def free_propagator(k, t, h: float) -> np.ndarray:
    """Free staggered-model propagator G0(k, t) = e^{-i eps_k t}/2.

    Closed form: since eps_k^2 = omega_k^2 * I,

        e^{-i eps_k t} = cos(omega t) I - i sin(omega t)/omega * eps_k,

    and sin(omega t)/omega is evaluated through its analytic omega -> 0
    limit (t), so the band-touching point k = pi at h = 0 is regular.
    Broadcasts over array-valued k and t.
    """
    k = np.asarray(k, dtype=float)
    t = np.asarray(t, dtype=float)
    shape = np.broadcast_shapes(k.shape, t.shape)
    k = np.broadcast_to(k, shape)
    t = np.broadcast_to(t, shape)
    w = two_band_omega(k, h)
    wt = w * t
    # sin(w t)/w = t * sinc(w t / pi)
    sinc = t * np.sinc(wt / np.pi)
    eps = two_band_matrix(k, h)
    out = np.zeros(shape + (2, 2), dtype=complex)
    out[..., 0, 0] = np.cos(wt)
    out[..., 1, 1] = np.cos(wt)
    out -= 1j * sinc[..., None, None] * eps
    return 0.5 * out


def unit_cell_reduce(block: np.ndarray, k) -> np.ndarray:
    """Collapse a two-band block at unit-cell momentum 2k to the scalar G_k.

    G_k = (1/2) sum_{eta,eta'} e^{i((eta-eta')/2) k} G_{2k,eta eta'};
    at Delta = 0, h = 0 this equals e^{+i cos(k) t}/2.  `block` must be
    sampled at unit-cell momentum 2k (mod 2*pi); broadcasting over leading
    axes of `block` (e.g. time) is supported.
    """
    block = np.asarray(block)
    k = np.asarray(k, dtype=float)
    phase_p = np.exp(1j * k)
    return 0.5 * (
        block[..., 0, 0]
        + block[..., 1, 1]
        + phase_p * block[..., 0, 1]
        + np.conj(phase_p) * block[..., 1, 0]
    )


def quasiparticle_frame(k, h: float):
    """Eigen-decomposition of the staggered block, ordered (-omega, +omega).

    Returns (omegas, U) with eps_k = U diag(omegas) U^dagger.  The first
    column of U belongs to the negative branch -omega_k, so the top-left
    entry of U^dagger G U tracks the quasiparticle with energy
    -sqrt((2h)^2 + cos^2(k/2)).  Eigenvector phases are fixed by making the
    largest-magnitude component real and nonnegative.
    """
    eps = two_band_matrix(k, h)
    w, u = np.linalg.eigh(eps)  # ascending: (-omega, +omega)
    # gauge fix per column
    comp = np.take_along_axis(
        u, np.argmax(np.abs(u), axis=-2, keepdims=True), axis=-2
    )
    phase = np.where(np.abs(comp) > 0, comp / np.maximum(np.abs(comp), 1e-300), 1.0)
    u = u * np.conj(phase)
    return w, u


def quasiparticle_basis(block: np.ndarray, k, h: float) -> np.ndarray:
    """Rotate a propagator block to the band eigenbasis, U^dagger G U.

    At Delta = 0 the result is diag(e^{+i omega_k t}, e^{-i omega_k t})/2.
    Raises for degenerate bands (h = 0 and k = pi), where the eigenbasis is
    ill-defined; use the unit-cell reduction for the h = 0 model instead.
    """
    w = two_band_omega(k, h)
    if np.any(np.asarray(w) < 1e-12):
        raise ValueError(
            "degenerate bands (omega_k = 0): the eigenbasis is ill-defined; "
            "use unit_cell_reduce for the h = 0 single-band observables"
        )
    _, u = quasiparticle_frame(k, h)
    udag = np.conj(np.swapaxes(u, -1, -2))
    return udag @ block @ u
