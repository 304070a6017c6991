"""Periodic grids, discrete Fourier transforms and Fourier multipliers.

Fields and spectra are plain complex numpy arrays whose last axis has length
``N``; a system with ``n`` components is stored with shape ``(n, N)``.

Conventions
-----------
The forward transform is unnormalized and the inverse carries ``1/N``::

    uhat[m] = sum_j u[j] exp(-2 pi i m j / N)
    u[j]    = (1/N) sum_m uhat[m] exp(+2 pi i m j / N)

Spectral index ``j`` holds the integer mode ``[0, 1, ..., N/2, 1-N/2, ..., -1][j]``,
so the Nyquist mode is stored as ``+N/2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

NYQUIST_POLICIES = ("paper", "zero")


@dataclass(frozen=True)
class SpectralGrid:
    """Uniform sampling of ``[-P/2, P/2)`` with ``N`` points."""

    n_points: int
    period: float
    sample_points: np.ndarray = field(repr=False, compare=False)
    modes: np.ndarray = field(repr=False, compare=False)
    wavenumbers: np.ndarray = field(repr=False, compare=False)

    @property
    def spacing(self) -> float:
        return self.period / self.n_points

    @property
    def nyquist_index(self) -> int:
        return self.n_points // 2


def make_grid(n_points: int, period: float) -> SpectralGrid:
    """Build the periodic grid with ``n_points`` samples over one ``period``.

    >>> g = make_grid(4, 2 * np.pi)
    >>> g.modes.tolist()
    [0, 1, 2, -1]
    """
    if isinstance(n_points, bool) or int(n_points) != n_points:
        raise ValueError(f"n_points must be an integer, got {n_points!r}")
    n_points = int(n_points)
    if n_points < 4 or n_points % 2:
        raise ValueError(f"n_points must be even and >= 4, got {n_points}")
    period = float(period)
    if not np.isfinite(period) or period <= 0:
        raise ValueError(f"period must be positive, got {period}")

    j = np.arange(n_points)
    x = -period / 2 + j * (period / n_points)
    modes = np.concatenate([np.arange(0, n_points // 2 + 1), np.arange(1 - n_points // 2, 0)])
    kappa = (2 * np.pi / period) * modes
    for a in (x, modes, kappa):
        a.setflags(write=False)
    return SpectralGrid(n_points, period, x, modes, kappa)


def _check_length(a: np.ndarray, grid: SpectralGrid, what: str) -> np.ndarray:
    a = np.asarray(a)
    if a.ndim == 0 or a.shape[-1] != grid.n_points:
        raise ValueError(
            f"{what} has trailing length {a.shape[-1] if a.ndim else 0}, "
            f"expected {grid.n_points}"
        )
    return a


def dft_forward(u: np.ndarray, grid: SpectralGrid) -> np.ndarray:
    """Unnormalized forward DFT along the last axis."""
    u = _check_length(u, grid, "field")
    return np.fft.fft(u, axis=-1)


def dft_inverse(uhat: np.ndarray, grid: SpectralGrid) -> np.ndarray:
    """Inverse of :func:`dft_forward` (carries the ``1/N`` factor)."""
    uhat = _check_length(uhat, grid, "spectrum")
    return np.fft.ifft(uhat, axis=-1)


def direct_dft(u: np.ndarray, inverse: bool = False) -> np.ndarray:
    """O(N^2) summation of the same transforms; a reference for testing."""
    u = np.asarray(u, dtype=complex)
    n = u.shape[-1]
    j = np.arange(n)
    sign = 1.0 if inverse else -1.0
    kernel = np.exp(sign * 2j * np.pi * np.outer(j, j) / n)
    out = u @ kernel.T
    return out / n if inverse else out


def apply_multiplier(uhat: np.ndarray, diag: np.ndarray) -> np.ndarray:
    """Multiply a spectrum mode by mode.

    ``diag`` may be one row shared by every component or one row per
    component.
    """
    uhat = np.asarray(uhat)
    diag = np.asarray(diag)
    if diag.shape[-1] != uhat.shape[-1]:
        raise ValueError(
            f"multiplier length {diag.shape[-1]} does not match spectrum length {uhat.shape[-1]}"
        )
    if diag.ndim > 1 and uhat.ndim > 1 and diag.shape[0] != uhat.shape[0]:
        raise ValueError(
            f"multiplier has {diag.shape[0]} components, spectrum has {uhat.shape[0]}"
        )
    return uhat * diag


def derivative_multiplier(grid: SpectralGrid, order: int = 1, nyquist: str = "paper") -> np.ndarray:
    """Diagonal of ``D**order``, i.e. ``(i kappa)**order``.

    With ``nyquist="zero"`` odd derivatives vanish at the Nyquist mode so that
    real fields stay real.
    """
    if nyquist not in NYQUIST_POLICIES:
        raise ValueError(f"unknown nyquist policy {nyquist!r}")
    diag = (1j * grid.wavenumbers) ** order
    if nyquist == "zero" and order % 2:
        diag = diag.copy()
        diag[grid.nyquist_index] = 0.0
    return diag


def sobolev_norm(uhat: np.ndarray, m: float, grid: SpectralGrid) -> float:
    """Discrete Sobolev norm ``sqrt(sum_k (1 + k^2)^(m/2) |c_k|^2)``.

    ``k`` is the integer mode and ``c_k = uhat[k] / N`` the normalized
    coefficient; components of a system are summed together. For ``m = 0``
    this is the root-mean-square of the samples (Parseval).
    """
    if m < 0:
        raise ValueError(f"Sobolev index must be >= 0, got {m}")
    uhat = _check_length(uhat, grid, "spectrum")
    weight = (1.0 + grid.modes.astype(float) ** 2) ** (m / 2)
    c = uhat / grid.n_points
    return float(np.sqrt(np.sum(weight * np.abs(c) ** 2)))


def band_limit_project(uhat: np.ndarray, cutoff: int, grid: SpectralGrid | None = None) -> np.ndarray:
    """Zero every coefficient whose integer mode exceeds ``cutoff`` in magnitude."""
    uhat = np.asarray(uhat)
    n = uhat.shape[-1]
    if grid is not None:
        _check_length(uhat, grid, "spectrum")
        modes = grid.modes
    else:
        modes = np.concatenate([np.arange(0, n // 2 + 1), np.arange(1 - n // 2, 0)])
    if int(cutoff) != cutoff or not 0 <= cutoff <= n // 2:
        raise ValueError(f"cutoff must be an integer in [0, {n // 2}], got {cutoff}")
    return np.where(np.abs(modes) > cutoff, 0.0, uhat)
