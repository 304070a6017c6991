"""Trapezoidal time stepping solved by fixed-point iteration in Fourier space.

One step from ``u`` to ``u'`` solves ``u' = C u + B [G(u) + G(u')]`` with

    C = (1 + d L(D)) / (1 - d L(D)),   B = d M(D) / (1 - d L(D)),   d = dt / 2,

both diagonal in the Fourier basis. ``u'`` is found by iterating
``H_u(w) = C u + B [G(u) + G(w)]`` from ``w = u``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from wgms.equations import EquationSystem, validate_system
from wgms.spectral import NYQUIST_POLICIES, SpectralGrid, dft_forward, dft_inverse

logger = logging.getLogger(__name__)

DIVERGENCE_GROWTH = 1e6


class DivergenceError(RuntimeError):
    """The fixed-point iteration blew up."""

    def __init__(self, message: str, step_index: Optional[int] = None):
        super().__init__(message)
        self.step_index = step_index


class ConvergenceError(RuntimeError):
    """Tolerance mode ran out of iterations."""

    def __init__(self, message: str, step_index: Optional[int] = None):
        super().__init__(message)
        self.step_index = step_index


@dataclass(frozen=True)
class Multipliers:
    c_hat: np.ndarray
    b_hat: np.ndarray
    d: float


@dataclass(frozen=True)
class StepConfig:
    """Step size and stopping rule for the fixed-point iteration.

    With ``tolerance=None`` exactly ``iterations`` sweeps are made; otherwise
    iteration stops once ``|w_{j+1} - w_j| <= tolerance * max(1, |w_j|)``.
    """

    dt: float
    iterations: int = 3
    tolerance: Optional[float] = None
    max_iterations: int = 25
    nyquist_policy: str = "paper"

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.iterations < 1 or self.max_iterations < 1:
            raise ValueError("iteration counts must be >= 1")
        if self.tolerance is not None and not self.tolerance > 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.nyquist_policy not in NYQUIST_POLICIES:
            raise ValueError(f"unknown nyquist policy {self.nyquist_policy!r}")


@dataclass
class IterationStats:
    deltas: list[float] = field(default_factory=list)
    iterations: int = 0

    @property
    def ratios(self) -> list[float]:
        return [b / a for a, b in zip(self.deltas, self.deltas[1:]) if a > 0]

    @property
    def max_ratio(self) -> float:
        r = self.ratios
        return max(r) if r else float("nan")


def build_multipliers(sys: EquationSystem, grid: SpectralGrid, dt: float, policy: str = "paper") -> Multipliers:
    """Fourier-side Cayley factor ``c_hat`` and filter ``b_hat`` per component and mode."""
    validate_system(sys)
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if policy not in NYQUIST_POLICIES:
        raise ValueError(f"unknown nyquist policy {policy!r}")
    d = 0.5 * dt
    ik = 1j * grid.wavenumbers
    c_rows, b_rows = [], []
    for L, M in zip(sys.L, sys.M):
        dl = d * L(ik)
        denom = 1.0 - dl
        c = (1.0 + dl) / denom
        b = d * M(ik) / denom
        if policy == "zero":
            nyq = grid.nyquist_index
            b[nyq] = 0.0
            if all(m % 2 == 1 or a == 0 for m, a in enumerate(L.coefficients)):
                # odd L: its even part vanishes, so the Cayley factor is 1
                c[nyq] = 1.0
        c_rows.append(c)
        b_rows.append(b)
    c_hat = np.array(c_rows)
    b_hat = np.array(b_rows)
    c_hat.setflags(write=False)
    b_hat.setflags(write=False)
    return Multipliers(c_hat, b_hat, d)


def _rms(a: np.ndarray) -> float:
    return float(np.sqrt(np.mean(a.real ** 2 + a.imag ** 2)))


def apply_H(session: "SolverSession", w: np.ndarray, Cu: np.ndarray, Gu: np.ndarray) -> np.ndarray:
    """``H_u(w) = IFT(Cu + b_hat FT[G(u) + G(w)])`` with ``Cu``, ``Gu`` precomputed."""
    grid, mult = session.grid, session.mult
    if w.shape != Gu.shape or Cu.shape != Gu.shape:
        raise ValueError(f"shape mismatch: w {w.shape}, Cu {Cu.shape}, Gu {Gu.shape}")
    with np.errstate(over="ignore", invalid="ignore"):
        out = dft_inverse(Cu + mult.b_hat * dft_forward(Gu + session.sys.G(w), grid), grid)
    if not np.all(np.isfinite(out)):
        raise DivergenceError("non-finite values in fixed-point iterate")
    return out


@dataclass(frozen=True)
class Snapshot:
    step: int
    time: float
    state: np.ndarray
    stats: IterationStats


class SolverSession:
    """Mutable integration state for one system on one grid.

    ``time`` is always ``t0 + step_count * dt`` so that no rounding error
    accumulates across steps.
    """

    def __init__(self, sys: EquationSystem, grid: SpectralGrid, state: np.ndarray,
                 config: StepConfig, t0: float = 0.0):
        state = np.array(state, dtype=complex)
        if state.ndim == 1:
            state = state[None, :]
        if state.shape != (sys.n, grid.n_points):
            raise ValueError(f"state shape {state.shape} != ({sys.n}, {grid.n_points})")
        if not np.all(np.isfinite(state)):
            raise ValueError("initial state has non-finite values")
        self.sys = sys
        self.grid = grid
        self.state = state
        self.t0 = float(t0)
        self.step_count = 0
        self.last_stats = IterationStats()
        self._mult_key = None
        self.config = config

    @property
    def config(self) -> StepConfig:
        return self._config

    @config.setter
    def config(self, config: StepConfig) -> None:
        self._config = config
        key = (id(self.sys), self.grid.n_points, self.grid.period, config.dt, config.nyquist_policy)
        if key != self._mult_key:
            self.mult = build_multipliers(self.sys, self.grid, config.dt, config.nyquist_policy)
            self._mult_key = key

    @property
    def time(self) -> float:
        return self.t0 + self.step_count * self.config.dt

    def step(self) -> IterationStats:
        """Advance one step of size ``config.dt``."""
        cfg = self.config
        index = self.step_count + 1
        u = self.state
        Cu = self.mult.c_hat * dft_forward(u, self.grid)
        Gu = self.sys.G(u)
        stats = IterationStats()
        w = u
        n_max = cfg.iterations if cfg.tolerance is None else cfg.max_iterations
        converged = cfg.tolerance is None
        for _ in range(n_max):
            try:
                w_next = apply_H(self, w, Cu, Gu)
            except DivergenceError as exc:
                raise DivergenceError(f"step {index}: {exc}", index) from None
            delta = _rms(w_next - w)
            stats.deltas.append(delta)
            stats.iterations += 1
            if delta > DIVERGENCE_GROWTH * stats.deltas[0] and stats.deltas[0] > 0:
                raise DivergenceError(
                    f"step {index}: iterate difference grew from {stats.deltas[0]:.3e} to {delta:.3e}", index
                )
            if cfg.tolerance is not None and delta <= cfg.tolerance * max(1.0, _rms(w)):
                w = w_next
                converged = True
                break
            w = w_next
        if not converged:
            raise ConvergenceError(
                f"step {index}: no convergence to {cfg.tolerance:g} in {cfg.max_iterations} iterations "
                f"(last difference {stats.deltas[-1]:.3e})",
                index,
            )
        self.state = w
        self.step_count = index
        self.last_stats = stats
        return stats

    def snapshot(self) -> Snapshot:
        state = self.state.copy()
        state.setflags(write=False)
        return Snapshot(self.step_count, self.time, state, self.last_stats)

    def steps_to(self, t_end: float) -> int:
        """Number of whole steps until ``time >= t_end - dt/2``."""
        dt = self.config.dt
        if t_end < self.time - 0.5 * dt:
            raise ValueError(f"t_end={t_end} is before the current time {self.time}")
        n = max(0, math.ceil((t_end - self.t0) / dt - 0.5) - self.step_count)
        # guard the float estimate against off-by-one at the threshold
        while n > 0 and self.t0 + (self.step_count + n - 1) * dt >= t_end - 0.5 * dt:
            n -= 1
        while self.t0 + (self.step_count + n) * dt < t_end - 0.5 * dt:
            n += 1
        return n

    def integrate(self, t_end: float, observer: Optional[Callable[[Snapshot], None]] = None,
                  every: int = 1) -> list[IterationStats]:
        """Step until ``t_end`` is reached within ``dt/2``.

        ``observer`` sees the starting state and then every ``every``-th step.
        Returns the iteration statistics of every step taken.
        """
        if every < 1:
            raise ValueError(f"observer cadence must be >= 1, got {every}")
        n_steps = self.steps_to(t_end)
        history = []
        if observer is not None:
            observer(self.snapshot())
        for k in range(1, n_steps + 1):
            history.append(self.step())
            if observer is not None and k % every == 0:
                observer(self.snapshot())
        logger.debug("integrated %d steps to t=%g", n_steps, self.time)
        return history
