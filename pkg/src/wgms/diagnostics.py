"""Numerical checks on the scheme: filter norms, contraction, invariants, errors."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from wgms.equations import EquationSystem, initial_condition, nls_envelope_soliton, nls_system
from wgms.spectral import SpectralGrid, dft_forward, dft_inverse, make_grid
from wgms.stepper import IterationStats, SolverSession, StepConfig, build_multipliers


@dataclass(frozen=True)
class ScalingFit:
    dt_values: np.ndarray
    norm_values: np.ndarray
    slope: float
    intercept: float
    expected_slope: float


def operator_norm_B(sys: EquationSystem, grid: SpectralGrid, dt: float, policy: str = "paper") -> float:
    """L2 operator norm of the filter ``B``: the largest ``|b_hat|`` over modes and components."""
    return float(np.max(np.abs(build_multipliers(sys, grid, dt, policy).b_hat)))


def filter_peak_wavenumber(sys: EquationSystem, dt: float) -> float:
    """Continuous wavenumber ``kappa >= 0`` maximizing ``|d M(i kappa) / (1 - d L(i kappa))|``."""
    d = 0.5 * dt

    def gain(kappa):
        ik = 1j * np.asarray(kappa, dtype=float)
        return max(np.max(np.abs(d * M(ik) / (1 - d * L(ik)))) for L, M in zip(sys.L, sys.M))

    if all(M.degree <= 0 for M in sys.M):
        return 0.0
    log_k = np.linspace(-8, 12, 4001)
    values = np.array([gain(10.0 ** s) for s in log_k])
    i = int(np.argmax(values))
    lo, hi = log_k[max(i - 1, 0)], log_k[min(i + 1, len(log_k) - 1)]
    res = minimize_scalar(lambda s: -gain(10.0 ** s), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-10})
    return float(10.0 ** res.x)


def fit_scaling_exponent(sys: EquationSystem, grid: SpectralGrid, dt_list: Iterable[float]) -> ScalingFit:
    """Least-squares slope of ``log ||B||`` against ``log dt``.

    The filter norm should scale like ``dt**(q/ell)``; ``expected_slope``
    carries ``q/ell`` for comparison.
    """
    dts = np.sort(np.asarray(list(dt_list), dtype=float))
    if dts.size < 2 or np.any(dts <= 0) or np.any(np.diff(dts) <= 0):
        raise ValueError("need at least two distinct positive dt values")
    if any(M.degree >= 1 for M in sys.M):
        kappa_star = filter_peak_wavenumber(sys, dts[-1])
        kappa_max = float(np.max(np.abs(grid.wavenumbers)))
        if kappa_star > kappa_max:
            raise ValueError(
                f"grid too coarse for the sweep: peak wavenumber {kappa_star:.4g} at dt={dts[-1]:g} "
                f"exceeds the largest grid wavenumber {kappa_max:.4g}"
            )
    norms = np.array([operator_norm_B(sys, grid, dt) for dt in dts])
    slope, intercept = fit_power_law(dts, norms)
    return ScalingFit(dts, norms, slope, intercept, sys.q / sys.ell)


def fit_power_law(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Slope and intercept of the least-squares line through ``(log x, log y)``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("power-law fit needs positive data")
    if np.ptp(np.log(y)) == 0:
        raise ValueError("degenerate fit: all values equal")
    slope, intercept = np.polyfit(np.log(x), np.log(y), 1)
    return float(slope), float(intercept)


def contraction_run(sys: EquationSystem, grid: SpectralGrid, u0: np.ndarray, config: StepConfig,
                    n_steps: int) -> list[IterationStats]:
    """Iteration statistics of the first ``n_steps`` steps from ``u0``."""
    session = SolverSession(sys, grid, u0, config)
    return [session.step() for _ in range(n_steps)]


def max_contraction_ratio(history: Sequence[IterationStats]) -> float:
    ratios = [r for h in history for r in h.ratios]
    return max(ratios) if ratios else float("nan")


def invariants(sys: EquationSystem, u: np.ndarray, grid: SpectralGrid) -> dict[str, float]:
    """Periodic-trapezoid integrals conserved by the continuous equations.

    kdv: ``integral_u`` and ``integral_u2``; nls: ``mass``; sge: ``l2``
    (sum over both components). Quadratic quantities use ``|u|^2``.
    """
    u = np.asarray(u)
    if u.ndim == 1:
        u = u[None, :]
    h = grid.spacing
    sq = float(h * np.sum(u.real ** 2 + u.imag ** 2))
    if sys.name == "kdv":
        return {"integral_u": float(h * np.sum(u.real)), "integral_u2": sq}
    if sys.name == "nls":
        return {"mass": sq}
    return {"l2": sq}


def pde_residual_second_order(snapshots: Sequence[np.ndarray], dt: float, grid: SpectralGrid,
                              gamma: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """``u_tt - u_xx - gamma(u)`` at the middle of equally spaced snapshots.

    ``u_tt`` is the centered second difference in time and ``u_xx`` is
    computed spectrally.
    """
    if len(snapshots) < 3:
        raise ValueError(f"need at least 3 snapshots, got {len(snapshots)}")
    mid = len(snapshots) // 2
    before, u, after = (np.asarray(s) for s in snapshots[mid - 1: mid + 2])
    u_tt = (before - 2 * u + after) / dt ** 2
    u_xx = dft_inverse(-(grid.wavenumbers ** 2) * dft_forward(u, grid), grid)
    return u_tt - u_xx - gamma(u)


def error_vs_reference(state: np.ndarray, reference: Callable, t: float, grid: SpectralGrid) -> dict[str, float]:
    """Max and root-mean-square deviation from ``reference(x, t)`` on the grid."""
    ref = np.asarray(reference(grid.sample_points, t))
    err = np.abs(np.asarray(state).reshape(ref.shape) - ref)
    return {"linf": float(err.max()), "l2": float(np.sqrt(np.mean(err ** 2)))}


def observed_order(err_coarse: float, err_fine: float) -> float:
    """Convergence order from errors at ``dt`` and ``dt/2``."""
    if not (err_coarse > 0 and err_fine > 0):
        raise ValueError("errors must be positive")
    return float(np.log2(err_coarse / err_fine))


def nls_soliton_run(dt: float, t_end: float = 1.0, a: float = 1.0, v: float = 0.0, mu: float = 1.0,
                    nu: float = 2.0, n_points: int = 512, period: float = 40.0,
                    tolerance: float = 1e-12) -> dict[str, float]:
    """Integrate the exact NLS soliton and report errors and mass drift."""
    grid = make_grid(n_points, period)
    sys = nls_system(mu, nu)
    u0 = initial_condition("nls_soliton", a=a, v=v, mu=mu, nu=nu)(grid.sample_points)
    session = SolverSession(sys, grid, u0, StepConfig(dt, tolerance=tolerance))
    m0 = invariants(sys, session.state, grid)["mass"]
    drift = 0.0

    def watch(snap):
        nonlocal drift
        drift = max(drift, abs(invariants(sys, snap.state, grid)["mass"] - m0) / m0)

    session.integrate(t_end, observer=watch)
    err = error_vs_reference(session.state[0], lambda x, t: nls_envelope_soliton(a, v, mu, nu, x, t),
                             session.time, grid)
    return {"dt": dt, "t": session.time, "steps": session.step_count, "mass0": m0,
            "mass_drift": drift, **err}
