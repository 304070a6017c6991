"""Acceptance checks runnable from code, the test suite and ``wgms verify``."""

from __future__ import annotations

import filecmp
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from wgms.config import parse_run_spec
from wgms.diagnostics import (
    contraction_run,
    fit_scaling_exponent,
    invariants,
    max_contraction_ratio,
    nls_soliton_run,
    observed_order,
    operator_norm_B,
    pde_residual_second_order,
)
from wgms.equations import (
    EquationSystem,
    SymbolPolynomial,
    SystemValidationError,
    initial_condition,
    kdv_system,
    nls_system,
    sge_reconstruct,
    sge_system,
    validate_system,
)
from wgms.io import read_snapshot
from wgms.runner import run
from wgms.spectral import dft_forward, dft_inverse, make_grid
from wgms.stepper import SolverSession, StepConfig, build_multipliers


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def builtin_systems() -> dict[str, EquationSystem]:
    return {"kdv(1,1)": kdv_system(1, 1), "nls(1,1)": nls_system(1, 1),
            "nls(1,2)": nls_system(1, 2), "sge": sge_system()}


def check_unitarity(builder: Callable = build_multipliers) -> CheckResult:
    grid = make_grid(1024, 2 * np.pi)
    worst = 0.0
    for sys in builtin_systems().values():
        for dt in (1e-4, 1e-2, 1.0):
            c = builder(sys, grid, dt, "paper").c_hat
            worst = max(worst, float(np.max(np.abs(np.abs(c) - 1))))
    return CheckResult("1 Cayley unitarity", worst <= 1e-14, f"max||c_hat|-1| = {worst:.2e} (<= 1e-14)")


def check_scaling() -> CheckResult:
    grid = make_grid(512, 2 * np.pi)
    dts = np.logspace(-4, -2, 8)
    parts, ok = [], True
    for name, sys, target, tol in (("kdv", kdv_system(1, 1), 2 / 3, 0.03),
                                   ("nls", nls_system(1, 1), 1.0, 0.02),
                                   ("sge", sge_system(), 1.0, 0.02)):
        fit = fit_scaling_exponent(sys, grid, dts)
        ok &= abs(fit.slope - target) <= tol
        parts.append(f"{name} slope {fit.slope:.4f} (target {target:.3f}+-{tol})")
    kdv = kdv_system(1, 1)
    closed = 2 ** (-2 / 3) * 3 ** -0.5
    rel = max(abs(operator_norm_B(kdv, grid, dt) / (closed * (dt / 2) ** (2 / 3)) - 1) for dt in dts)
    ok &= rel < 0.02
    parts.append(f"kdv closed-form rel dev {rel:.4f} (< 0.02)")
    return CheckResult("2 filter norm exponent", bool(ok), "; ".join(parts))


def _nls_appendix_ratio(dt: float) -> tuple[float, float]:
    grid = make_grid(1024, 2 * np.pi)
    u0 = initial_condition("nls_sech", b=3, nu=2)(grid.sample_points)
    history = contraction_run(nls_system(1, 2), grid, u0, StepConfig(dt, iterations=3), 100)
    last = max(h.ratios[-1] for h in history)
    return max_contraction_ratio(history), last


def check_contraction() -> CheckResult:
    worst, last = _nls_appendix_ratio(0.01)
    half, _ = _nls_appendix_ratio(0.005)
    ok = worst < 1 and half < worst
    return CheckResult("3 contraction", ok,
                       f"max ratio {worst:.4f} at dt=1e-2 (< 1, last-sweep max {last:.4f}); "
                       f"{half:.4f} at dt=5e-3 (must be smaller)")


def check_soliton(fast: bool = False) -> CheckResult:
    fine = nls_soliton_run(1e-3)
    ok = fine["linf"] < 1e-4
    detail = f"linf {fine['linf']:.2e} (< 1e-4)"
    if not fast:
        coarse = nls_soliton_run(2e-3)
        order = observed_order(coarse["linf"], fine["linf"])
        ok &= 1.8 <= order <= 2.2
        detail += f"; observed order {order:.3f} (in [1.8, 2.2])"
    else:
        detail += "; order study skipped (fast)"
    return CheckResult("4 NLS soliton accuracy", bool(ok), detail)


def check_conservation() -> CheckResult:
    nls = nls_soliton_run(1e-3)
    ok = nls["mass_drift"] < 1e-6 and abs(nls["mass0"] - 2.0) < 1e-6
    parts = [f"nls mass0 {nls['mass0']:.10f} (2 +- 1e-6), drift {nls['mass_drift']:.2e} (< 1e-6)"]

    sys = kdv_system(0.05, 1.0)
    grid = make_grid(512, 20.0)
    u0 = initial_condition("kdv_gaussian", period=20.0)(grid.sample_points)
    session = SolverSession(sys, grid, u0, StepConfig(0.01, iterations=3))
    inv0 = invariants(sys, u0, grid)
    stats = {"mean": 0.0, "l2": 0.0, "finite": True, "amp": 0.0}

    def watch(snap):
        inv = invariants(sys, snap.state, grid)
        stats["mean"] = max(stats["mean"], abs(inv["integral_u"] - inv0["integral_u"]) / abs(inv0["integral_u"]))
        stats["l2"] = max(stats["l2"], abs(inv["integral_u2"] - inv0["integral_u2"]) / inv0["integral_u2"])
        stats["finite"] &= bool(np.all(np.isfinite(snap.state)))
        stats["amp"] = max(stats["amp"], float(np.max(np.abs(snap.state))))

    session.integrate(5.0, observer=watch)
    amp_ratio = stats["amp"] / float(np.max(np.abs(u0)))
    ok &= (session.step_count == 500 and stats["mean"] <= 1e-12 and stats["l2"] < 1e-4
           and stats["finite"] and amp_ratio < 5)
    parts.append(f"kdv {session.step_count} steps: int u rel {stats['mean']:.1e} (<= 1e-12), "
                 f"int u^2 drift {stats['l2']:.2e} (< 1e-4), max|u|/max|u0| {amp_ratio:.3f} (< 5)")
    return CheckResult("5 conservation", bool(ok), "; ".join(parts))


def sge_residual(dt: float = 1e-3, t: float = 0.1, n_points: int = 256, amplitude: float = 0.1,
                 sys: EquationSystem | None = None) -> float:
    """Max Sine-Gordon residual of the reconstructed field at time ``t``."""
    sys = sys or sge_system()
    grid = make_grid(n_points, 2 * np.pi)
    u0 = initial_condition("sge_sine", amplitude=amplitude)(grid.sample_points)
    session = SolverSession(sys, grid, u0, StepConfig(dt, iterations=3))
    target = round(t / dt)
    frames = []

    def keep(snap):
        if snap.step >= target - 1:
            frames.append(sge_reconstruct(*snap.state))

    session.integrate((target + 1) * dt, observer=keep)
    res = pde_residual_second_order(frames[-3:], dt, grid, np.sin)
    return float(np.max(np.abs(res)))


def check_sge_residual() -> CheckResult:
    r = sge_residual()
    return CheckResult("6 SGE residual", r < 1e-3, f"max|u_tt - u_xx - sin u| = {r:.2e} at t=0.1 (< 1e-3)")


def check_validation() -> CheckResult:
    base = kdv_system(1, 1)
    cases = {
        "L=X^2": EquationSystem("bad_L", (SymbolPolynomial([0, 0, 1]),), base.M, base.G),
        "deg M = ell": EquationSystem("bad_M", base.L, (SymbolPolynomial([0, 0, 0, 1]),), base.G),
        "G(0) != 0": EquationSystem("bad_G", base.L, base.M, lambda u: u * u + 1),
    }
    rejected = []
    for label, sys in cases.items():
        try:
            validate_system(sys)
        except SystemValidationError:
            rejected.append(label)
    ok = len(rejected) == len(cases)
    return CheckResult("7 validation rejections", ok, f"rejected {len(rejected)}/{len(cases)}: {', '.join(rejected)}")


def check_spectral() -> CheckResult:
    rng = np.random.default_rng(0)
    grid = make_grid(1024, 2 * np.pi)
    f = rng.standard_normal(1024) + 1j * rng.standard_normal(1024)
    fhat = dft_forward(f, grid)
    rt = float(np.linalg.norm(dft_inverse(fhat, grid) - f) / np.linalg.norm(f))
    lhs, rhs = np.sum(np.abs(f) ** 2), np.sum(np.abs(fhat) ** 2) / 1024
    pars = float(abs(lhs - rhs) / lhs)
    x = grid.sample_points
    deriv = float(np.max(np.abs(dft_inverse(1j * grid.wavenumbers * dft_forward(np.sin(x), grid), grid) - np.cos(x))))
    ok = rt < 1e-12 and pars < 1e-12 and deriv < 1e-12
    return CheckResult("8 spectral core", ok,
                       f"round trip {rt:.1e}, Parseval {pars:.1e}, d/dx sin - cos {deriv:.1e} (all < 1e-12)")


def check_zero_solution() -> CheckResult:
    grid = make_grid(256, 2 * np.pi)
    bad = []
    for name, sys in builtin_systems().items():
        session = SolverSession(sys, grid, np.zeros((sys.n, 256)), StepConfig(0.01))
        for _ in range(1000):
            session.step()
        if np.any(session.state != 0):
            bad.append(name)
    return CheckResult("9 zero solution", not bad,
                       "1000 steps exactly zero for all built-ins" if not bad else f"nonzero for {bad}")


def check_determinism() -> CheckResult:
    overrides = {"equation": "kdv", "t_end": 0.5, "snapshot_every": 10}
    with tempfile.TemporaryDirectory() as tmp:
        dirs = [Path(tmp) / "a", Path(tmp) / "b"]
        codes = [run(parse_run_spec("", {**overrides, "out_dir": str(d)})) for d in dirs]
        names = sorted(p.name for p in dirs[0].glob("snapshot_*.csv"))
        match, mismatch, errors = filecmp.cmpfiles(dirs[0], dirs[1], names + ["diagnostics.csv"],
                                                   shallow=False)
        # read-back against an independent in-memory run
        sys = kdv_system(0.05, 1.0)
        grid = make_grid(512, 20.0)
        session = SolverSession(sys, grid, initial_condition("kdv_gaussian", period=20.0)(grid.sample_points),
                                StepConfig(0.01))
        session.integrate(0.5)
        back = read_snapshot(dirs[0] / "snapshot_00000050.csv")
        exact = (np.array_equal(back["state"].view(float), session.state.view(float))
                 and np.array_equal(back["x"], grid.sample_points))
    ok = codes == [0, 0] and not mismatch and not errors and exact and len(names) == 6
    return CheckResult("10 determinism and format", ok,
                       f"{len(match)} files byte-identical, {len(mismatch) + len(errors)} differ; "
                       f"read-back bit-exact: {exact}")


CHECKS = [
    ("unitarity", check_unitarity),
    ("scaling", check_scaling),
    ("contraction", check_contraction),
    ("soliton", check_soliton),
    ("conservation", check_conservation),
    ("sge_residual", check_sge_residual),
    ("validation", check_validation),
    ("spectral", check_spectral),
    ("zero_solution", check_zero_solution),
    ("determinism", check_determinism),
]


def verify_suite(scope: str = "all", echo: Callable[[str], None] = print) -> tuple[int, list[CheckResult]]:
    """Run every acceptance check; exit status is 0 iff all pass."""
    if scope not in ("all", "fast"):
        raise ValueError(f"scope must be 'all' or 'fast', got {scope!r}")
    results = []
    for name, check in CHECKS:
        result = check(fast=True) if (name == "soliton" and scope == "fast") else check()
        echo(result.line())
        results.append(result)
    failed = sum(not r.passed for r in results)
    echo(f"{len(results) - failed}/{len(results)} checks passed")
    return (0 if failed == 0 else 1), results
