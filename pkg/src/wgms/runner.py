"""Drive one integration from a :class:`RunSpec` and write its outputs."""

from __future__ import annotations

import csv
import logging
import math
from pathlib import Path

import numpy as np

import wgms
from wgms.config import RunSpec
from wgms.diagnostics import invariants
from wgms.equations import EquationSystem, initial_condition, kdv_system, nls_system, sge_reconstruct, sge_system
from wgms.io import write_meta, write_snapshot
from wgms.spectral import make_grid
from wgms.stepper import ConvergenceError, DivergenceError, SolverSession, StepConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_SOLVER = 1
EXIT_USAGE = 2


def build_system(spec: RunSpec) -> EquationSystem:
    if spec.equation == "kdv":
        return kdv_system(spec.epsilon, spec.beta)
    if spec.equation == "nls":
        return nls_system(spec.mu, spec.nu)
    return sge_system()


def build_initial_state(spec: RunSpec, sys: EquationSystem, grid) -> np.ndarray:
    v = spec.values
    if spec.ic == "nls_sech":
        ic = initial_condition("nls_sech", b=v["b"], nu=v["nu"])
    elif spec.ic == "nls_soliton":
        ic = initial_condition("nls_soliton", a=v["a"], v=v.get("v", 0.0), mu=v["mu"], nu=v["nu"])
    elif spec.ic == "kdv_gaussian":
        ic = initial_condition("kdv_gaussian", c1=v["c1"], c2=v["c2"])
    elif spec.ic == "sge_sine":
        ic = initial_condition("sge_sine", amplitude=v["amplitude"], wavenumber=v.get("wavenumber", 1.0))
    elif spec.ic == "file":
        ic = initial_condition("file", path=v["ic_file"], period=grid.period)
    else:
        ic = initial_condition(spec.ic)
    u0 = ic(grid.sample_points)
    if u0.shape != (sys.n, grid.n_points):
        raise ValueError(f"initial condition {spec.ic!r} gives shape {u0.shape}, expected ({sys.n}, {grid.n_points})")
    return u0


def run(spec: RunSpec) -> int:
    """Integrate, writing ``run.meta``, snapshots and ``diagnostics.csv`` to ``out_dir``.

    Returns 0 on success, 1 if the solver diverged (the failing step is
    recorded in ``run.meta``) and 2 for unusable output directories.
    """
    out = Path(spec.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        logger.error("cannot create %s: %s", out, exc)
        return EXIT_USAGE
    if not spec.force and (any(out.glob("snapshot_*.csv")) or (out / "run.meta").exists()):
        logger.error("%s already holds run output; pass --force to overwrite", out)
        return EXIT_USAGE

    sys = build_system(spec)
    grid = make_grid(spec.n, spec.period)
    config = StepConfig(spec.dt, iterations=spec.iterations, tolerance=spec.tolerance,
                        max_iterations=spec.max_iterations, nyquist_policy=spec.nyquist)
    session = SolverSession(sys, grid, build_initial_state(spec, sys, grid), config)
    snap_meta = {"equation": sys.name, "period": grid.period, "dt": config.dt}

    def save(snap):
        extra = sge_reconstruct(*snap.state) if sys.name == "sge" else None
        write_snapshot(out / f"snapshot_{snap.step:08d}.csv", grid.sample_points, snap.state,
                       snap.time, snap_meta, reconstructed=extra, force=spec.force)

    names = list(invariants(sys, session.state, grid))
    status, failing_step, message = "completed", None, ""
    with open(out / "diagnostics.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["step", "time", *names, "iterations", "max_ratio"])

        def record(step, time, state, stats):
            inv = invariants(sys, state, grid)
            ratio = stats.max_ratio if stats is not None else math.nan
            writer.writerow([step, repr(time), *(repr(inv[k]) for k in names),
                             stats.iterations if stats is not None else 0, repr(ratio)])

        record(0, session.time, session.state, None)
        save(session.snapshot())
        n_steps = session.steps_to(spec.t_end)
        try:
            for k in range(1, n_steps + 1):
                stats = session.step()
                record(k, session.time, session.state, stats)
                if k % spec.snapshot_every == 0:
                    save(session.snapshot())
        except (DivergenceError, ConvergenceError) as exc:
            status, failing_step, message = "diverged", exc.step_index, str(exc)
            logger.error("%s", exc)

    meta = {
        "wgms_version": wgms.__version__,
        "status": status,
        **({"failing_step": failing_step, "message": message} if failing_step is not None else {}),
        "steps": session.step_count,
        "final_time": session.time,
        **{k: spec.values[k] for k in sorted(spec.values)},
        "defaults_applied": sorted(spec.defaults_applied),
    }
    write_meta(out / "run.meta", meta)
    return EXIT_OK if status == "completed" else EXIT_SOLVER
