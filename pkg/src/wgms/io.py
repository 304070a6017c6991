"""Column-text snapshot files and run metadata.

Snapshot layout::

    # wnwe-snapshot v1
    # equation=kdv n=512 period=2e1 dt=1e-2 t=5e0 components=1
    x,re_u1,im_u1
    -1e1,...

Reals are written in the shortest scientific form that round-trips exactly.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any, Mapping

import numpy as np

MAGIC = "# wnwe-snapshot v1"


def format_real(value: float) -> str:
    """Shortest round-trip scientific notation, e.g. ``5e0``, ``-1.25e-3``."""
    return np.format_float_scientific(float(value), unique=True, trim="-", exp_digits=1).replace("e+", "e")


def write_snapshot(path, x: np.ndarray, state: np.ndarray, t: float, meta: Mapping[str, Any],
                   reconstructed: np.ndarray | None = None, force: bool = False) -> Path:
    """Write one snapshot; refuses to replace an existing file unless ``force``.

    ``meta`` needs ``equation``, ``period`` and ``dt``. ``reconstructed`` adds
    trailing ``re_u,im_u`` columns (used for Sine-Gordon).
    """
    path = Path(path)
    state = np.atleast_2d(np.asarray(state, dtype=complex))
    n_comp, n = state.shape
    if len(x) != n:
        raise ValueError(f"{len(x)} sample points for {n} samples")
    header = (
        f"# equation={meta['equation']} n={n} period={format_real(meta['period'])} "
        f"dt={format_real(meta['dt'])} t={format_real(t)} components={n_comp}"
    )
    cols = ["x"] + [f"{p}_u{i + 1}" for i in range(n_comp) for p in ("re", "im")]
    columns = [np.asarray(x, dtype=float)]
    for c in state:
        columns += [c.real, c.imag]
    if reconstructed is not None:
        reconstructed = np.asarray(reconstructed, dtype=complex)
        cols += ["re_u", "im_u"]
        columns += [reconstructed.real, reconstructed.imag]
    rows = [",".join(format_real(v) for v in row) for row in zip(*columns)]
    text = "\n".join([MAGIC, header, ",".join(cols), *rows]) + "\n"
    with open(path, "w" if force else "x", newline="\n") as fh:
        fh.write(text)
    return path


def read_snapshot(path) -> dict[str, Any]:
    """Parse a snapshot; returns ``meta``, ``x`` and ``state`` (``(n, N)`` complex)."""
    lines = Path(path).read_text().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) < 3 or lines[0] != MAGIC:
        raise ValueError(f"{path}: not a wnwe snapshot")
    meta: dict[str, Any] = {}
    for item in lines[1].lstrip("#").split():
        key, _, value = item.partition("=")
        meta[key] = value if key == "equation" else (int(value) if key in ("n", "components") else float(value))
    names = lines[2].split(",")
    data = np.array([[float(v) for v in line.split(",")] for line in lines[3:]]).reshape(-1, len(names))
    if data.shape[0] != meta["n"]:
        raise ValueError(f"{path}: expected {meta['n']} data rows, found {data.shape[0]}")
    k = meta["components"]
    # assemble parts separately; re + 1j*im would lose the sign of -0.0
    state = np.empty((k, data.shape[0]), dtype=complex)
    state.real = data[:, 1:1 + 2 * k:2].T
    state.imag = data[:, 2:2 + 2 * k:2].T
    return {"meta": meta, "x": data[:, 0], "state": state, "columns": names}


def write_meta(path, items: Mapping[str, Any]) -> Path:
    """``key = value`` lines; floats in round-trip form."""
    out = []
    for key, value in items.items():
        if isinstance(value, float):
            value = format_real(value)
        elif isinstance(value, (list, tuple)):
            value = ",".join(str(v) for v in value)
        out.append(f"{key} = {value}")
    path = Path(path)
    path.write_text("\n".join(out) + "\n")
    return path
