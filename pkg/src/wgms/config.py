"""Run specifications read from ``key = value`` files plus command-line overrides."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Optional

EQUATIONS = ("kdv", "nls", "sge")


class ConfigError(ValueError):
    def __init__(self, key: str, message: str, line: Optional[int] = None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{key}: {message}")
        self.key = key
        self.line = line


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _opt_float(text: str) -> Optional[float]:
    return None if text.strip().lower() in ("", "none") else float(text)


def _int(text: str) -> int:
    value = float(text)
    if not value.is_integer():
        raise ValueError(f"not an integer: {text!r}")
    return int(value)


# key -> (parser, help)
KEYS: dict[str, tuple[Callable[[str], Any], str]] = {
    "equation": (str, "kdv, nls or sge"),
    "epsilon": (float, "KdV dispersion coefficient"),
    "beta": (float, "KdV nonlinear coefficient"),
    "mu": (float, "NLS dispersion coefficient"),
    "nu": (float, "NLS nonlinear coefficient"),
    "n": (_int, "number of grid points (power of two)"),
    "period": (float, "length of the periodic domain"),
    "dt": (float, "time step"),
    "t_end": (float, "final time"),
    "iterations": (_int, "fixed-point sweeps per step (fixed-count mode)"),
    "tolerance": (_opt_float, "relative stopping tolerance; enables tolerance mode"),
    "max_iterations": (_int, "iteration cap in tolerance mode"),
    "nyquist": (str, "paper or zero"),
    "ic": (str, "initial condition name"),
    "b": (float, "nls_sech width parameter"),
    "a": (float, "nls_soliton amplitude"),
    "v": (float, "nls_soliton velocity"),
    "c1": (float, "kdv_gaussian exponent coefficient"),
    "c2": (float, "kdv_gaussian amplitude"),
    "amplitude": (float, "sge_sine amplitude"),
    "wavenumber": (float, "sge_sine wavenumber"),
    "ic_file": (str, "column file for ic = file"),
    "snapshot_every": (_int, "write a snapshot every this many steps"),
    "out_dir": (str, "output directory"),
    "seed": (_int, "seed for randomized diagnostics"),
    "force": (_bool, "overwrite existing output files"),
}

COMMON_DEFAULTS = {
    "dt": 0.01,
    "t_end": 1.0,
    "iterations": 3,
    "tolerance": None,
    "max_iterations": 25,
    "nyquist": "paper",
    "snapshot_every": 50,
    "out_dir": "wgms_run",
    "seed": 0,
    "force": False,
}

EQUATION_DEFAULTS = {
    "kdv": {"n": 512, "period": 20.0, "epsilon": 0.05, "beta": 1.0, "ic": "kdv_gaussian"},
    "nls": {"n": 1024, "period": 2 * math.pi, "mu": 1.0, "nu": 2.0, "ic": "nls_sech", "b": 3.0},
    "sge": {"n": 256, "period": 2 * math.pi, "ic": "sge_zero"},
}

IC_PARAMS = {
    "kdv_gaussian": ("c1", "c2"),
    "nls_sech": ("b",),
    "nls_soliton": ("a", "v"),
    "sge_zero": (),
    "sge_sine": ("amplitude", "wavenumber"),
    "file": ("ic_file",),
}
IC_EQUATIONS = {
    "kdv_gaussian": {"kdv"},
    "nls_sech": {"nls"},
    "nls_soliton": {"nls"},
    "sge_zero": {"sge"},
    "sge_sine": {"sge"},
    "file": set(EQUATIONS),
}


@dataclass
class RunSpec:
    values: dict[str, Any]
    defaults_applied: list[str] = field(default_factory=list)

    def __getattr__(self, name):
        try:
            return self.__dict__["values"][name]
        except KeyError:
            raise AttributeError(name) from None


def _parse_value(key: str, text: str, line: Optional[int]) -> Any:
    if key not in KEYS:
        raise ConfigError(key, "unknown key", line)
    try:
        return KEYS[key][0](text.strip())
    except ValueError as exc:
        raise ConfigError(key, f"bad value {text.strip()!r} ({exc})", line) from None


def parse_run_spec(config_text: str = "", overrides: Optional[Mapping[str, Any]] = None) -> RunSpec:
    """Merge a config file with overrides (overrides win) and validate.

    Override values may be strings or already-typed values.
    """
    raw: dict[str, Any] = {}
    lines: dict[str, int] = {}
    for lineno, line in enumerate(config_text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(line.split()[0], "expected 'key = value'", lineno)
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        raw[key] = _parse_value(key, value, lineno)
        lines[key] = lineno
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        key = key.replace("-", "_")
        raw[key] = _parse_value(key, value, None) if isinstance(value, str) else value
        lines.pop(key, None)

    def fail(key, message):
        raise ConfigError(key, message, lines.get(key))

    if "equation" not in raw:
        raise ConfigError("equation", "required (kdv, nls or sge)")
    eq = raw["equation"]
    if eq not in EQUATIONS:
        fail("equation", f"must be one of {', '.join(EQUATIONS)}, got {eq!r}")

    values = dict(raw)
    applied = []
    for key, value in {**COMMON_DEFAULTS, **EQUATION_DEFAULTS[eq]}.items():
        if key not in values:
            values[key] = value
            applied.append(key)
    if eq == "kdv" and values["ic"] == "kdv_gaussian" and not ({"c1", "c2"} & raw.keys()):
        from wgms.equations import kdv_gaussian_defaults

        values.update(kdv_gaussian_defaults(values["period"]))
        applied += ["c1", "c2"]

    n = values["n"]
    if n < 4 or n % 2:
        fail("n", f"must be even and >= 4, got {n}")
    if n & (n - 1):
        fail("n", f"must be a power of two, got {n}")
    for key in ("period", "dt", "epsilon", "mu", "nu"):
        if key in values and not values[key] > 0:
            fail(key, f"must be positive, got {values[key]}")
    if not values["t_end"] >= 0:
        fail("t_end", f"must be >= 0, got {values['t_end']}")
    for key in ("iterations", "max_iterations", "snapshot_every"):
        if values[key] < 1:
            fail(key, f"must be >= 1, got {values[key]}")
    if values["tolerance"] is not None and not values["tolerance"] > 0:
        fail("tolerance", f"must be positive, got {values['tolerance']}")
    if values["nyquist"] not in ("paper", "zero"):
        fail("nyquist", f"must be 'paper' or 'zero', got {values['nyquist']!r}")
    ic = values["ic"]
    if ic not in IC_PARAMS:
        fail("ic", f"unknown initial condition {ic!r}")
    if eq not in IC_EQUATIONS[ic]:
        fail("ic", f"{ic!r} does not apply to {eq}")
    optional = {"wavenumber", "v"}
    for key in IC_PARAMS[ic]:
        if key not in values and key not in optional:
            fail(key, f"required by ic = {ic}")
    return RunSpec(values, applied)
