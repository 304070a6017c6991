"""Weakly nonlinear wave equations ``u^i_t = L^i(D) u^i + M^i(D) G^i(u)``.

A system is admissible when every ``L^i`` is formally skew-adjoint, all
``L^i`` share one degree ``ell``, every ``deg M^i < ell`` and ``G(0) = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np

Nonlinearity = Callable[[np.ndarray], np.ndarray]


class SystemValidationError(ValueError):
    """Base class for systems that are not weakly nonlinear wave equations."""


class NotSkewAdjointError(SystemValidationError):
    pass


class UnequalDegreeError(SystemValidationError):
    pass


class MultiplierDegreeError(SystemValidationError):
    pass


class NonzeroOriginError(SystemValidationError):
    pass


@dataclass(frozen=True)
class SymbolPolynomial:
    """``P(X) = sum_m coefficients[m] * X**m`` with complex coefficients."""

    coefficients: tuple[complex, ...]

    def __init__(self, coefficients: Sequence[complex]):
        coeffs = [complex(c) for c in coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def monomial(cls, coeff: complex, power: int) -> "SymbolPolynomial":
        return cls([0] * power + [coeff])

    @property
    def degree(self) -> int:
        """Degree; ``-1`` for the zero polynomial."""
        return len(self.coefficients) - 1

    def __call__(self, x):
        # Horner; works on scalars and arrays.
        out = np.zeros_like(np.asarray(x, dtype=complex))
        for c in reversed(self.coefficients):
            out = out * x + c
        return out

    def __repr__(self) -> str:
        terms = [f"({c:g})X^{m}" for m, c in enumerate(self.coefficients) if c != 0]
        return "SymbolPolynomial(" + (" + ".join(terms) or "0") + ")"


@dataclass(frozen=True)
class EquationSystem:
    """An ``n``-component system; ``G`` maps an ``(n, N)`` array to ``(n, N)``."""

    name: str
    L: tuple[SymbolPolynomial, ...]
    M: tuple[SymbolPolynomial, ...]
    G: Nonlinearity = field(compare=False)
    params: Mapping[str, float] = field(default_factory=dict, compare=False)

    @property
    def n(self) -> int:
        return len(self.L)

    @property
    def ell(self) -> int:
        return self.L[0].degree

    @property
    def q(self) -> int:
        return min(self.ell - m.degree for m in self.M)


def is_formally_skew_adjoint(p: SymbolPolynomial) -> bool:
    """True iff ``p(i k)`` is purely imaginary for every real ``k``.

    Equivalent to: no constant term, real odd coefficients and imaginary
    even coefficients. The test is exact on the stored coefficients.
    """
    for m, c in enumerate(p.coefficients):
        if m == 0 and c != 0:
            return False
        if m % 2 and c.imag != 0:
            return False
        if m % 2 == 0 and c.real != 0:
            return False
    return True


def validate_system(sys: EquationSystem) -> dict[str, int]:
    """Check the admissibility conditions and return ``{"ell": ..., "q": ...}``."""
    if len(sys.M) != len(sys.L) or not sys.L:
        raise SystemValidationError(
            f"{sys.name}: need one L and one M per component, got {len(sys.L)} and {len(sys.M)}"
        )
    for i, p in enumerate(sys.L):
        if not is_formally_skew_adjoint(p):
            raise NotSkewAdjointError(f"{sys.name}: L^{i + 1} = {p!r} is not formally skew-adjoint")
    degrees = {p.degree for p in sys.L}
    if len(degrees) != 1:
        raise UnequalDegreeError(f"{sys.name}: L polynomials have unequal degrees {sorted(degrees)}")
    ell = sys.L[0].degree
    if ell < 1:
        raise UnequalDegreeError(f"{sys.name}: L must have degree >= 1")
    for i, p in enumerate(sys.M):
        if p.degree >= ell:
            raise MultiplierDegreeError(
                f"{sys.name}: deg M^{i + 1} = {p.degree} is not below deg L = {ell}"
            )
    g0 = np.asarray(sys.G(np.zeros((sys.n, 1), dtype=complex)))
    if g0.shape != (sys.n, 1):
        raise SystemValidationError(f"{sys.name}: G returned shape {g0.shape} for input (n, 1)")
    if np.any(g0 != 0):
        raise NonzeroOriginError(f"{sys.name}: G(0) = {g0.ravel().tolist()} is not zero")
    return {"ell": ell, "q": sys.q}


def _kdv_G(u: np.ndarray) -> np.ndarray:
    return u * u


def _nls_G(u: np.ndarray) -> np.ndarray:
    return (u.real ** 2 + u.imag ** 2) * u


def _sge_G(u: np.ndarray) -> np.ndarray:
    # each component is forced by the other one: u1_t = u1_x + 2 sin(u2/2),
    # u2_t = -u2_x + 2 sin(u1/2); then (u1 + u2)/2 solves u_tt = u_xx + sin u
    return 2.0 * np.sin(0.5 * u[::-1])


def kdv_system(dispersion: float = 1.0, nonlin_coeff: float = 1.0) -> EquationSystem:
    """``u_t = -eps u_xxx - beta u u_x``; ``(1, 1)`` is the textbook normalization."""
    if not dispersion > 0:
        raise ValueError(f"dispersion must be positive, got {dispersion}")
    return EquationSystem(
        name="kdv",
        L=(SymbolPolynomial.monomial(-float(dispersion), 3),),
        M=(SymbolPolynomial.monomial(-0.5 * float(nonlin_coeff), 1),),
        G=_kdv_G,
        params={"dispersion": float(dispersion), "nonlin_coeff": float(nonlin_coeff)},
    )


def nls_system(mu: float = 1.0, nu: float = 1.0) -> EquationSystem:
    """Focusing NLS ``i u_t + mu u_xx + nu |u|^2 u = 0``."""
    if not (mu > 0 and nu > 0):
        raise ValueError(f"mu and nu must be positive, got mu={mu}, nu={nu}")
    return EquationSystem(
        name="nls",
        L=(SymbolPolynomial.monomial(1j * float(mu), 2),),
        M=(SymbolPolynomial([1j * float(nu)]),),
        G=_nls_G,
        params={"mu": float(mu), "nu": float(nu)},
    )


def sge_system() -> EquationSystem:
    """Sine-Gordon written for the characteristic variables ``u1 = u + v``, ``u2 = u - v``."""
    return EquationSystem(
        name="sge",
        L=(SymbolPolynomial([0, 1]), SymbolPolynomial([0, -1])),
        M=(SymbolPolynomial([1]), SymbolPolynomial([1])),
        G=_sge_G,
    )


def eval_nonlinearity(sys: EquationSystem, u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != sys.n:
        raise ValueError(f"{sys.name} expects a field of shape ({sys.n}, N), got {u.shape}")
    return sys.G(u)


def sge_reconstruct(u1: np.ndarray, u2: np.ndarray) -> np.ndarray:
    """Recover the Sine-Gordon field ``u = (u1 + u2) / 2``."""
    u1 = np.asarray(u1)
    u2 = np.asarray(u2)
    if u1.shape != u2.shape:
        raise ValueError(f"component shapes differ: {u1.shape} vs {u2.shape}")
    return (u1 + u2) / 2


def nls_envelope_soliton(a, v, mu, nu, x, t):
    """Exact one-soliton of ``i u_t + mu u_xx + nu |u|^2 u = 0``.

    Envelope ``sqrt(2/nu) a sech(a (x - v t) / sqrt(mu))`` moving at speed
    ``v`` with carrier phase ``c x - (mu c^2 - a^2) t`` where ``c = v / (2 mu)``.
    For ``v = 0`` this is ``sqrt(2/nu) a sech(a x / sqrt(mu)) exp(i a^2 t)``.
    """
    x = np.asarray(x, dtype=float)
    c = v / (2.0 * mu)
    envelope = np.sqrt(2.0 / nu) * a / np.cosh(a * (x - v * t) / np.sqrt(mu))
    phase = c * x - (mu * c * c - a * a) * t
    return envelope * np.exp(1j * phase)


def rescale_nls_params(mu: float, nu: float, alpha: float, beta: float, gamma: float) -> tuple[float, float]:
    """Coefficients solved by ``v(x, t) = alpha u(beta x, gamma t)``.

    If ``u`` solves NLS with ``(mu, nu)`` then ``v`` solves it with
    ``(gamma mu / beta^2, gamma nu / alpha^2)``.
    """
    if alpha == 0 or beta == 0 or gamma == 0:
        raise ValueError("scale factors must be nonzero")
    return gamma * mu / beta ** 2, gamma * nu / alpha ** 2


@dataclass(frozen=True)
class InitialCondition:
    """``evaluator(x)`` returns an ``(n, len(x))`` complex array."""

    name: str
    evaluator: Callable[[np.ndarray], np.ndarray] = field(compare=False)
    params: Mapping[str, float] = field(default_factory=dict)

    def __call__(self, x) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return np.asarray(self.evaluator(x), dtype=complex)


def kdv_gaussian_defaults(period: float) -> dict[str, float]:
    """Gaussian ``c2 exp(-c1 x^2)`` matching the reference KdV profile.

    The reference listing samples ``exp(-1.2 a s^2) / a`` on the rescaled
    coordinate ``s = x / a`` with ``a = period / (2 pi)``.
    """
    a = period / (2 * np.pi)
    return {"c1": 1.2 / a, "c2": 1.0 / a}


def _require(params: Mapping[str, float], name: str, keys: Sequence[str]) -> list[float]:
    missing = [k for k in keys if k not in params]
    if missing:
        raise ValueError(f"initial condition {name!r} is missing parameter(s): {', '.join(missing)}")
    return [float(params[k]) for k in keys]


def initial_condition(name: str, **params) -> InitialCondition:
    """Named initial profiles.

    ``nls_sech(b, nu)``
        ``sqrt(2/nu) b sech(b x)``.
    ``nls_soliton(a, v, mu, nu)``
        The exact envelope soliton at ``t = 0``.
    ``kdv_gaussian(c1, c2)`` or ``kdv_gaussian(period)``
        ``c2 exp(-c1 x^2)``; given only ``period`` the reference constants are used.
    ``sge_zero``
        Both components zero.
    ``sge_sine(amplitude, wavenumber=1)``
        ``u1 = amplitude sin(wavenumber x)``, ``u2 = 0``.
    ``file(path, components=None)``
        Columns ``x, re[, im]`` per component, interpolated linearly and periodically.
    """
    if name == "nls_sech":
        b, nu = _require(params, name, ["b", "nu"])
        amp = np.sqrt(2.0 / nu) * b
        return InitialCondition(name, lambda x: (amp / np.cosh(b * x))[None, :], {"b": b, "nu": nu})
    if name == "nls_soliton":
        a, v, mu, nu = _require(params, name, ["a", "v", "mu", "nu"])
        return InitialCondition(
            name,
            lambda x: nls_envelope_soliton(a, v, mu, nu, x, 0.0)[None, :],
            {"a": a, "v": v, "mu": mu, "nu": nu},
        )
    if name == "kdv_gaussian":
        if "c1" not in params and "c2" not in params and "period" in params:
            params = kdv_gaussian_defaults(float(params["period"]))
        c1, c2 = _require(params, name, ["c1", "c2"])
        return InitialCondition(name, lambda x: (c2 * np.exp(-c1 * x * x))[None, :], {"c1": c1, "c2": c2})
    if name == "sge_zero":
        return InitialCondition(name, lambda x: np.zeros((2, x.size)))
    if name == "sge_sine":
        (amplitude,) = _require(params, name, ["amplitude"])
        wavenumber = float(params.get("wavenumber", 1.0))
        return InitialCondition(
            name,
            lambda x: np.stack([amplitude * np.sin(wavenumber * x), np.zeros_like(x)]),
            {"amplitude": amplitude, "wavenumber": wavenumber},
        )
    if name == "file":
        if "path" not in params:
            raise ValueError("initial condition 'file' is missing parameter(s): path")
        return load_initial_condition(params["path"], params.get("period"))
    raise ValueError(f"unknown initial condition {name!r}")


def _read_columns(path: Path) -> np.ndarray:
    rows = []
    for lineno, line in enumerate(path.read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.replace(",", " ").split()
        try:
            rows.append([float(f) for f in fields])
        except ValueError:
            if rows:
                raise ValueError(f"{path}:{lineno}: non-numeric data row") from None
            continue  # column header
    if not rows:
        raise ValueError(f"{path}: no data rows")
    if len({len(r) for r in rows}) != 1:
        raise ValueError(f"{path}: rows have differing column counts")
    return np.array(rows)


def load_initial_condition(path, period: float | None = None) -> InitialCondition:
    """Initial profile from a column text file.

    Two columns are ``x, re``; otherwise ``x`` is followed by ``re, im`` pairs,
    one pair per component. Values are interpolated linearly onto the grid,
    periodically when ``period`` is given.
    """
    path = Path(path)
    data = _read_columns(path)
    ncol = data.shape[1]
    if ncol == 2:
        values = data[:, 1:2].astype(complex)
    elif ncol >= 3 and (ncol - 1) % 2 == 0:
        values = data[:, 1::2] + 1j * data[:, 2::2]
    else:
        raise ValueError(f"{path}: expected x followed by re/im pairs, got {ncol} columns")
    xs = data[:, 0]
    order = np.argsort(xs)
    xs, values = xs[order], values[order]

    def evaluate(x):
        out = []
        for c in values.T:
            kw = {"period": period} if period else {}
            out.append(np.interp(x, xs, c.real, **kw) + 1j * np.interp(x, xs, c.imag, **kw))
        return np.array(out)

    return InitialCondition("file", evaluate, {"components": values.shape[1]})
