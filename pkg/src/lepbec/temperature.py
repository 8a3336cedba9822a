"""Local inverse-temperature profiles.

A profile supplies ``beta(x)`` and ``tilde_beta(x) = beta(x) * x`` as
functions of the energy ``x >= 0`` together with the finite zero set
``E = {x : tilde_beta(x) = 0}``.  Condensates can only sit on momenta whose
energy lies in ``E``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import optimize

from .dispersion import POWER, DispersionRelation
from .errors import UnboundedAtZero
from .quadrature import integrate_tail


def _check_nonnegative(x):
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("energy must be non-negative")
    return x


def _out(a):
    return a if np.ndim(a) else float(a)


class InverseTempProfile:
    """Interface shared by all profiles.

    Subclasses implement :meth:`_tilde` (vectorised, ``x >= 0``) and set
    ``zero_set``.  ``alpha0``/``alpha_inf`` are the asymptotic exponents
    ``beta(x) ~ x**alpha0`` near zero and ``beta(x) ~ alpha_inf ln(x)/x`` at
    infinity; ``math.inf`` for ``alpha_inf`` stands for exponential decay.
    """

    zero_set: tuple[float, ...] = ()
    knots: tuple[float, ...] = ()
    alpha0: float | None = None
    alpha_inf: float | None = None

    def _tilde(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def tilde_beta(self, x):
        x = _check_nonnegative(x)
        return _out(self._tilde(x))

    def beta(self, x):
        x = _check_nonnegative(x)
        if np.any(x == 0) and not self.beta_defined_at_zero:
            raise ValueError(f"{type(self).__name__}: beta(0) is undefined")
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(x > 0, self._tilde(x) / np.where(x > 0, x, 1.0), self._beta_at_zero())
        return _out(out)

    @property
    def beta_defined_at_zero(self) -> bool:
        return False

    def _beta_at_zero(self) -> float:
        return math.nan

    def to_config(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Constant(InverseTempProfile):
    """Ordinary equilibrium: ``beta(x) = beta0``."""

    beta0: float = 1.0

    def __post_init__(self):
        if not self.beta0 > 0:
            raise ValueError("beta0 must be positive")

    zero_set = (0.0,)
    alpha0 = 0.0
    alpha_inf = math.inf

    def _tilde(self, x):
        return self.beta0 * x

    @property
    def beta_defined_at_zero(self):
        return True

    def _beta_at_zero(self):
        return self.beta0

    def to_config(self):
        return {"variant": "constant", "beta0": self.beta0}


@dataclass(frozen=True)
class PowerLog(InverseTempProfile):
    """``tilde_beta = x**(alpha0+1)`` on ``[0, 1]`` and
    ``alpha_inf * ln(x) + 1`` beyond; continuous at the knot ``x = 1``."""

    alpha0: float = 0.0
    alpha_inf: float = 2.0

    def __post_init__(self):
        if not self.alpha0 > -1:
            raise ValueError("PowerLog needs alpha0 > -1 so that tilde_beta(0) = 0")
        if not self.alpha_inf >= 0:
            raise ValueError("PowerLog needs alpha_inf >= 0")

    zero_set = (0.0,)
    knots = (1.0,)

    def _tilde(self, x):
        with np.errstate(divide="ignore"):
            low = np.abs(x) ** (self.alpha0 + 1.0)
            high = self.alpha_inf * np.log(np.where(x > 1, x, 1.0)) + 1.0
        return np.where(x <= 1.0, low, high)

    @property
    def beta_defined_at_zero(self):
        return self.alpha0 >= 0

    def _beta_at_zero(self):
        return 1.0 if self.alpha0 == 0 else 0.0

    def to_config(self):
        return {"variant": "powerlog", "alpha0": self.alpha0, "alpha_inf": self.alpha_inf}


@dataclass(frozen=True)
class ZeroAt(InverseTempProfile):
    """Condensation on an excited level: ``tilde_beta = |x - x0|**a`` up to
    ``x0 + 1`` and ``alpha_inf * ln(x - x0) + 1`` beyond."""

    x0: float = 1.0
    a: float = 0.5
    alpha_inf: float = 2.0

    def __post_init__(self):
        if self.x0 < 0 or not self.a > 0 or self.alpha_inf < 0:
            raise ValueError("ZeroAt needs x0 >= 0, a > 0, alpha_inf >= 0")

    @property
    def zero_set(self):
        return (float(self.x0),)

    @property
    def knots(self):
        return (float(self.x0) + 1.0,)

    @property
    def alpha0(self):
        # beta = x**(a-1) near 0 when x0 == 0, otherwise ~ x0**a / x
        return self.a - 1.0 if self.x0 == 0 else -1.0

    def _tilde(self, x):
        dx = x - self.x0
        with np.errstate(divide="ignore", invalid="ignore"):
            low = np.abs(dx) ** self.a
            high = self.alpha_inf * np.log(np.where(dx > 1, dx, 1.0)) + 1.0
        return np.where(x <= self.x0 + 1.0, low, high)

    @property
    def beta_defined_at_zero(self):
        return self.x0 == 0 and self.a >= 1

    def _beta_at_zero(self):
        return 1.0 if self.a == 1 else 0.0

    def to_config(self):
        return {"variant": "zeroat", "x0": self.x0, "a": self.a, "alpha_inf": self.alpha_inf}


@dataclass(frozen=True)
class Custom(InverseTempProfile):
    """User supplied ``beta``; the zero set of ``tilde_beta`` must be declared."""

    func: Callable = field(default=lambda x: np.ones_like(x))
    declared_zero_set: tuple = (0.0,)
    name: str = "custom"

    @property
    def zero_set(self):
        return tuple(sorted(float(z) for z in self.declared_zero_set))

    def _tilde(self, x):
        x = np.asarray(x, dtype=float)
        safe = np.where(x > 0, x, 1.0)
        vals = np.asarray(self.func(safe), dtype=float) * safe
        at_zero = 0.0 if 0.0 in self.zero_set else float(np.asarray(self.func(1e-300)) * 1e-300)
        return np.where(x > 0, vals, at_zero)

    @property
    def beta_defined_at_zero(self):
        return False

    def to_config(self):
        raise ValueError("custom profiles cannot be serialised")


def profile_from_config(cfg: dict) -> InverseTempProfile:
    cfg = dict(cfg)
    variant = cfg.pop("variant", None)
    builders = {"constant": Constant, "powerlog": PowerLog, "zeroat": ZeroAt}
    if variant not in builders:
        raise ValueError(f"unknown profile variant {variant!r}")
    return builders[variant](**cfg)


# ---------------------------------------------------------------------------
# Probes and admissibility
# ---------------------------------------------------------------------------


def probe_beta_near_zero(profile: InverseTempProfile, jmin: int = 10, jmax: int = 40):
    """Estimate ``limsup_{x -> 0+} beta(x)`` from ``x = 2**-j``.

    Returns ``(estimate, samples)``; raises :class:`UnboundedAtZero` when the
    samples keep growing geometrically.  This is a sampling approximation.
    """
    j = np.arange(jmin, jmax + 1)
    x = 2.0 ** (-j.astype(float))
    vals = np.asarray(profile.beta(x), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise UnboundedAtZero("beta is not finite near zero")
    tail = vals[-10:]
    growing = np.all(tail[1:] > tail[:-1] * (1.0 + 1e-3))
    if growing and vals[-1] > 10.0 * max(vals[0], 1e-300):
        raise UnboundedAtZero(f"beta(2^-{jmax}) = {vals[-1]:.3g} keeps growing")
    return float(np.max(tail)), vals


@dataclass
class AdmissibilityReport:
    continuityOk: bool
    infZeroOk: bool
    zeroSetFinite: bool
    tailIntegrable: bool
    diagnostics: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.continuityOk and self.infZeroOk and self.zeroSetFinite and self.tailIntegrable

    def as_record(self) -> dict:
        return {"continuityOk": self.continuityOk, "infZeroOk": self.infZeroOk,
                "zeroSetFinite": self.zeroSetFinite, "tailIntegrable": self.tailIntegrable,
                "diagnostics": self.diagnostics}


def _sample_grid(zeros, upper: float = 1e4, n: int = 4000):
    grid = np.concatenate([np.geomspace(1e-8, upper, n), np.linspace(0.0, 10.0, n)])
    for z in zeros:
        grid = np.concatenate([grid, z + np.geomspace(1e-10, 1.0, 200), np.clip(z - np.geomspace(1e-10, 1.0, 200), 0, None)])
    return np.unique(grid)


def check_admissibility(profile: InverseTempProfile, disp: DispersionRelation, d: int | None = None) -> AdmissibilityReport:
    """Probe the continuity, infimum, zero-set and tail conditions
    for a power-law dispersion."""
    if disp.kind != POWER:
        raise ValueError("the tail condition is formulated for power-law dispersions")
    d = disp.d if d is None else int(d)
    s = disp.s
    zeros = profile.zero_set
    grid = _sample_grid(zeros)
    tb = np.asarray(profile.tilde_beta(grid), dtype=float)
    diag: dict = {}

    h = 1e-9 * np.maximum(grid, 1.0)
    # relative to the local size so that fast growth is not mistaken for a jump
    jump = np.abs(np.asarray(profile.tilde_beta(grid + h)) - tb) / np.maximum(np.abs(tb), 1.0)
    continuity = bool(np.all(np.isfinite(tb)) and np.max(jump) < 1e-3)
    diag["max_local_jump"] = float(np.max(jump))

    at_zero = np.asarray(profile.tilde_beta(np.asarray(zeros, dtype=float))) if zeros else np.empty(0)
    zeros_vanish = bool(np.all(np.abs(at_zero) <= 1e-12))
    inf_zero = bool(np.min(tb) >= -1e-14 and (zeros_vanish if zeros else np.min(tb) < 1e-6))
    diag["min_tilde_beta"] = float(np.min(tb))

    # off the declared zeros tilde_beta must stay positive
    if zeros:
        dist = np.min(np.abs(grid[:, None] - np.asarray(zeros)[None, :]), axis=1)
        off = dist > 1e-6
    else:
        off = np.ones_like(grid, dtype=bool)
    undeclared = list(grid[off & (tb <= 0)])
    # isolated zeros fall between samples: refine every interior local minimum
    interior = np.nonzero((tb[1:-1] < tb[:-2]) & (tb[1:-1] < tb[2:]) & off[1:-1])[0] + 1
    for i in interior:
        # golden section copes with kinks such as |x - x0| where Brent stalls
        r = optimize.minimize_scalar(lambda t: float(profile.tilde_beta(t)), bracket=(grid[i - 1], grid[i], grid[i + 1]),
                                     method="golden", options={"xtol": 1e-15, "maxiter": 500})
        near_declared = zeros and min(abs(r.x - z) for z in zeros) <= 1e-6
        if r.fun <= 1e-10 and not near_declared:
            undeclared.append(float(r.x))
    undeclared = np.asarray(undeclared)
    zero_finite = bool(zeros_vanish and undeclared.size == 0)
    diag["undeclared_zero_samples"] = [float(x) for x in undeclared[:5]]

    a = (max(zeros) if zeros else 0.0) + 1.0
    expo = d / s - 1.0

    def integrand(x):
        t = float(profile.tilde_beta(x))
        if t > 1.0:
            return x**expo * math.exp(-t) / -math.expm1(-t)
        if t <= 0.0:
            return math.inf
        return x**expo / math.expm1(t)

    tail = integrate_tail(integrand, a)
    diag["tail"] = {"start": a, "value": tail.value if tail.finite else None, **tail.diagnostics}
    tail_ok = bool(tail.finite and math.isfinite(tail.value))
    return AdmissibilityReport(continuity, inf_zero, zero_finite, tail_ok, diag)


@dataclass(frozen=True)
class DimensionVerdict:
    convergesAtZero: bool
    convergesAtInfinity: bool

    @property
    def condensationPossible(self) -> bool:
        return self.convergesAtZero and self.convergesAtInfinity


def dimension_condition(s: float, d: int, alpha0: float, alpha_inf: float) -> DimensionVerdict:
    """Analytic criterion ``s (alpha0 + 1) < d < s alpha_inf`` for a finite
    critical density; ``alpha_inf = math.inf`` encodes exponential decay."""
    return DimensionVerdict(d > s * (alpha0 + 1.0), d < s * alpha_inf)
