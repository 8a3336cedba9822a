"""Occupation numbers, critical chemical potentials and densities for
q-particles with an energy dependent inverse temperature.

Two conventions for the chemical potential are supported:

``A``
    scalar factor ``gamma(x) = exp(tilde_beta(x) - mu)``;
``B``
    scalar factor ``gamma(x) = exp(beta(x) * (x - mu))``.

The occupation number of a level with energy ``x`` is ``1 / (gamma(x) - q)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize, special

from .dispersion import DispersionRelation
from .errors import DenominatorNonPositive, QSignInvalid, SuperCritical, UnboundedAtZero
from .quadrature import IntegralResult, integrate_halfline
from .temperature import InverseTempProfile, probe_beta_near_zero

CONVENTION_A = "A"
CONVENTION_B = "B"
_CONVENTIONS = (CONVENTION_A, CONVENTION_B)

SUP_GRID_POINTS = 2**12
GOLDEN_TOL = 1e-12
MAX_DOUBLINGS = 60


def _check_q(q: float) -> float:
    q = float(q)
    if not -1.0 <= q <= 1.0:
        raise ValueError(f"q must lie in [-1, 1], got {q}")
    return q


def _check_convention(convention: str) -> str:
    if convention not in _CONVENTIONS:
        raise ValueError(f"convention must be 'A' or 'B', got {convention!r}")
    return convention


@dataclass(frozen=True)
class QStatistics:
    """Statistics parameter ``q``, chemical potential and convention."""

    q: float
    mu: float
    convention: str = CONVENTION_A

    def __post_init__(self):
        object.__setattr__(self, "q", _check_q(self.q))
        object.__setattr__(self, "mu", float(self.mu))
        _check_convention(self.convention)

    def to_config(self) -> dict:
        return {"q": self.q, "mu": self.mu, "convention": self.convention}


@dataclass(frozen=True)
class CriticalMu:
    """Critical chemical potential.

    ``unbounded`` marks the case ``mu_q = +inf`` (``q <= 0``).  The value is
    then ``None`` and must never enter arithmetic; use :meth:`admits` to
    compare chemical potentials against it.
    """

    value: float | None
    unbounded: bool = False
    flags: tuple[str, ...] = ()
    diagnostics: dict = field(default_factory=dict, compare=False)

    @classmethod
    def infinite(cls, **diagnostics) -> "CriticalMu":
        return cls(None, True, (), diagnostics)

    def admits(self, mu: float, strict: bool = True) -> bool:
        """Whether ``mu`` lies below (``strict``) or at most at ``mu_q``."""
        if self.unbounded:
            return True
        return mu < self.value if strict else mu <= self.value

    def as_record(self) -> dict:
        return {"value": self.value, "unbounded": self.unbounded, "flags": list(self.flags),
                "diagnostics": self.diagnostics}


# ---------------------------------------------------------------------------
# Occupation numbers
# ---------------------------------------------------------------------------


def _exponent(stats: QStatistics, profile: InverseTempProfile, eps):
    """``log gamma_mu(eps)``."""
    eps = np.asarray(eps, dtype=float)
    if stats.convention == CONVENTION_A:
        return np.asarray(profile.tilde_beta(eps), dtype=float) - stats.mu
    return np.asarray(profile.beta(eps), dtype=float) * (eps - stats.mu)


def gamma_mu(stats: QStatistics, profile: InverseTempProfile, eps):
    """The scalar factor multiplying the kernel in the kernel equation."""
    out = np.exp(_exponent(stats, profile, eps))
    return out if np.ndim(out) else float(out)


def denominator(stats: QStatistics, profile: InverseTempProfile, eps):
    """``gamma_mu(eps) - q``, the quantity whose sign separates sub- from
    super-critical chemical potentials."""
    eps = np.asarray(eps, dtype=float)
    if stats.q > 0:
        shift = _critical_shift(stats, profile, eps)
        out = stats.q * np.expm1(shift)
    else:
        out = np.exp(_exponent(stats, profile, eps)) - stats.q
    return out if np.ndim(out) else float(out)


def _occupation_from_exponent(x, q: float, shift: float | None = None):
    """``1 / (exp(x) - q)`` in a cancellation-free form.

    For ``q > 0`` the denominator is ``q * expm1(x - ln q)``; ``shift`` may
    carry a precomputed ``x - ln q`` to avoid rounding at the critical point.
    """
    x = np.asarray(x, dtype=float)
    if q > 0:
        y = np.asarray(x - math.log(q) if shift is None else shift, dtype=float)
        bad = y <= 0
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            far = np.exp(-y) / (-q * np.expm1(-y))
            near = 1.0 / (q * np.expm1(y))
        return np.where(y > 1.0, far, near), bad
    with np.errstate(over="ignore"):
        e = np.exp(-np.abs(x))
        big = e / (1.0 - q * e)
        small = 1.0 / (np.exp(np.minimum(x, 0.0)) - q)
    out = np.where(x >= 0, big, small)
    return out, np.zeros(np.shape(out), dtype=bool)


def _critical_shift(stats: QStatistics, profile: InverseTempProfile, eps):
    """``log gamma - ln q`` evaluated with the ``mu + ln q`` combination
    formed first so that it is exactly zero at ``mu = -ln q``."""
    eps = np.asarray(eps, dtype=float)
    lnq = math.log(stats.q)
    if stats.convention == CONVENTION_A:
        return np.asarray(profile.tilde_beta(eps), dtype=float) - (stats.mu + lnq)
    return np.asarray(profile.beta(eps), dtype=float) * (eps - stats.mu) - lnq


def occupation(stats: QStatistics, profile: InverseTempProfile, eps):
    """Occupation number ``1 / (gamma_mu(eps) - q)``.

    Raises
    ------
    DenominatorNonPositive
        If ``gamma_mu(eps) <= q`` at some requested energy.
    """
    eps = np.asarray(eps, dtype=float)
    if np.any(eps < 0):
        raise ValueError("energy must be non-negative")
    shift = _critical_shift(stats, profile, eps) if stats.q > 0 else None
    out, bad = _occupation_from_exponent(_exponent(stats, profile, eps), stats.q, shift)
    if np.any(bad):
        raise DenominatorNonPositive(
            f"gamma_mu(eps) <= q at eps = {np.atleast_1d(eps)[np.atleast_1d(bad)][0]!r}; "
            "the chemical potential is super-critical or eps lies in the zero set")
    return out if np.ndim(out) else float(out)


# ---------------------------------------------------------------------------
# The function G and critical chemical potentials
# ---------------------------------------------------------------------------


def beta_limsup_at_zero(profile: InverseTempProfile) -> float:
    """Sampled ``limsup_{x -> 0+} beta(x)``; raises :class:`UnboundedAtZero`."""
    est, _ = probe_beta_near_zero(profile)
    return est


def sup_G(profile: InverseTempProfile, mu: float, return_argmax: bool = False, beta0: float | None = None):
    """``G(mu) = sup_{0 < x <= mu} beta(x) (mu - x)``.

    A log-spaced scan of ``2**12`` points is combined with the boundary value
    ``beta(0+) * mu`` and refined by golden-section search around the grid
    maximum.  ``argmax`` is ``0.0`` when the boundary value wins.
    """
    mu = float(mu)
    if not mu > 0:
        raise ValueError("sup_G needs mu > 0")
    if beta0 is None:
        beta0 = beta_limsup_at_zero(profile)
    x = np.geomspace(mu * 2.0**-40, mu, SUP_GRID_POINTS)
    vals = np.asarray(profile.beta(x), dtype=float) * (mu - x)
    i = int(np.argmax(vals))
    best_x, best = float(x[i]), float(vals[i])
    if 0 < i < len(x) - 1:
        def neg(t):
            return -float(profile.beta(t)) * (mu - t)

        t = optimize.golden(neg, brack=(x[i - 1], x[i], x[i + 1]), tol=GOLDEN_TOL)
        if x[i - 1] <= t <= x[i + 1] and -neg(t) >= best:
            best_x, best = float(t), -neg(t)
    boundary = beta0 * mu
    if boundary >= best:
        best_x, best = 0.0, boundary
    return (best, best_x) if return_argmax else best


def critical_mu(q: float, profile: InverseTempProfile, convention: str = CONVENTION_A) -> CriticalMu:
    """Critical chemical potential ``mu_q``.

    Convention A gives ``-ln q`` for ``q in (0, 1]``.  Convention B solves
    ``G(mu) = -ln q`` by doubling an upper bracket and Brent's method; if no
    sign change is found within 60 doublings the result is ``0`` with the
    ``no_solution`` flag.  In both conventions ``q <= 0`` gives the unbounded
    variant.
    """
    q = _check_q(q)
    _check_convention(convention)
    if q <= 0:
        return CriticalMu.infinite()
    if convention == CONVENTION_A:
        return CriticalMu(0.0 - math.log(q))
    try:
        beta0 = beta_limsup_at_zero(profile)
    except UnboundedAtZero as exc:
        return CriticalMu(0.0, False, ("unbounded_at_zero",), {"probe": str(exc)})
    diag = {"beta_limsup_at_zero": beta0, "limsup_at_most_one": bool(beta0 <= 1.0)}
    if q == 1.0:
        return CriticalMu(0.0, False, (), diag)
    target = -math.log(q)

    def F(m):
        return sup_G(profile, m, beta0=beta0) - target

    lo, hi = 0.0, 1.0
    for k in range(MAX_DOUBLINGS + 1):
        if F(hi) > 0:
            break
        lo, hi = hi, 2.0 * hi
    else:
        diag["root_found"] = False
        return CriticalMu(0.0, False, ("no_solution",), diag)
    f_lo = -target if lo == 0.0 else F(lo)
    if f_lo == 0.0:
        root = lo
    else:
        # G(0+) = 0, so F(0) = -target < 0
        root = optimize.brentq(lambda m: -target if m == 0 else F(m), lo, hi, xtol=1e-15, rtol=1e-15, maxiter=200)
    diag["root_found"] = True
    diag["bracket"] = [lo, hi]
    return CriticalMu(float(root), False, (), diag)


# ---------------------------------------------------------------------------
# Densities
# ---------------------------------------------------------------------------


def sphere_area(d: int) -> float:
    """Surface area ``2 pi^{d/2} / Gamma(d/2)`` of the unit sphere in ``R^d``."""
    return 2.0 * math.pi ** (d / 2.0) / special.gamma(d / 2.0)


def _radii(disp: DispersionRelation, energies) -> list[float]:
    return sorted({float(disp.inverse_radial(e)) for e in energies if e >= 0})


def _radial_density(stats: QStatistics, profile: InverseTempProfile, disp: DispersionRelation, d: int,
                    singular_energies, rtol: float) -> IntegralResult:
    q = stats.q
    area = sphere_area(d)
    lnq = math.log(q) if q > 0 else None
    conv_a = stats.convention == CONVENTION_A
    mu = stats.mu
    mu_shift = mu + lnq if lnq is not None else None

    def integrand(r):
        x = float(disp.radial(r))
        if conv_a:
            tb = float(profile.tilde_beta(x))
            expo = tb - mu
            shift = tb - mu_shift if lnq is not None else None
        else:
            expo = float(profile.beta(x)) * (x - mu)
            shift = expo - lnq if lnq is not None else None
        if lnq is not None:
            if shift > 1.0:
                n = math.exp(-shift) / (-q * math.expm1(-shift))
            elif shift > 0:
                n = 1.0 / (q * math.expm1(shift))
            else:
                return math.inf
        elif expo >= 0:
            e = math.exp(-expo)
            n = e / (1.0 - q * e)
        else:
            n = 1.0 / (math.exp(expo) - q)
        return r ** (d - 1) * n

    singular = _radii(disp, singular_energies)
    knots = _radii(disp, profile.knots)
    res = integrate_halfline(integrand, singular=singular, knots=knots, rtol=rtol)
    out = res.scaled(area)
    out.diagnostics["singular_radii"] = singular
    return out


def _resolve_d(disp: DispersionRelation, d):
    d = disp.d if d is None else int(d)
    if d < 1:
        raise ValueError("d must be a positive integer")
    return d


def critical_density(q: float, profile: InverseTempProfile, disp: DispersionRelation, d: int | None = None,
                     convention: str = CONVENTION_A, rtol: float = 1e-12) -> IntegralResult:
    """Momentum integral of the occupation number at ``mu = mu_q``.

    Returns an :class:`IntegralResult` whose verdict is ``"infinite"`` when
    the integral diverges at a singular radius or at infinity.

    Raises
    ------
    QSignInvalid
        For ``q <= 0`` where no condensation threshold exists.
    """
    q = _check_q(q)
    _check_convention(convention)
    if q <= 0:
        raise QSignInvalid("critical densities exist only for q in (0, 1]")
    d = _resolve_d(disp, d)
    mq = critical_mu(q, profile, convention)
    if convention == CONVENTION_A:
        sing = list(profile.zero_set)
    else:
        if mq.value == 0.0 or q == 1.0:
            sing = list(profile.zero_set) + [0.0]
        else:
            _, arg = sup_G(profile, mq.value, return_argmax=True)
            sing = [arg]
    stats = QStatistics(q, mq.value, convention)
    res = _radial_density(stats, profile, disp, d, sing, rtol)
    res.diagnostics["mu_q"] = mq.value
    res.diagnostics["mu_q_flags"] = list(mq.flags)
    return res


def density(stats: QStatistics, profile: InverseTempProfile, disp: DispersionRelation, d: int | None = None,
            rtol: float = 1e-12) -> IntegralResult:
    """Momentum integral of the occupation number at a sub-critical ``mu``.

    Raises
    ------
    SuperCritical
        If ``mu >= mu_q`` for ``q in (0, 1]``.
    """
    d = _resolve_d(disp, d)
    mq = critical_mu(stats.q, profile, stats.convention)
    if not mq.admits(stats.mu):
        raise SuperCritical(f"mu = {stats.mu} is not below mu_q = {mq.value}")
    # near-critical integrands are sharply peaked at the zero set
    sing = [z for z in profile.zero_set]
    return _radial_density(stats, profile, disp, d, sing, rtol)


def fermi_solve_mu(profile: InverseTempProfile, disp: DispersionRelation, d: int | None, rho_target: float,
                   convention: str = CONVENTION_A, rtol: float = 1e-10) -> float:
    """Chemical potential at which the Fermi (``q = -1``) density equals
    ``rho_target``.  The density is strictly increasing and unbounded in
    ``mu``, so an expanding bracket always succeeds."""
    if not rho_target > 0:
        raise ValueError("rho_target must be positive")
    d = _resolve_d(disp, d)

    def f(m):
        return density(QStatistics(-1.0, m, convention), profile, disp, d).value - rho_target

    lo, hi = -1.0, 1.0
    step = 2.0
    while f(lo) > 0:
        lo -= step
        step *= 2.0
    step = 2.0
    while f(hi) < 0:
        hi += step
        step *= 2.0
    return float(optimize.brentq(f, lo, hi, xtol=1e-14, rtol=1e-15, maxiter=300))
