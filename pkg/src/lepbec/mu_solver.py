"""Grand-canonical Bose gas in a Dirichlet box ``[0, L]^d``.

The one-particle spectrum is ``eps_n = (pi |n| / L)**s`` with
``n in {1, 2, ...}^d``.  Densities are normalised per unit volume,
``rho_L(mu) = L**-d * sum_n 1 / (exp(tilde_beta(eps_n) - mu) - 1)``, which
converges to ``(2 pi)**-d`` times the momentum integral of the occupation
number as ``L`` grows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize, signal

from .dispersion import POWER, DispersionRelation
from .errors import CutoffOverflow, SuperCriticalFiniteVolume
from .quadrature import integrate_tail
from .statistics import QStatistics, critical_density, density
from .temperature import InverseTempProfile

MAX_SQUARES = 12_000_000
DEFAULT_LLIST = (32.0, 64.0, 128.0, 256.0, 512.0)
TAIL_RTOL = 1e-12


@dataclass(frozen=True)
class FiniteVolumeModel:
    """Dirichlet box of side ``L``; ``cutoff`` bounds each mode index."""

    L: float
    disp: DispersionRelation
    cutoff: int = 64

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError("box side must be positive")
        if self.disp.kind != POWER:
            raise ValueError("the box model needs a power-law dispersion")
        if int(self.cutoff) != self.cutoff or self.cutoff < 1:
            raise ValueError("cutoff must be a positive integer")

    @property
    def d(self) -> int:
        return self.disp.d

    @property
    def ground_energy(self) -> float:
        return (math.pi * math.sqrt(self.d) / self.L) ** self.disp.s


def _square_counts(N: int, d: int) -> np.ndarray:
    """``c[m]`` = number of ``n in {1..N}^d`` with ``|n|^2 = m``."""
    if d * N * N > MAX_SQUARES:
        raise CutoffOverflow(f"cutoff {N} in d={d} exceeds the lattice-count budget")
    base = np.zeros(N * N + 1)
    base[np.arange(1, N + 1) ** 2] = 1.0
    out = base
    for _ in range(d - 1):
        out = signal.fftconvolve(out, base)
    return np.rint(out).astype(np.int64)


def spectrum(model: FiniteVolumeModel):
    """Distinct eigenvalues and their multiplicities, ascending.

    Returns
    -------
    energies : ndarray
    multiplicities : ndarray of int
    """
    counts = _square_counts(int(model.cutoff), model.d)
    m = np.nonzero(counts)[0]
    energies = (math.pi * np.sqrt(m.astype(float)) / model.L) ** model.disp.s
    return energies, counts[m]


def _tail_estimate(model, profile, mu, N):
    """Continuum bound on the modes with some index beyond ``N``."""
    d, L, s = model.d, model.L, model.disp.s
    # modes outside the cube have |n| > N; bound by the radial integral
    k0 = math.pi * N / L

    def f(k):
        t = float(profile.tilde_beta(k**s)) - mu
        return k ** (d - 1) * math.exp(-t) / -math.expm1(-t)

    res = integrate_tail(f, k0, rtol=1e-6, max_levels=60)
    # (L/pi)^d modes per unit k-volume on the positive orthant
    area = 2.0 * math.pi ** (d / 2) / math.gamma(d / 2) / 2**d
    return res.value * area * (L / math.pi) ** d if res.finite else math.inf


def _mode_sum(model, profile, mu, energies, mult):
    """``sum_n 1/(exp(tb_n - mu) - 1)`` with differences taken against the
    ground level to keep precision near the pole."""
    tb = np.asarray(profile.tilde_beta(energies), dtype=float)
    u = tb[0] - mu
    if not u > 0:
        raise SuperCriticalFiniteVolume(f"mu = {mu} is not below tilde_beta(eps_0) = {tb[0]}")
    y = (tb - tb[0]) + u
    with np.errstate(over="ignore"):
        occ = np.where(y > 1.0, np.exp(-y) / -np.expm1(-np.minimum(y, 700.0)), 1.0 / np.expm1(np.minimum(y, 1.0)))
    return occ * mult


def _auto_cutoff(model, profile, mu):
    N = max(int(model.cutoff), 8)
    while True:
        m = FiniteVolumeModel(model.L, model.disp, N)
        e, mult = spectrum(m)
        total = float(np.sum(_mode_sum(m, profile, mu, e, mult)))
        if _tail_estimate(m, profile, mu, N) <= TAIL_RTOL * total:
            return m, e, mult
        N *= 2


def finite_density(model: FiniteVolumeModel, profile: InverseTempProfile, mu: float, auto_cutoff: bool = False) -> float:
    """Box density per unit volume at chemical potential ``mu``.

    Raises
    ------
    SuperCriticalFiniteVolume
        If ``mu >= tilde_beta(eps_0)``.
    CutoffOverflow
        If the dropped modes exceed ``1e-12`` of the retained sum and
        ``auto_cutoff`` is off.
    """
    if auto_cutoff:
        model, e, mult = _auto_cutoff(model, profile, mu)
    else:
        e, mult = spectrum(model)
    occ = _mode_sum(model, profile, mu, e, mult)
    total = float(np.sum(occ))
    if not auto_cutoff:
        tail = _tail_estimate(model, profile, mu, model.cutoff)
        if tail > TAIL_RTOL * total:
            raise CutoffOverflow(f"cutoff {model.cutoff} drops {tail:.3g} of {total:.3g}")
    return total / model.L**model.d


def solve_mu(model: FiniteVolumeModel, profile: InverseTempProfile, rho_target: float, auto_cutoff: bool = True):
    """Unique ``mu < tilde_beta(eps_0)`` with ``finite_density = rho_target``.

    The unknown is ``u = tilde_beta(eps_0) - mu > 0``, solved on ``log u`` so
    that the pole at the ground level is resolved to full precision.
    """
    if not rho_target > 0:
        raise ValueError("rho_target must be positive")
    tb0 = float(profile.tilde_beta(model.ground_energy))
    # the Boltzmann regime is the most demanding for the relative tail, so a
    # cutoff chosen there is valid for every larger mu
    m, e, mult = _auto_cutoff(model, profile, tb0 - 50.0)
    vol = model.L**model.d
    tb = np.asarray(profile.tilde_beta(e), dtype=float)
    diff = tb - tb[0]

    def rho_of_logu(lu):
        y = diff + math.exp(lu)
        with np.errstate(over="ignore"):
            occ = np.where(y > 1.0, np.exp(-y) / -np.expm1(-np.minimum(y, 700.0)), 1.0 / np.expm1(np.minimum(y, 1.0)))
        return float(np.dot(occ, mult)) / vol

    def f(lu):
        return math.log(rho_of_logu(lu)) - math.log(rho_target)

    lo, hi = -10.0, 1.0
    while f(lo) < 0:
        lo -= 10.0
    while f(hi) > 0:
        hi += 2.0 if hi < 8 else hi
    lu = optimize.brentq(f, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=500)
    u = math.exp(lu)
    return float(tb0 - u), {"cutoff": m.cutoff, "u": u, "tilde_beta_ground": tb0,
                            "residual": rho_of_logu(lu) / rho_target - 1.0,
                            "ground_occupation": float(1.0 / math.expm1(u)) / vol}


def box_critical_density(profile, disp, d=None) -> float:
    """Infinite-volume critical density in box normalisation, ``(2 pi)**-d`` times
    the momentum-space critical density."""
    d = disp.d if d is None else d
    return critical_density(1.0, profile, disp, d).value / (2 * math.pi) ** d


def thermodynamic_sweep(profile: InverseTempProfile, disp: DispersionRelation, rho_target: float,
                        Llist=DEFAULT_LLIST):
    """Solve for ``mu(L)`` along a sequence of boxes.

    Returns a list of dicts with keys ``L``, ``mu``, ``rho_c``,
    ``condensate_estimate`` (ground-mode occupation per volume),
    ``mu_ceiling`` (``tilde_beta(eps_0)``) and ``residual``.
    """
    rc = box_critical_density(profile, disp)
    rows = []
    for L in Llist:
        model = FiniteVolumeModel(float(L), disp)
        mu, info = solve_mu(model, profile, rho_target)
        rows.append({"L": float(L), "mu": mu, "rho_c": rc, "condensate_estimate": info["ground_occupation"],
                     "mu_ceiling": info["tilde_beta_ground"], "residual": info["residual"], "cutoff": info["cutoff"]})
    return rows


def infinite_volume_mu(profile, disp, rho_target) -> float:
    """Sub-critical infinite-volume ``mu`` with box-normalised density ``rho_target``."""
    scale = (2 * math.pi) ** disp.d

    def f(m):
        return density(QStatistics(1.0, m), profile, disp).value / scale - rho_target

    lo = -1.0
    while f(lo) > 0:
        lo *= 2.0
    hi = -1e-300
    return float(optimize.brentq(f, lo, hi, xtol=1e-14, rtol=1e-13))
