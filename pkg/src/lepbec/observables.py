"""Physical read-outs of two-point kernels.

Local densities pair the kernel with the plane wave ``exp(-i p.x)``.  Since
that function has unit modulus the diagonal part contributes the momentum
integral of the occupation number, independent of ``x``; point-like singular
parts contribute their total mass and a gradient part on the axes ``J``
contributes ``D sum_{j in J} x_j^2``.  These contributions are evaluated in
closed form rather than by quadrature against a non-decaying function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import qmc

from . import kernel_engine as ke
from .quadrature import FINITE
from .statistics import critical_density, density
from .testfunctions import Bump, PhaseModulated, PlaneWave, random_rotation, rotate


@dataclass
class DensityProfileResult:
    bulk: float | None
    bulk_verdict: str
    point_mass: float
    gradient: dict  # axis -> coefficient

    def condensate(self, x) -> float:
        x = np.asarray(x, dtype=float)
        val = self.point_mass
        for j, D in self.gradient.items():
            val = val + D * x[..., j] ** 2
        return val

    def total(self, x):
        if self.bulk is None:
            return math.inf
        return self.bulk + self.condensate(x)


def _bulk(kernel: ke.TwoPointKernel):
    if not kernel.diagonal:
        return 0.0, FINITE
    if kernel.is_critical and kernel.stats.q > 0:
        res = critical_density(kernel.stats.q, kernel.profile, kernel.disp, convention=kernel.stats.convention)
    else:
        res = density(kernel.stats, kernel.profile, kernel.disp)
    return (res.value if res.finite else None), res.verdict


def density_profile(kernel: ke.TwoPointKernel) -> DensityProfileResult:
    bulk, verdict = _bulk(kernel)
    mass = 0.0
    grad: dict = {}
    for part in kernel.singular:
        if isinstance(part, ke.GradientPointMass):
            for j in part.axis_list(kernel.d):
                grad[j] = grad.get(j, 0.0) + part.D
        else:
            mass += part.mass
    return DensityProfileResult(bulk, verdict, mass, grad)


def local_density(kernel: ke.TwoPointKernel, x):
    """``rho(x)``; ``inf`` when the bulk density diverges."""
    return density_profile(kernel).total(x)


def gradient_shift(kernel: ke.TwoPointKernel, x, y) -> float:
    """Change of the local density at ``x`` after translating the state by
    ``y``: the gradient at 0 of the plane wave picks up ``x + y``."""
    prof = density_profile(kernel)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return float(prof.condensate(x + y) - prof.condensate(x))


def translation_shift_law(kernel: ke.TwoPointKernel, y, x=None):
    """Return ``(predicted, measured)`` shifts of the local density at ``x``
    (default the origin) under translation by ``y``.

    ``measured`` pairs the gradient parts with the translated plane waves
    ``exp(-i p.(x + y))`` through their analytic gradients at ``p = 0``;
    ``predicted`` is ``D sum_{j in J} y_j^2`` at the origin and
    ``D sum_j ((x + y)_j^2 - x_j^2)`` elsewhere.
    """
    d = kernel.d
    x = np.zeros(d) if x is None else np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    parts = [p for p in kernel.singular if isinstance(p, ke.GradientPointMass)]
    if not parts:
        raise ValueError("kernel has no gradient point mass")
    z = np.zeros(d)

    def grad_term(point):
        w = PlaneWave(tuple(point))
        g = np.asarray(w.grad(z)).reshape(d)
        return sum(p.D * float(np.sum(np.abs(g[list(p.axis_list(d))]) ** 2)) for p in parts)

    measured = grad_term(x + y) - grad_term(x)
    predicted = sum(p.D * float(np.sum((x + y)[list(p.axis_list(d))] ** 2 - x[list(p.axis_list(d))] ** 2))
                    for p in parts)
    return predicted, measured


def meniscus_profile(kernel: ke.TwoPointKernel, xs, ys, zs=(0.0,)):
    """Condensate density ``D (x^2 + y^2)`` on a grid, shape ``(nx, ny, nz)``."""
    if kernel.d != 3:
        raise ValueError("the meniscus profile lives in d = 3")
    parts = [p for p in kernel.singular if isinstance(p, ke.GradientPointMass)]
    if not parts or any(p.axis_list(3) != (0, 1) for p in parts):
        raise ValueError("the meniscus profile needs gradient parts on axes {1, 2}")
    X, Y, Z = np.meshgrid(np.asarray(xs, float), np.asarray(ys, float), np.asarray(zs, float), indexing="ij")
    pts = np.stack([X, Y, Z], axis=-1)
    prof = density_profile(kernel.with_singular(parts))
    return prof.condensate(pts)


def mean_density(kernel: ke.TwoPointKernel, R: float, m: int = 14, seed: int = 0) -> float:
    """Mean of the local density over the ball of radius ``R``.

    Uses ``2**m`` scrambled Sobol points in the cube ``[-R, R]^d`` and keeps
    those inside the ball, so the estimate is deterministic for a seed.
    """
    d = kernel.d
    prof = density_profile(kernel)
    u = qmc.Sobol(d, scramble=True, seed=seed).random_base2(m)
    pts = (2.0 * u - 1.0) * R
    pts = pts[np.sum(pts * pts, axis=1) <= R * R]
    return float(np.mean(prof.total(pts)))


def growth_exponent(kernel: ke.TwoPointKernel, radii) -> float:
    """Slope of the log of the condensate part of the mean density against
    ``log R``."""
    prof = density_profile(kernel)
    base = prof.bulk + prof.point_mass if prof.bulk is not None else prof.point_mass
    radii = np.asarray(radii, dtype=float)
    means = np.array([mean_density(kernel, R) for R in radii]) - base
    slope, _ = np.polyfit(np.log(radii), np.log(means), 1)
    return float(slope)


# ---------------------------------------------------------------------------
# Symmetry checks
# ---------------------------------------------------------------------------


def random_bump(rng: np.random.Generator, d: int, scale: float = 1.0, phase: bool = True):
    c = rng.uniform(-scale, scale, d)
    r = rng.uniform(0.4, 0.9) * scale
    f = Bump(tuple(c), r)
    if phase:
        f = PhaseModulated(f, tuple(rng.uniform(-2, 2, d)))
    return f


def rotation_invariance_deviation(kernel: ke.TwoPointKernel, trials: int = 10, seed: int = 0, scale: float = 1.0,
                                  tests=None) -> float:
    """Largest ``|pair(f_R, g_R) - pair(f, g)|`` over random rotations and
    random test pairs (or the given ``tests`` list of ``(f, g)``)."""
    if kernel.d not in (2, 3):
        raise ValueError("rotation checks need d in {2, 3}")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(trials):
        if tests is not None:
            f, g = tests[i % len(tests)]
        else:
            f = random_bump(rng, kernel.d, scale)
            g = random_bump(rng, kernel.d, scale)
        R = random_rotation(rng, kernel.d)
        a = ke.pair(kernel, f, g)
        b = ke.pair(kernel, rotate(f, R), rotate(g, R))
        worst = max(worst, abs(a - b))
    return worst


def point_mass_witness(kernel: ke.TwoPointKernel, part: ke.PointMass):
    """Closed-form test pair and rotation exhibiting broken rotation symmetry.

    ``f = g`` is a bump centred on the atom with radius below ``|k|``; the
    rotation ``R`` sends ``k`` to ``-k``, outside the support.  Returns
    ``(f, g, R, lower_bound)`` with lower bound ``D |f(k)|^2``.
    """
    d = kernel.d
    k = np.asarray(part.k)
    kn = float(np.linalg.norm(k))
    if kn == 0:
        raise ValueError("the witness needs an off-origin point mass")
    f = Bump(tuple(k), 0.5 * kn)
    # a rotation by pi in a plane containing k maps k to -k
    a = k / kn
    trial = np.eye(d)[int(np.argmin(np.abs(a)))]
    b = trial - (trial @ a) * a
    b /= np.linalg.norm(b)
    R = np.eye(d) - 2.0 * np.outer(a, a) - 2.0 * np.outer(b, b)
    bound = part.D * abs(f(tuple(k))) ** 2
    return f, f, R, bound


# ---------------------------------------------------------------------------
# Condensate maps
# ---------------------------------------------------------------------------


def mollifier(p, eps: float):
    """Normalised Gaussian ``(2 pi eps^2)^(-d/2) exp(-|p|^2 / (2 eps^2))``."""
    p = np.asarray(p, dtype=float)
    d = p.shape[-1]
    return (2 * math.pi * eps * eps) ** (-d / 2) * np.exp(-np.sum(p * p, axis=-1) / (2 * eps * eps))


def mollifier_grad(p, eps: float):
    p = np.asarray(p, dtype=float)
    return -p / (eps * eps) * mollifier(p, eps)[..., None]


def condensate_map(kernel: ke.TwoPointKernel, eps: float, k1, k2):
    """Mollified condensate density on the ``(k1, k2)`` plane at ``k3 = 0``.

    Point masses give ``sum D delta_eps(k - k_atom)^2`` and gradient parts give
    ``D sum_{j in J} (d_j delta_eps(k))^2``.  Returns an array of shape
    ``(len(k1), len(k2))``.
    """
    if not eps > 0:
        raise ValueError("mollifier width must be positive")
    d = kernel.d
    if d < 2:
        raise ValueError("maps need d >= 2")
    K1, K2 = np.meshgrid(np.asarray(k1, float), np.asarray(k2, float), indexing="ij")
    pts = np.zeros(K1.shape + (d,))
    pts[..., 0], pts[..., 1] = K1, K2
    field_ = np.zeros(K1.shape)
    supported = False
    for part in kernel.singular:
        if isinstance(part, ke.PointMass):
            field_ += part.D * mollifier(pts - np.asarray(part.k), eps) ** 2
            supported = True
        elif isinstance(part, ke.GradientPointMass):
            g = mollifier_grad(pts, eps)
            ax = list(part.axis_list(d))
            field_ += part.D * np.sum(g[..., ax] ** 2, axis=-1)
            supported = True
        else:
            raise ValueError(f"maps are defined for point and gradient masses, not {type(part).__name__}")
    if not supported:
        raise ValueError("kernel has no singular part to map")
    return field_


def ring_radius(field_, k1, k2) -> float:
    """Radius of the azimuthally averaged maximum of a map, refined by a
    parabola through the peak bin."""
    K1, K2 = np.meshgrid(np.asarray(k1, float), np.asarray(k2, float), indexing="ij")
    r = np.hypot(K1, K2).ravel()
    v = np.asarray(field_).ravel()
    step = min(np.diff(k1).min(), np.diff(k2).min())
    edges = np.arange(0.0, r.max() + step, step)
    idx = np.digitize(r, edges) - 1
    prof = np.bincount(idx, weights=v, minlength=len(edges)) / np.maximum(np.bincount(idx, minlength=len(edges)), 1)
    rc = np.bincount(idx, weights=r, minlength=len(edges)) / np.maximum(np.bincount(idx, minlength=len(edges)), 1)
    i = int(np.argmax(prof))
    if 0 < i < len(prof) - 1 and prof[i + 1] > 0:
        y0, y1, y2 = prof[i - 1], prof[i], prof[i + 1]
        x0, x1, x2 = rc[i - 1], rc[i], rc[i + 1]
        A = np.array([[x0 * x0, x0, 1], [x1 * x1, x1, 1], [x2 * x2, x2, 1]])
        a, b, _ = np.linalg.solve(A, [y0, y1, y2])
        if a < 0:
            return float(-b / (2 * a))
    return float(rc[i])
