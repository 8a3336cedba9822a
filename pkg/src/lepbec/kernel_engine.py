"""Two-point kernels of quasi-free q-particle states and their pairings.

A kernel is the distribution ``F(p, k) = omega(a^dagger(p) a(k))``.  It has a
diagonal part ``delta(p - k) n(h(p))`` with the occupation number ``n`` and an
optional list of singular parts concentrated on spheres where the scalar
factor ``gamma_mu(h(p))`` equals ``q``.  The pairing with test functions is

    pair(F, f, g) = integral f(p) conj(g(p)) n(h(p)) dp + singular terms.

All diagonal integrals for a given pair of test functions use a single fixed
node set in spherical coordinates around the origin, with radial grading
toward the singular spheres.  Because the node set depends only on the
supports, the three integrals entering the kernel-equation residual are
computed on identical nodes and their diagonal contributions cancel to
rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import statistics as st
from .dispersion import POWER, DispersionRelation
from .errors import (DenominatorNonPositive, DomainViolation, NonIntegrable, PreconditionUnverified,
                     SuperCritical, UnsupportedDimension)
from .quadrature import composite_gl, fixed_gl_integrator, integrate_interval, product_weights, radial_rule
from .temperature import Constant, InverseTempProfile, PowerLog, ZeroAt
from .testfunctions import TestFunction

ZERO_SET_TOL = 1e-10
MU_TOL = 1e-12
END_FLOOR = 1e-6  # innermost graded interval, relative to the graded width


# ---------------------------------------------------------------------------
# Singular parts
# ---------------------------------------------------------------------------


def _vec(k):
    return tuple(float(x) for x in np.atleast_1d(np.asarray(k, dtype=float)))


def _nonneg(D):
    D = float(D)
    if not D >= 0:
        raise ValueError("singular weights must be non-negative")
    return D


@dataclass(frozen=True)
class PointMass:
    """``D delta_k (x) delta_k``."""

    D: float
    k: tuple

    def __post_init__(self):
        object.__setattr__(self, "D", _nonneg(self.D))
        object.__setattr__(self, "k", _vec(self.k))

    @property
    def mass(self):
        return self.D


@dataclass(frozen=True)
class SphereAverage:
    """``D`` times the normalised rotation invariant measure on ``|p| = radius``."""

    D: float
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "D", _nonneg(self.D))
        if self.radius < 0:
            raise ValueError("sphere radius must be non-negative")

    @property
    def mass(self):
        return self.D


@dataclass(frozen=True)
class SurfaceAtoms:
    """Finitely many atoms ``sum_i w_i delta_{p_i} (x) delta_{p_i}``."""

    atoms: tuple

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple((_nonneg(w), _vec(p)) for w, p in self.atoms))

    @property
    def mass(self):
        return sum(w for w, _ in self.atoms)


@dataclass(frozen=True)
class GradientPointMass:
    """``D sum_{j in axes} d_j f(0) conj(d_j g(0))``; ``axes=None`` means all."""

    D: float
    axes: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "D", _nonneg(self.D))
        if self.axes is not None:
            object.__setattr__(self, "axes", tuple(sorted({int(a) for a in self.axes})))

    def axis_list(self, d):
        ax = tuple(range(d)) if self.axes is None else self.axes
        if any(a < 0 or a >= d for a in ax):
            raise ValueError(f"axes {ax} out of range for d={d}")
        return ax

    @property
    def mass(self):
        return 0.0


SINGULAR_TYPES = (PointMass, SphereAverage, SurfaceAtoms, GradientPointMass)


# ---------------------------------------------------------------------------
# Kernel
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Resolution:
    """Fixed-rule sizes: radial panels and order, polar panels, azimuthal
    nodes, and the order and ratio of the geometric panels at singular radii."""

    radial_panels: int = 8
    order: int = 16
    polar_panels: int = 4
    azimuth: int = 48
    graded_order: int = 12
    grading: float = 0.25

    def scaled(self, factor: int) -> "Resolution":
        return Resolution(self.radial_panels * factor, self.order, self.polar_panels * factor, self.azimuth * factor,
                          self.graded_order, self.grading)


@dataclass(frozen=True, eq=False)
class TwoPointKernel:
    """Diagonal occupation part plus singular parts.

    Raises
    ------
    SuperCritical
        If ``mu`` exceeds the critical chemical potential (no kernel with
        such a chemical potential exists).
    """

    stats: st.QStatistics
    profile: InverseTempProfile
    disp: DispersionRelation
    singular: tuple = ()
    diagonal: bool = True
    resolution: Resolution = Resolution()
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "singular", tuple(self.singular))
        for part in self.singular:
            if not isinstance(part, SINGULAR_TYPES):
                raise TypeError(f"unknown singular part {part!r}")
            if isinstance(part, PointMass) and len(part.k) != self.d:
                raise ValueError("point mass location has the wrong dimension")
            if isinstance(part, SurfaceAtoms) and any(len(p) != self.d for _, p in part.atoms):
                raise ValueError("atom location has the wrong dimension")
            if isinstance(part, GradientPointMass):
                part.axis_list(self.d)
        mq = self.critical_mu
        if not mq.admits(self.stats.mu, strict=False):
            raise SuperCritical(f"mu = {self.stats.mu} exceeds mu_q = {mq.value}; no kernel exists")

    @property
    def d(self) -> int:
        return self.disp.d

    @property
    def critical_mu(self) -> st.CriticalMu:
        if "mu_q" not in self._cache:
            self._cache["mu_q"] = st.critical_mu(self.stats.q, self.profile, self.stats.convention)
        return self._cache["mu_q"]

    @property
    def is_critical(self) -> bool:
        mq = self.critical_mu
        return (not mq.unbounded) and abs(self.stats.mu - mq.value) <= MU_TOL * max(1.0, abs(mq.value))

    def singular_energies(self) -> list[float]:
        """Energies where ``gamma_mu`` can reach ``q``: the zero set, or the
        maximiser of ``G`` under convention B."""
        out = set(float(x) for x in self.profile.zero_set)
        if self.stats.convention == st.CONVENTION_B and self.is_critical and self.critical_mu.value > 0:
            _, arg = st.sup_G(self.profile, self.critical_mu.value, return_argmax=True)
            out.add(float(arg))
        return sorted(out)

    def singular_radii(self) -> list[float]:
        return sorted({float(self.disp.inverse_radial(x)) for x in self.singular_energies()})

    def knot_radii(self) -> list[float]:
        return sorted({float(self.disp.inverse_radial(x)) for x in self.profile.knots})

    # -- scalar fields on radii -----------------------------------------
    def energy(self, r):
        return self.disp.radial(np.asarray(r, dtype=float))

    def occupation_radial(self, r):
        return np.asarray(st.occupation(self.stats, self.profile, self.energy(r)), dtype=float)

    def gamma_radial(self, r):
        return np.asarray(st.gamma_mu(self.stats, self.profile, self.energy(r)), dtype=float)

    def gamma_at(self, p):
        p = np.asarray(p, dtype=float)
        return float(st.gamma_mu(self.stats, self.profile, float(self.disp.evaluate(p))))

    def with_singular(self, parts) -> "TwoPointKernel":
        return TwoPointKernel(self.stats, self.profile, self.disp, tuple(parts), self.diagonal, self.resolution)


# ---------------------------------------------------------------------------
# Fixed node sets
# ---------------------------------------------------------------------------


@dataclass
class _Rule:
    r: np.ndarray          # radial nodes
    wr: np.ndarray         # radial weights times r^(d-1)
    dirs: np.ndarray       # unit directions, shape (n_a, d)
    wa: np.ndarray         # angular weights
    frame: tuple = ()
    ends: tuple = ()       # innermost intervals (e, b) at singular radii, product-integrated

    @property
    def size(self):
        return self.r.size * self.wa.size

    def points(self):
        return self.r[:, None, None] * self.dirs[None, :, :]


def _frame(axis):
    """Orthonormal frame ``(axis, e1, e2)`` built deterministically."""
    a = np.asarray(axis, dtype=float)
    a = a / np.linalg.norm(a)
    trial = np.eye(3)[int(np.argmin(np.abs(a)))]
    e1 = trial - (trial @ a) * a
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(a, e1)
    return a, e1, e2


def _angular_rule(d: int, axis, half_angle: float, res: Resolution):
    n = res.order
    if d == 1:
        return np.array([[1.0], [-1.0]]), np.ones(2)
    if d == 2:
        if axis is None or half_angle >= math.pi:
            phi = 2.0 * math.pi * np.arange(2 * res.azimuth) / (2 * res.azimuth)
            w = np.full(phi.size, 2.0 * math.pi / phi.size)
        else:
            phi0 = math.atan2(axis[1], axis[0])
            phi, w = composite_gl(phi0 - half_angle, phi0 + half_angle, res.polar_panels, n)
        return np.stack([np.cos(phi), np.sin(phi)], axis=-1), w
    if d == 3:
        if axis is None:
            axis = (0.0, 0.0, 1.0)
        a, e1, e2 = _frame(axis)
        theta_max = min(half_angle, math.pi)
        th, wt = composite_gl(0.0, theta_max, res.polar_panels, n)
        phi = 2.0 * math.pi * np.arange(res.azimuth) / res.azimuth
        wp = 2.0 * math.pi / res.azimuth
        ct, sth = np.cos(th), np.sin(th)
        dirs = (ct[:, None, None] * a[None, None, :]
                + sth[:, None, None] * (np.cos(phi)[None, :, None] * e1 + np.sin(phi)[None, :, None] * e2))
        w = (sth * wt)[:, None] * np.full(phi.size, wp)[None, :]
        return dirs.reshape(-1, 3), w.ravel()
    raise UnsupportedDimension(f"full pairings are implemented for d <= 3, got d={d}")


def _ball_geometry(c, rho):
    c = np.asarray(c, dtype=float)
    dist = float(np.linalg.norm(c))
    lo = max(0.0, dist - rho)
    hi = dist + rho
    half = math.asin(min(1.0, rho / dist)) if dist > rho else math.pi
    return lo, hi, half, (c / dist if dist > 0 else None)


def _support_window(f: TestFunction, g: TestFunction):
    """Radial range, angular axis and half angle covering ``supp f cap supp g``."""
    bf, bg = f.balls(), g.balls()
    if bf is None and bg is None:
        raise DomainViolation("at least one test function must have compact support")
    ranges = []
    candidates = []
    for b in (bf, bg):
        if b is None:
            continue
        geo = [_ball_geometry(c, r) for c, r in b]
        ranges.append((min(x[0] for x in geo), max(x[1] for x in geo)))
        if len(geo) == 1:
            candidates.append(geo[0])
    lo = max(r[0] for r in ranges)
    hi = min(r[1] for r in ranges)
    if candidates:
        best = min(candidates, key=lambda x: (x[2], x[1] - x[0]))
        axis, half = best[3], best[2]
        if axis is None:
            half = math.pi
    else:
        axis, half = None, math.pi
    return lo, hi, axis, half


def build_rule(kernel: TwoPointKernel, f: TestFunction, g: TestFunction, resolution: Resolution | None = None) -> _Rule:
    """Shared node set for all diagonal integrals of the pair ``(f, g)``."""
    res = kernel.resolution if resolution is None else resolution
    d = kernel.d
    if f.d != d or g.d != d:
        raise ValueError("test function dimension does not match the kernel")
    if d > 3:
        raise UnsupportedDimension(f"full pairings are implemented for d <= 3, got d={d}")
    lo, hi, axis, half = _support_window(f, g)
    if hi <= lo:
        return _Rule(np.empty(0), np.empty(0), np.zeros((1, d)), np.zeros(1))
    r, w, ends = radial_rule(lo, hi, kernel.singular_radii(), kernel.knot_radii(), n=res.order,
                             panels=res.radial_panels, sigma=res.grading, graded_order=res.graded_order,
                             end_floor=END_FLOOR)
    dirs, wa = _angular_rule(d, axis, half, res)
    return _Rule(r, w * r ** (d - 1), dirs, wa, (lo, hi, half), tuple(ends))


def _end_weights(kernel: TwoPointKernel, e: float, b: float):
    """Product-integration nodes and weights on ``(e, b)`` for the densities
    ``r^(d-1) n``, ``r^(d-1) gamma n`` and ``r^(d-1)``; cached per interval."""
    key = ("end", e, b)
    if key not in kernel._cache:
        d = kernel.d

        def stacked(r):
            r = np.asarray(r, dtype=float)
            base = r ** (d - 1)
            n = base * kernel.occupation_radial(r)
            return np.stack([n, n * kernel.gamma_radial(r), base])

        pw = product_weights(stacked, e, b)
        if pw is None:
            nodes, W = product_weights(lambda r: np.asarray(r, dtype=float) ** (d - 1), e, b)
            out = (None, None, W)
        else:
            nodes, W = pw
            out = (W[0], W[1], W[2])
        kernel._cache[key] = (nodes, *out)
    return kernel._cache[key]


def _local_integrability(kernel: TwoPointKernel, lo: float, hi: float):
    """Raise :class:`NonIntegrable` if the radial density ``r^(d-1) n(h(r))``
    fails to be integrable at a singular radius inside ``[lo, hi]``.

    Integrability is a property of the singular radius alone, so the verdict
    is computed once per radius on a fixed neighbourhood and cached."""
    if not kernel.diagonal:
        return
    d = kernel.d

    def f_vec(r):
        r = np.asarray(r, dtype=float)
        try:
            return r ** (d - 1) * kernel.occupation_radial(r)
        except DenominatorNonPositive:
            return np.full(r.shape, np.inf)

    for r0 in kernel.singular_radii():
        if not lo <= r0 <= hi:
            continue
        key = ("integrable", r0)
        if key not in kernel._cache:
            delta = 0.5 * r0 if r0 > 0 else 1.0
            res = integrate_interval(None, max(0.0, r0 - delta), r0 + delta, singular=[r0], rtol=1e-8,
                                     integrator=fixed_gl_integrator(f_vec))
            kernel._cache[key] = res.finite
        if not kernel._cache[key]:
            raise NonIntegrable(f"the diagonal density is not locally integrable at radius {r0:.6g}")


# ---------------------------------------------------------------------------
# Pairings
# ---------------------------------------------------------------------------


def _gamma_gradient_vanishes(kernel: TwoPointKernel) -> None:
    """Check analytically that ``grad gamma_mu(h(p))`` vanishes at ``p = 0``."""
    disp, prof = kernel.disp, kernel.profile
    if disp.kind == POWER:
        s = disp.s
    else:
        s = 2.0 if disp.m > 0 else 1.0
    if kernel.stats.convention == st.CONVENTION_B and not isinstance(prof, Constant):
        raise DomainViolation("analytic derivative of gamma at 0 is available for constant beta in convention B")
    if isinstance(prof, Constant):
        ok = s > 1
    elif isinstance(prof, PowerLog):
        ok = s * (prof.alpha0 + 1.0) > 1
    elif isinstance(prof, ZeroAt) and prof.x0 == 0:
        ok = s * prof.a > 1
    else:
        raise DomainViolation(f"no analytic derivative of gamma at 0 for {type(prof).__name__}")
    if not ok:
        raise DomainViolation("gamma_mu(h(p)) * g(p) is not differentiable at p = 0 with vanishing gradient here")


@dataclass
class _Pieces:
    """Diagonal integrals sharing one node set, plus singular contributions."""

    occ: complex = 0.0        # with occupation number
    occ_gamma: complex = 0.0  # with occupation times gamma
    plain: complex = 0.0      # plain L2 pairing
    sing: complex = 0.0
    sing_gamma: complex = 0.0


def _gradient_at_origin(f: TestFunction, d: int):
    return np.asarray(f.grad(np.zeros(d)), dtype=complex).reshape(d)


def _singular_pieces(kernel: TwoPointKernel, f, g, rule_frame, need_gamma: bool):
    d = kernel.d
    total = 0.0 + 0.0j
    total_g = 0.0 + 0.0j
    for part in kernel.singular:
        if isinstance(part, PointMass):
            v = part.D * f(part.k) * np.conj(g(part.k))
            total += v
            if need_gamma:
                total_g += v * kernel.gamma_at(part.k)
        elif isinstance(part, SurfaceAtoms):
            for w, p in part.atoms:
                v = w * f(p) * np.conj(g(p))
                total += v
                if need_gamma:
                    total_g += v * kernel.gamma_at(p)
        elif isinstance(part, SphereAverage):
            v = part.D * sphere_mean(f, g, part.radius, kernel.resolution)
            total += v
            if need_gamma:
                total_g += v * float(kernel.gamma_radial(part.radius))
        elif isinstance(part, GradientPointMass):
            ax = list(part.axis_list(d))
            df = _gradient_at_origin(f, d)[ax]
            dg = _gradient_at_origin(g, d)[ax]
            v = part.D * np.sum(df * np.conj(dg))
            total += v
            if need_gamma:
                _gamma_gradient_vanishes(kernel)
                # grad(gamma g)(0) = gamma(0) grad g(0) because grad gamma(0) = 0
                total_g += v * float(kernel.gamma_radial(0.0))
    return complex(total), complex(total_g)


def sphere_mean(f: TestFunction, g: TestFunction, radius: float, resolution: Resolution = Resolution()) -> complex:
    """Average of ``f conj(g)`` over the sphere ``|p| = radius``."""
    d = f.d
    if radius == 0:
        z = np.zeros(d)
        return complex(f(z) * np.conj(g(z)))
    if d > 3:
        raise UnsupportedDimension("sphere averages are implemented for d <= 3")
    try:
        _, _, axis, half = _support_window(f, g)
    except DomainViolation:
        axis, half = None, math.pi
    dirs, wa = _angular_rule(d, axis, half, resolution)
    pts = radius * dirs
    total = 2.0 if d == 1 else (2.0 * math.pi if d == 2 else 4.0 * math.pi)
    return complex(np.sum(wa * f._eval(pts) * np.conj(g._eval(pts))) / total)


def _pieces(kernel: TwoPointKernel, f, g, need_gamma=False, need_plain=False, rule=None) -> _Pieces:
    out = _Pieces()
    if kernel.diagonal or need_plain:
        rule = build_rule(kernel, f, g) if rule is None else rule
        if rule.r.size:
            if kernel.diagonal:
                _local_integrability(kernel, rule.frame[0], rule.frame[1])
            pts = rule.points()
            prod = f._eval(pts) * np.conj(g._eval(pts))
            ang = prod @ rule.wa
            if need_plain:
                out.plain = complex(np.dot(rule.wr, ang))
            if kernel.diagonal:
                n = kernel.occupation_radial(rule.r)
                out.occ = complex(np.dot(rule.wr * n, ang))
                if need_gamma:
                    out.occ_gamma = complex(np.dot(rule.wr * n * kernel.gamma_radial(rule.r), ang))
            for e, b in rule.ends:
                nodes, w_occ, w_occ_gamma, w_plain = _end_weights(kernel, e, b)
                pts_e = nodes[:, None, None] * rule.dirs[None, :, :]
                ang_e = (f._eval(pts_e) * np.conj(g._eval(pts_e))) @ rule.wa
                if need_plain:
                    out.plain += complex(np.dot(w_plain, ang_e))
                if kernel.diagonal:
                    if w_occ is None or (need_gamma and w_occ_gamma is None):
                        raise NonIntegrable(f"the diagonal density is not integrable at radius {e:.6g}")
                    out.occ += complex(np.dot(w_occ, ang_e))
                    if need_gamma:
                        out.occ_gamma += complex(np.dot(w_occ_gamma, ang_e))
    out.sing, out.sing_gamma = _singular_pieces(kernel, f, g, None, need_gamma)
    return out


def pair(kernel: TwoPointKernel, f: TestFunction, g: TestFunction) -> complex:
    """``omega(a^dagger(f) a(g))``, linear in ``f`` and antilinear in ``g``.

    Raises
    ------
    UnsupportedDimension
        For ``d > 3``.
    NonIntegrable
        If the diagonal density is not locally integrable on the supports.
    """
    pc = _pieces(kernel, f, g)
    return pc.occ + pc.sing


def l2_pairing(f: TestFunction, g: TestFunction, kernel: TwoPointKernel) -> complex:
    """``<g|f> = integral f conj(g) dp`` on the same node set as :func:`pair`."""
    return _pieces(kernel, f, g, need_plain=True).plain


def lep_residual(kernel: TwoPointKernel, f: TestFunction, g: TestFunction, detail: bool = False):
    """Residual of the kernel equation for the pair ``(f, g)``:

    ``pair(f, gamma_mu(h) g) - <g|f> - q pair(f, g)``.

    With ``detail=True`` returns ``(residual, lhs, rhs)``.

    Raises
    ------
    DomainViolation
        When ``gamma_mu(h) g`` leaves the class on which a gradient
        singular part is defined.
    """
    pc = _pieces(kernel, f, g, need_gamma=True, need_plain=True)
    q = kernel.stats.q
    lhs = pc.occ_gamma + pc.sing_gamma
    rhs = pc.plain + q * (pc.occ + pc.sing)
    res = lhs - rhs
    return (res, lhs, rhs) if detail else res


def relative_residual(kernel, f, g) -> float:
    res, lhs, rhs = lep_residual(kernel, f, g, detail=True)
    scale = max(abs(lhs), abs(rhs))
    return abs(res) / scale if scale > 0 else abs(res)


def positivity_probe(kernel: TwoPointKernel, f: TestFunction) -> float:
    return float(pair(kernel, f, f).real)


def reality_check(kernel: TwoPointKernel, f: TestFunction, g: TestFunction) -> float:
    return float(abs(pair(kernel, f, g) - np.conj(pair(kernel, g, f))))


def _sample_points(f: TestFunction, rng, n=2000):
    balls = f.balls()
    if balls is None:
        raise PreconditionUnverified("cannot sample a function without compact support")
    d = f.d
    pts = []
    for c, r in balls:
        u = rng.standard_normal((n, d))
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        rad = r * rng.random(n) ** (1.0 / d)
        pts.append(np.asarray(c) + u * rad[:, None])
    return np.concatenate(pts)


def monotonicity_probe(kernel: TwoPointKernel, f: TestFunction, g: TestFunction, tol: float = 1e-12,
                       seed: int = 0) -> bool:
    """Check ``|f| <= |g|`` on samples, then ``pair(f, f) <= pair(g, g)``.

    Raises
    ------
    PreconditionUnverified
        If the pointwise domination fails at a sample point.
    """
    rng = np.random.default_rng(seed)
    pts = _sample_points(f, rng)
    rule = build_rule(kernel, f, f)
    if rule.r.size:
        pts = np.concatenate([pts, rule.points().reshape(-1, kernel.d)[:: max(1, rule.size // 20000)]])
    af, ag = np.abs(f._eval(pts)), np.abs(g._eval(pts))
    if np.any(af > ag * (1 + 1e-12) + 1e-300):
        raise PreconditionUnverified("|f| <= |g| fails on the sample grid")
    a = positivity_probe(kernel, f)
    b = positivity_probe(kernel, g)
    return bool(a <= b + tol * max(1.0, abs(b)))


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


@dataclass
class ValidationReport:
    ok: bool
    violations: list = field(default_factory=list)

    def as_record(self):
        return {"ok": self.ok, "violations": list(self.violations)}


def _on_singular_set(kernel: TwoPointKernel, energy: float) -> bool:
    for x in kernel.singular_energies():
        if abs(energy - x) <= ZERO_SET_TOL * max(1.0, abs(x)):
            if kernel.stats.convention == st.CONVENTION_A:
                return abs(float(kernel.profile.tilde_beta(x))) <= 1e-12
            return True
    return False


def validate(kernel: TwoPointKernel) -> ValidationReport:
    """Admissibility of the singular parts: support on the zero set, the
    chemical potential at its critical value, and differentiability for
    gradient parts."""
    v = []
    if kernel.singular and not kernel.is_critical:
        mq = kernel.critical_mu
        v.append("mu is not critical (mu_q = %s): only the diagonal kernel exists"
                 % ("+inf" if mq.unbounded else repr(mq.value)))
    for i, part in enumerate(kernel.singular):
        tag = f"{type(part).__name__}[{i}]"
        if isinstance(part, PointMass):
            if not _on_singular_set(kernel, float(kernel.disp.evaluate(np.asarray(part.k)))):
                v.append(f"{tag}: location is not on a zero-set sphere")
        elif isinstance(part, SphereAverage):
            if not _on_singular_set(kernel, float(kernel.disp.radial(part.radius))):
                v.append(f"{tag}: radius is not a zero-set radius")
        elif isinstance(part, SurfaceAtoms):
            for w, p in part.atoms:
                if not _on_singular_set(kernel, float(kernel.disp.evaluate(np.asarray(p)))):
                    v.append(f"{tag}: atom {p} is not on a zero-set sphere")
                    break
        elif isinstance(part, GradientPointMass):
            if not kernel.disp.gradient_vanishes_at_origin():
                v.append(f"{tag}: needs a dispersion with vanishing gradient at 0 (s > 1)")
            elif not _on_singular_set(kernel, 0.0):
                v.append(f"{tag}: 0 is not in the zero set")
            else:
                try:
                    _gamma_gradient_vanishes(kernel)
                except DomainViolation as exc:
                    v.append(f"{tag}: {exc}")
    return ValidationReport(not v, v)
