"""Smooth compactly supported test functions on momentum space.

Every function is vectorised over points ``p`` with trailing axis ``d``,
returns complex values, and supplies an analytic gradient.  ``balls()``
describes a covering of the support by closed balls (``None`` for functions
without compact support, such as plane waves).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import special_ortho_group

from .errors import DimensionMismatch


def _as_points(p, d):
    p = np.asarray(p, dtype=float)
    if p.ndim == 0 or p.shape[-1] != d:
        raise DimensionMismatch(f"expected points with trailing dimension {d}, got shape {p.shape}")
    return p


def _out(a):
    return a if np.ndim(a) else complex(a)


class TestFunction:
    """Base class.  Subclasses implement ``_eval`` and ``_grad``."""

    __test__ = False  # keep pytest from collecting the class
    d: int

    def __call__(self, p):
        return _out(self._eval(_as_points(p, self.d)))

    def grad(self, p):
        return self._grad(_as_points(p, self.d))

    def balls(self):
        raise NotImplementedError

    @property
    def is_real(self) -> bool:
        return False

    # arithmetic helpers for sesquilinearity checks
    def __add__(self, other):
        return Combination(((1.0, self), (1.0, other)))

    def __rmul__(self, a):
        return Combination(((complex(a), self),))


@dataclass(frozen=True, eq=False)
class Bump(TestFunction):
    """``exp(-1 / (1 - |u|^2))`` with ``u = (p - center) / radius`` inside the
    ball, zero outside."""

    center: tuple
    radius: float

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.center, dtype=float))
        if not self.radius > 0:
            raise ValueError("bump radius must be positive")
        object.__setattr__(self, "center", tuple(float(x) for x in c))

    @property
    def d(self):
        return len(self.center)

    @property
    def is_real(self):
        return True

    def _parts(self, p):
        u = (p - np.asarray(self.center)) / self.radius
        t = np.sum(u * u, axis=-1)
        inside = t < 1.0
        s = np.where(inside, 1.0 - t, 1.0)
        val = np.where(inside, np.exp(-1.0 / s), 0.0)
        return u, s, inside, val

    def _eval(self, p):
        return self._parts(p)[3].astype(complex)

    def _grad(self, p):
        u, s, inside, val = self._parts(p)
        fac = np.where(inside, -2.0 * val / (s * s * self.radius), 0.0)
        return (fac[..., None] * u).astype(complex)

    def balls(self):
        return [(np.asarray(self.center), float(self.radius))]


@dataclass(frozen=True, eq=False)
class BumpTimesPoly(TestFunction):
    """A bump multiplied by the monomial ``prod_j (p - center)_j ** power_j``."""

    center: tuple
    radius: float
    power: tuple

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(x) for x in np.atleast_1d(self.center)))
        pw = tuple(int(k) for k in self.power)
        if len(pw) != len(self.center) or min(pw) < 0:
            raise ValueError("power must be a non-negative multi-index of length d")
        object.__setattr__(self, "power", pw)
        object.__setattr__(self, "_bump", Bump(self.center, self.radius))

    @property
    def d(self):
        return len(self.center)

    @property
    def is_real(self):
        return True

    def _mono(self, p):
        y = p - np.asarray(self.center)
        return np.prod(y ** np.asarray(self.power, dtype=float), axis=-1), y

    def _eval(self, p):
        m, _ = self._mono(p)
        return self._bump._eval(p) * m

    def _grad(self, p):
        m, y = self._mono(p)
        b = self._bump._eval(p)
        gm = np.empty(p.shape, dtype=float)
        pw = np.asarray(self.power)
        for j in range(self.d):
            if pw[j] == 0:
                gm[..., j] = 0.0
            else:
                lowered = pw.copy()
                lowered[j] -= 1
                gm[..., j] = pw[j] * np.prod(y ** lowered.astype(float), axis=-1)
        return self._bump._grad(p) * m[..., None] + b[..., None] * gm

    def balls(self):
        return self._bump.balls()


@dataclass(frozen=True, eq=False)
class PhaseModulated(TestFunction):
    """``inner(p) * exp(i p.x)``: the momentum-space image of a translation."""

    inner: TestFunction
    x: tuple

    def __post_init__(self):
        x = tuple(float(v) for v in np.atleast_1d(self.x))
        if len(x) != self.inner.d:
            raise DimensionMismatch("translation vector has the wrong dimension")
        object.__setattr__(self, "x", x)

    @property
    def d(self):
        return self.inner.d

    def _phase(self, p):
        return np.exp(1j * (p @ np.asarray(self.x)))

    def _eval(self, p):
        return self.inner._eval(p) * self._phase(p)

    def _grad(self, p):
        ph = self._phase(p)
        return (self.inner._grad(p) + 1j * np.asarray(self.x) * self.inner._eval(p)[..., None]) * ph[..., None]

    def balls(self):
        return self.inner.balls()


@dataclass(frozen=True, eq=False)
class Rotated(TestFunction):
    """``inner(R^T p)`` for an orthogonal matrix ``R``."""

    inner: TestFunction
    R: np.ndarray

    @property
    def d(self):
        return self.inner.d

    @property
    def is_real(self):
        return self.inner.is_real

    def _eval(self, p):
        return self.inner._eval(p @ self.R)

    def _grad(self, p):
        return self.inner._grad(p @ self.R) @ self.R.T

    def balls(self):
        b = self.inner.balls()
        return None if b is None else [(self.R @ c, r) for c, r in b]


@dataclass(frozen=True, eq=False)
class Combination(TestFunction):
    """Finite linear combination ``sum_k a_k f_k``."""

    terms: tuple

    def __post_init__(self):
        terms = tuple((complex(a), f) for a, f in self.terms)
        if not terms or len({f.d for _, f in terms}) != 1:
            raise DimensionMismatch("combination terms must share one dimension")
        object.__setattr__(self, "terms", terms)

    @property
    def d(self):
        return self.terms[0][1].d

    @property
    def is_real(self):
        return all(a.imag == 0 and f.is_real for a, f in self.terms)

    def _eval(self, p):
        return sum(a * f._eval(p) for a, f in self.terms)

    def _grad(self, p):
        return sum(a * f._grad(p) for a, f in self.terms)

    def balls(self):
        out = []
        for _, f in self.terms:
            b = f.balls()
            if b is None:
                return None
            out.extend(b)
        return out


@dataclass(frozen=True, eq=False)
class PlaneWave(TestFunction):
    """``exp(-i p.x)``, the momentum representative of a position delta."""

    x: tuple

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(float(v) for v in np.atleast_1d(self.x)))

    @property
    def d(self):
        return len(self.x)

    def _eval(self, p):
        return np.exp(-1j * (p @ np.asarray(self.x)))

    def _grad(self, p):
        return -1j * np.asarray(self.x) * self._eval(p)[..., None]

    def balls(self):
        return None


@dataclass(frozen=True, eq=False)
class TimeEvolved(TestFunction):
    """``exp(i h(p) t) * inner(p)`` for a smooth dispersion ``h``."""

    inner: TestFunction
    disp: object
    t: float

    def __post_init__(self):
        if not self.disp.is_smooth():
            raise ValueError("exp(i h t) f is smooth only for smooth dispersions")

    @property
    def d(self):
        return self.inner.d

    def _phase(self, p):
        return np.exp(1j * self.t * self.disp.evaluate(p))

    def _eval(self, p):
        return self.inner._eval(p) * self._phase(p)

    def _grad(self, p):
        r = np.sqrt(np.sum(p * p, axis=-1))
        safe = np.where(r > 0, r, 1.0)
        dh = np.where(r > 0, self.disp.radial_derivative(r) / safe, 0.0)[..., None] * p
        ph = self._phase(p)[..., None]
        return (self.inner._grad(p) + 1j * self.t * dh * self.inner._eval(p)[..., None]) * ph

    def balls(self):
        return self.inner.balls()


# ---------------------------------------------------------------------------
# Symmetry actions
# ---------------------------------------------------------------------------


def check_orthogonal(R, d: int, tol: float = 1e-12) -> np.ndarray:
    R = np.asarray(R, dtype=float)
    if R.shape != (d, d):
        raise DimensionMismatch(f"rotation must be {d}x{d}")
    if np.max(np.abs(R @ R.T - np.eye(d))) > tol:
        raise ValueError("matrix is not orthogonal")
    return R


def rotate(f: TestFunction, R) -> TestFunction:
    """``f_R(p) = f(R^T p)``; bumps stay bumps with rotated centres."""
    R = check_orthogonal(R, f.d)
    if isinstance(f, Bump):
        return Bump(tuple(R @ np.asarray(f.center)), f.radius)
    if isinstance(f, PhaseModulated):
        return PhaseModulated(rotate(f.inner, R), tuple(R @ np.asarray(f.x)))
    if isinstance(f, Combination):
        return Combination(tuple((a, rotate(g, R)) for a, g in f.terms))
    if isinstance(f, PlaneWave):
        return PlaneWave(tuple(R @ np.asarray(f.x)))
    if isinstance(f, Rotated):
        return Rotated(f.inner, R @ f.R)
    return Rotated(f, R)


def translate(f: TestFunction, x) -> TestFunction:
    """Momentum-space action of a spatial translation by ``x``."""
    return PhaseModulated(f, tuple(np.atleast_1d(np.asarray(x, dtype=float))))


def random_rotation(rng: np.random.Generator, d: int) -> np.ndarray:
    """Haar-distributed proper rotation."""
    if d == 1:
        return np.eye(1)
    return special_ortho_group.rvs(d, random_state=rng)
