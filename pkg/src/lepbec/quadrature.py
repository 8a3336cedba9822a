"""Radial quadrature with singular-point handling and divergence detection.

Two families of tools live here:

* :func:`integrate_halfline` evaluates adaptive integrals over ``[lower, inf)``
  whose integrand may blow up like a power at a finite set of points.  Near
  each such point (and towards infinity) the domain is cut into dyadic shells;
  the ratio of successive shell contributions tells whether the singularity is
  integrable, and a geometric extrapolation supplies the unresolved remainder.
* :func:`radial_rule` and friends build *fixed* composite Gauss-Legendre node
  sets.  Fixed nodes make several integrals evaluated on the same rule exactly
  linear in the integrand, which is what the kernel-equation residuals need.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate

FINITE = "finite"
INFINITE = "infinite"

QUAD_RTOL = 1e-13
RATIO_MARGIN = 1e-3
MIN_LEVELS = 10
DIVERGENCE_LEVELS = 6


@dataclass
class IntegralResult:
    value: float
    error: float
    verdict: str = FINITE
    diagnostics: dict = field(default_factory=dict)

    @property
    def finite(self) -> bool:
        return self.verdict == FINITE

    def scaled(self, factor: float) -> "IntegralResult":
        return IntegralResult(self.value * factor, self.error * abs(factor), self.verdict, dict(self.diagnostics))

    def as_record(self) -> dict:
        value = self.value if self.finite else None
        return {
            "value": value,
            "errorBound": self.error if self.finite else None,
            "verdict": self.verdict,
            "diagnostics": self.diagnostics,
        }


def _quad(f, a: float, b: float):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        val, err = integrate.quad(f, a, b, epsabs=0.0, epsrel=QUAD_RTOL, limit=200)
    return val, err, len(caught)


@dataclass
class _ShellWalk:
    value: float = 0.0
    error: float = 0.0
    divergent: bool = False
    levels: int = 0
    last_ratio: float = float("nan")
    warnings: int = 0


def fixed_gl_integrator(f_vec, n: int = 24):
    """Drop-in replacement for the adaptive panel integrator using one
    ``n``-point Gauss-Legendre rule per shell on a vectorised integrand."""
    x, w = gauss_legendre(n)

    def integrate_panel(_f, a, b):
        half = 0.5 * (b - a)
        vals = f_vec(0.5 * (a + b) + half * x)
        return float(half * np.dot(w, vals)), 0.0, 0

    return integrate_panel


def _walk_shells(f, shell_bounds, rtol: float, max_levels: int, integrator=None) -> _ShellWalk:
    """Sum shell contributions produced by ``shell_bounds(k)`` until the
    geometric remainder is negligible or divergence is established."""
    integrator = _quad if integrator is None else integrator
    out = _ShellWalk()
    ratios: list[float] = []
    prev = None
    for k in range(max_levels):
        bounds = shell_bounds(k)
        if bounds is None:
            break
        a, b = bounds
        s, es, nw = integrator(f, a, b)
        if not math.isfinite(s):
            out.divergent = True
            out.levels = k + 1
            return out
        out.value += s
        out.error += es
        out.warnings += nw
        out.levels = k + 1
        if prev is not None:
            ratios.append(abs(s) / abs(prev) if prev != 0 else 0.0)
        prev = s
        if s == 0.0 and k >= 1:
            out.last_ratio = 0.0
            return out
        if out.levels < MIN_LEVELS or not ratios:
            continue
        tail = ratios[-DIVERGENCE_LEVELS:]
        if len(tail) == DIVERGENCE_LEVELS and min(tail) >= 1.0 - RATIO_MARGIN:
            out.divergent = True
            out.last_ratio = ratios[-1]
            return out
        rho = ratios[-1]
        if rho < 1.0 - RATIO_MARGIN:
            remainder = s * rho / (1.0 - rho)
            if abs(remainder) <= rtol * abs(out.value):
                out.value += remainder
                out.error += abs(remainder)
                out.last_ratio = rho
                return out
    # Ran out of levels (or of floating-point resolution): extrapolate once.
    rho = ratios[-1] if ratios else 0.0
    out.last_ratio = rho
    if rho >= 1.0 - RATIO_MARGIN:
        out.divergent = True
    elif prev is not None:
        remainder = prev * rho / (1.0 - rho)
        out.value += remainder
        out.error += abs(remainder)
    return out


def _toward_point(e: float, o: float, resolution: float):
    width = o - e

    def bounds(k):
        inner = e + width * 2.0 ** (-(k + 1))
        outer = e + width * 2.0 ** (-k)
        if abs(inner - e) < resolution or inner == outer:
            return None
        return (min(inner, outer), max(inner, outer))

    return bounds


def _toward_infinity(start: float):
    def bounds(k):
        a = start * 2.0**k
        b = start * 2.0 ** (k + 1)
        if not math.isfinite(b):
            return None
        return (a, b)

    return bounds


def integrate_halfline(f, singular=(), knots=(), lower: float = 0.0, rtol: float = 1e-12,
                       max_levels: int = 100, max_tail_levels: int = 200) -> IntegralResult:
    """Integrate ``f`` over ``[lower, inf)``.

    Parameters
    ----------
    f : callable
        Scalar integrand.
    singular : iterable of float
        Points where ``f`` may have a power-type singularity.
    knots : iterable of float
        Points where ``f`` is merely non-smooth; used as breakpoints only.
    rtol : float
        Target relative accuracy of the shell extrapolations.

    Returns
    -------
    IntegralResult
        ``verdict`` is ``"infinite"`` when any shell sequence fails to decay.
    """
    sing = sorted({float(x) for x in singular if x >= lower})
    pts = sorted(set(sing) | {float(x) for x in knots if x > lower} | {float(lower)})
    sing_set = set(sing)
    last = pts[-1]
    tail_start = max(2.0 * last, last + 1.0)
    pts.append(tail_start)

    total = 0.0
    error = 0.0
    divergent_at: list[str] = []
    levels: dict[str, int] = {}
    nwarn = 0

    def walk_to(e, o, tag):
        nonlocal total, error, nwarn
        resolution = max(abs(e), 1.0) * 1e-13 if e != 0.0 else 1e-300
        res = _walk_shells(f, _toward_point(e, o, resolution), rtol, max_levels)
        total += res.value
        error += res.error
        nwarn += res.warnings
        levels[tag] = res.levels
        if res.divergent:
            divergent_at.append(tag)

    for a, b in zip(pts[:-1], pts[1:]):
        a_sing, b_sing = a in sing_set, b in sing_set
        if not (a_sing or b_sing):
            s, es, nw = _quad(f, a, b)
            total += s
            error += es
            nwarn += nw
            continue
        mid = 0.5 * (a + b)
        if a_sing:
            walk_to(a, mid, f"{a:.6g}+")
        else:
            s, es, nw = _quad(f, a, mid)
            total, error, nwarn = total + s, error + es, nwarn + nw
        if b_sing:
            walk_to(b, mid, f"{b:.6g}-")
        else:
            s, es, nw = _quad(f, mid, b)
            total, error, nwarn = total + s, error + es, nwarn + nw

    tail = _walk_shells(f, _toward_infinity(tail_start), rtol, max_tail_levels)
    total += tail.value
    error += tail.error
    nwarn += tail.warnings
    levels["inf"] = tail.levels
    if tail.divergent:
        divergent_at.append("inf")

    diagnostics = {"shell_levels": levels, "quad_warnings": nwarn, "divergent_at": divergent_at,
                   "tail_ratio": tail.last_ratio}
    if not math.isfinite(total):
        divergent_at.append("panel")
    if divergent_at:
        return IntegralResult(math.inf, math.inf, INFINITE, diagnostics)
    return IntegralResult(total, error + 1e-15 * abs(total), FINITE, diagnostics)


def integrate_interval(f, a: float, b: float, singular=(), knots=(), rtol: float = 1e-12,
                       max_levels: int = 100, integrator=None) -> IntegralResult:
    """Integrate ``f`` over the finite interval ``[a, b]`` with dyadic shells
    toward each point of ``singular``.  ``integrator(f, lo, hi)`` may replace
    the adaptive per-panel rule."""
    quad = _quad if integrator is None else integrator
    sing = sorted({float(x) for x in singular if a <= x <= b})
    pts = sorted(set(sing) | {float(x) for x in knots if a < x < b} | {float(a), float(b)})
    sing_set = set(sing)
    total = error = 0.0
    nwarn = 0
    divergent_at: list[str] = []
    for lo, hi in zip(pts[:-1], pts[1:]):
        mid = 0.5 * (lo + hi)
        for e, o in ((lo, mid), (hi, mid)):
            if e in sing_set:
                resolution = max(abs(e), 1.0) * 1e-13 if e != 0.0 else 1e-300
                res = _walk_shells(f, _toward_point(e, o, resolution), rtol, max_levels, quad)
                total, error, nwarn = total + res.value, error + res.error, nwarn + res.warnings
                if res.divergent:
                    divergent_at.append(f"{e:.6g}")
            else:
                s, es, nw = quad(f, min(e, o), max(e, o))
                total, error, nwarn = total + s, error + es, nwarn + nw
    if not math.isfinite(total):
        divergent_at.append("panel")
    diagnostics = {"quad_warnings": nwarn, "divergent_at": divergent_at}
    if divergent_at:
        return IntegralResult(math.inf, math.inf, INFINITE, diagnostics)
    return IntegralResult(total, error, FINITE, diagnostics)


def integrate_tail(f, start: float, rtol: float = 1e-12, max_levels: int = 200) -> IntegralResult:
    """Integrate ``f`` over ``[start, inf)`` with dyadic shells only."""
    res = _walk_shells(f, _toward_infinity(start), rtol, max_levels)
    diag = {"levels": res.levels, "tail_ratio": res.last_ratio, "quad_warnings": res.warnings}
    if res.divergent:
        return IntegralResult(math.inf, math.inf, INFINITE, diag)
    return IntegralResult(res.value, res.error, FINITE, diag)


# ---------------------------------------------------------------------------
# Fixed composite Gauss-Legendre rules
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def gauss_legendre(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def composite_gl(a: float, b: float, panels: int, n: int):
    """Nodes and weights of ``panels`` equal Gauss-Legendre panels on [a, b]."""
    x, w = gauss_legendre(n)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def graded_gl(e: float, o: float, n: int, sigma: float = 0.15, floor: float | None = None,
              end_panel: bool = True):
    """Geometrically graded panels on the segment between ``o`` and ``e``,
    refined towards ``e``.

    Panels are ``[e + w sigma^(k+1), e + w sigma^k]`` down to a width of
    ``floor``.  With ``end_panel`` the innermost leftover panel touching ``e``
    gets ordinary Gauss-Legendre nodes (which never coincide with ``e``);
    otherwise it is left out and returned as a third value ``(e, b)`` for the
    caller to treat by product integration.
    """
    width = o - e
    if floor is None:
        # away from 0 the floor stays well above the spacing of floats near e
        floor = abs(o - e) * 1e-14 if e == 0 else max(abs(e), abs(o - e)) * 1e-11
    x, w = gauss_legendre(n)
    edges = [1.0]
    while abs(width) * edges[-1] > floor:
        edges.append(edges[-1] * sigma)
    inner = edges[-1]
    if end_panel:
        edges.append(0.0)
    t = np.asarray(edges)
    lo, hi = t[1:], t[:-1]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    tn = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    tw = (half[:, None] * w[None, :]).ravel()
    if end_panel:
        return e + width * tn, abs(width) * tw
    return e + width * tn, abs(width) * tw, (e, e + width * inner)


def radial_rule(lo: float, hi: float, singular=(), knots=(), n: int = 16, panels: int = 8,
                sigma: float = 0.1, graded_order: int | None = None, end_floor: float | None = None):
    """Fixed rule on ``[lo, hi]`` graded towards each singular radius inside it.

    Uniform panels of width ``(hi - lo) / panels`` carry ``n`` nodes; the
    geometric panels next to a singular radius carry ``graded_order`` nodes
    (default ``n // 2``).

    With ``end_floor`` set, grading stops at ``end_floor`` times the graded
    width and the innermost intervals ``(e, b)`` are returned separately as
    a third value instead of receiving nodes.
    """
    ng = max(4, n // 2) if graded_order is None else graded_order
    ends: list = []
    if hi <= lo:
        return (np.empty(0), np.empty(0)) if end_floor is None else (np.empty(0), np.empty(0), ends)
    sing = sorted({float(s) for s in singular if lo <= s <= hi})
    pts = sorted(set(sing) | {float(k) for k in knots if lo < k < hi} | {lo, hi})
    sing_set = set(sing)
    h = (hi - lo) / panels
    nodes, weights = [], []

    def uniform(a, b):
        if b > a:
            x, w = composite_gl(a, b, max(1, int(math.ceil((b - a) / h - 1e-9))), n)
            nodes.append(x)
            weights.append(w)

    def graded(e, o):
        # graded region of width at most h next to e, uniform panels beyond
        reach = min(abs(o - e), h)
        step = math.copysign(reach, o - e)
        if end_floor is None:
            x, w = graded_gl(e, e + step, ng, sigma)
        else:
            x, w, end = graded_gl(e, e + step, ng, sigma, floor=end_floor * reach, end_panel=False)
            ends.append(end)
        nodes.append(x)
        weights.append(w)
        uniform(*sorted((e + step, o)))

    for a, b in zip(pts[:-1], pts[1:]):
        if b - a <= 0:
            continue
        a_s, b_s = a in sing_set, b in sing_set
        if not (a_s or b_s):
            uniform(a, b)
        elif a_s and b_s:
            m = 0.5 * (a + b)
            graded(a, m)
            graded(b, m)
        elif a_s:
            graded(a, b)
        else:
            graded(b, a)
    out = np.concatenate(nodes), np.concatenate(weights)
    return out if end_floor is None else out + (ends,)


def product_weights(rho, e: float, b: float, m: int = 4, rtol: float = 1e-14, max_levels: int = 200,
                    n: int = 24):
    """Product-integration rule for ``integral_e^b rho(r) A(r) dr`` with
    ``rho`` singular at ``e`` and ``A`` smooth.

    Returns ``(nodes, weights)`` where ``nodes`` are ``m`` Gauss-Legendre
    points of the interval and ``weights[..., j] = integral rho * l_j`` with
    the Lagrange basis ``l_j``; ``None`` when ``rho`` is not integrable at
    ``e``.  ``rho`` may return a stack of densities of shape ``(k, len(r))``;
    they then share every shell, so linear relations between the densities
    carry over to the weights up to rounding.  The moments are accumulated
    over dyadic shells toward ``e`` with the same ratio test as
    :func:`integrate_halfline`.
    """
    width = b - e
    tx, _ = gauss_legendre(m)
    u_nodes = 0.5 * (tx + 1.0)
    nodes = e + width * u_nodes
    # monomial coefficients of the Lagrange basis in u = (r - e) / width
    coef = np.linalg.inv(np.vander(u_nodes, m, increasing=True))
    gx, gw = gauss_legendre(n)
    total = None
    prev = None
    ratios: list[float] = []
    shell = None
    resolution = max(abs(e), 1.0) * 1e-13 if e != 0 else 1e-300
    for k in range(max_levels):
        u_lo, u_hi = 2.0 ** (-(k + 1)), 2.0 ** (-k)
        if abs(width) * u_lo < resolution:
            break
        half = 0.5 * (u_hi - u_lo)
        u = 0.5 * (u_hi + u_lo) + half * gx
        vals = np.asarray(rho(e + width * u), dtype=float)
        basis = np.vander(u, m, increasing=True) @ coef
        shell = abs(width) * half * ((vals * gw) @ basis)
        total = shell.copy() if total is None else total + shell
        size = float(np.sum(np.abs(shell)))
        if not math.isfinite(size):
            return None
        if prev is not None:
            ratios.append(size / prev if prev > 0 else 0.0)
        prev = size
        if size == 0.0 and k >= 1:
            return nodes, total
        if len(ratios) >= MIN_LEVELS:
            if min(ratios[-DIVERGENCE_LEVELS:]) >= 1.0 - RATIO_MARGIN:
                return None
            rho_k = ratios[-1]
            if rho_k < 1.0 - RATIO_MARGIN and size * rho_k / (1.0 - rho_k) <= rtol * float(np.sum(np.abs(total))):
                break
    if ratios and ratios[-1] >= 1.0 - RATIO_MARGIN:
        return None
    if ratios:
        # geometric remainder of the last shell, concentrated at u -> 0
        rho_k = ratios[-1]
        total = total + shell * rho_k / (1.0 - rho_k)
    return nodes, total
