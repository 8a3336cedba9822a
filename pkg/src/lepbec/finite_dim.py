"""Matrix models with an energy-dependent inverse temperature.

The Hamiltonian is ``H = diag(eps_0, ..., eps_{n-1})`` and the state is
``omega(a) = Tr(exp(-beta(H) H) a) / Z``.  All time evolutions are diagonal
conjugations, so complex times are handled by the exact phase formulas
``(alpha_z a)_{ij} = a_{ij} exp(i z (E_i - E_j))`` for the relevant one-body
energies ``E``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .temperature import InverseTempProfile

MERGE_TOL = 1e-12
MAX_N = 12


@dataclass(frozen=True, eq=False)
class MatrixModel:
    """Diagonal Hamiltonian with ``2 <= n <= 12`` non-negative eigenvalues.

    ``tb`` holds ``tilde_beta(eps_i)``, ``beta`` holds the local inverse
    temperatures and ``weights`` the normalised state weights
    ``exp(-tb_i) / Z``.
    """

    eigenvalues: tuple
    profile: InverseTempProfile

    def __post_init__(self):
        eps = np.asarray(self.eigenvalues, dtype=float).ravel()
        if not 2 <= eps.size <= MAX_N:
            raise ValueError(f"matrix models need 2 <= n <= {MAX_N}, got n={eps.size}")
        if np.any(eps < 0) or not np.all(np.isfinite(eps)):
            raise ValueError("eigenvalues must be finite and non-negative")
        if np.any(np.diff(eps) < 0):
            raise ValueError("eigenvalues must be sorted ascending")
        if np.any(eps == 0) and not self.profile.beta_defined_at_zero:
            raise ValueError("beta(0) is undefined for this profile, so 0 cannot be an eigenvalue")
        tb = np.asarray(self.profile.tilde_beta(eps), dtype=float)
        beta = np.asarray(self.profile.beta(eps), dtype=float)
        if not (np.all(np.isfinite(tb)) and np.all(np.isfinite(beta))):
            raise ValueError("state weights must be finite")
        # shift by the minimum before exponentiating; Z cancels the shift
        w = np.exp(-(tb - tb.min()))
        object.__setattr__(self, "eigenvalues", tuple(float(x) for x in eps))
        object.__setattr__(self, "_eps", eps)
        object.__setattr__(self, "_tb", tb)
        object.__setattr__(self, "_beta", beta)
        object.__setattr__(self, "_w", w / w.sum())

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    @property
    def eps(self) -> np.ndarray:
        return self._eps

    @property
    def tb(self) -> np.ndarray:
        return self._tb

    @property
    def beta(self) -> np.ndarray:
        return self._beta

    @property
    def weights(self) -> np.ndarray:
        return self._w

    def density_matrix(self) -> np.ndarray:
        return np.diag(self._w).astype(complex)

    def unit(self, i: int, j: int) -> np.ndarray:
        """Matrix unit ``v_ij = |psi_i><psi_j|``."""
        v = np.zeros((self.n, self.n), dtype=complex)
        v[i, j] = 1.0
        return v


def _check(model: MatrixModel, a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.shape != (model.n, model.n):
        raise DimensionMismatch(f"expected a {model.n}x{model.n} matrix, got shape {a.shape}")
    return a


def _conjugate(a: np.ndarray, energies: np.ndarray, z: complex) -> np.ndarray:
    return a * np.exp(1j * z * (energies[:, None] - energies[None, :]))


def state(model: MatrixModel, a) -> complex:
    """``Tr(rho a)`` with the normalised density matrix."""
    a = _check(model, a)
    return complex(np.dot(model.weights, np.diag(a)))


def modified_evolution(model: MatrixModel, a, z: complex) -> np.ndarray:
    """``exp(i z beta(H) H) a exp(-i z beta(H) H)`` for complex ``z``."""
    return _conjugate(_check(model, a), model.tb, z)


def free_evolution(model: MatrixModel, a, z: complex) -> np.ndarray:
    """``exp(i z H) a exp(-i z H)`` for complex ``z``."""
    return _conjugate(_check(model, a), model.eps, z)


def leq_residual(model: MatrixModel, a, i: int, j: int, t: float, detail: bool = False):
    """Local equilibrium identity on the matrix unit ``v_ij``.

    Returns ``omega(a alpha_{t + i beta_i}(v_ij))
    - exp((beta_i - beta_j) eps_j) omega(alpha_t(v_ij) a)`` for the free
    evolution ``alpha``; the difference vanishes for this state.  With
    ``detail`` the two sides are returned as well.
    """
    a = _check(model, a)
    if not (0 <= i < model.n and 0 <= j < model.n):
        raise IndexError("matrix unit index out of range")
    b, e = model.beta, model.eps
    v = model.unit(i, j)
    lhs = state(model, a @ free_evolution(model, v, t + 1j * b[i]))
    rhs = np.exp((b[i] - b[j]) * e[j]) * state(model, free_evolution(model, v, t) @ a)
    res = complex(lhs - rhs)
    return (res, complex(lhs), complex(rhs)) if detail else res


def _relative(res, lhs, rhs):
    scale = max(abs(lhs), abs(rhs))
    return abs(res) / scale if scale > 0 else abs(res)


def kms_residual(model: MatrixModel, a, b, t: float) -> complex:
    """``omega(a alpha^beta_{t+i}(b)) - omega(alpha^beta_t(b) a)`` for the
    modified evolution at unit temperature."""
    a, b = _check(model, a), _check(model, b)
    lhs = state(model, a @ modified_evolution(model, b, t + 1j))
    rhs = state(model, modified_evolution(model, b, t) @ a)
    return complex(lhs - rhs)


def bohr_measures(model: MatrixModel, a, tol: float = MERGE_TOL):
    """Discrete measures ``mu_a`` and ``nu_a`` on the Bohr frequencies.

    The entry ``a_ij`` contributes at frequency ``k = tb_j - tb_i`` with
    weight ``w_j |a_ij|^2`` to ``mu_a`` (from ``omega(a* alpha_t(a))``) and
    ``w_i |a_ij|^2`` to ``nu_a`` (from ``omega(alpha_t(a) a*)``), so that
    ``d mu_a / d nu_a = exp(-k)``.  Frequencies closer than ``tol`` are
    merged.

    Returns
    -------
    list of (k, mu_weight, nu_weight)
        Sorted by frequency; entries with ``a_ij = 0`` are omitted.
    """
    a = _check(model, a)
    w, tb = model.weights, model.tb
    ii, jj = np.nonzero(a)
    if ii.size == 0:
        return []
    amp = np.abs(a[ii, jj]) ** 2
    k = tb[jj] - tb[ii]
    order = np.argsort(k, kind="stable")
    k, mu_w, nu_w = k[order], (w[jj] * amp)[order], (w[ii] * amp)[order]
    out = []
    start = 0
    for idx in range(1, k.size + 1):
        if idx == k.size or k[idx] - k[idx - 1] > tol:
            sl = slice(start, idx)
            # weight-averaged frequency keeps the ratio law within the merge tolerance
            kk = float(np.average(k[sl], weights=nu_w[sl])) if nu_w[sl].sum() > 0 else float(k[start])
            out.append((kk, float(mu_w[sl].sum()), float(nu_w[sl].sum())))
            start = idx
    return out


def bohr_frequencies(model: MatrixModel) -> np.ndarray:
    """All differences ``tb_i - tb_j`` of the modified Hamiltonian."""
    tb = model.tb
    return np.unique((tb[:, None] - tb[None, :]).ravel())


def random_model(rng: np.random.Generator, profile: InverseTempProfile, n: int | None = None,
                 scale: float = 3.0) -> MatrixModel:
    """Model with sorted eigenvalues drawn uniformly from ``[0, scale]``."""
    n = int(rng.integers(2, 9)) if n is None else n
    eps = np.sort(rng.uniform(0.0, scale, n))
    if not profile.beta_defined_at_zero:
        eps = np.maximum(eps, 1e-3)
    return MatrixModel(tuple(eps), profile)


def random_observable(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


def check_suite(models, rng: np.random.Generator, observables: int = 10, times=(0.0, 0.3, 1.7, -2.5, 4.0)):
    """Largest LEQ, KMS and stationarity residuals relative to the size of
    the compared terms, and the largest relative deviation of the
    Radon-Nikodym ratio from ``exp(-k)``.

    Relative measures are used because ``exp((beta_i - beta_j) eps_j)`` can
    make both sides of the local identity large when ``beta`` varies fast.
    """
    worst = {"leq": 0.0, "kms": 0.0, "stationarity": 0.0, "radon_nikodym": 0.0}
    for model in models:
        for _ in range(observables):
            a = random_observable(rng, model.n)
            b = random_observable(rng, model.n)
            for t in times:
                for i in range(model.n):
                    for j in range(model.n):
                        worst["leq"] = max(worst["leq"], _relative(*leq_residual(model, a, i, j, t, detail=True)))
                lhs = state(model, a @ modified_evolution(model, b, t + 1j))
                rhs = state(model, modified_evolution(model, b, t) @ a)
                worst["kms"] = max(worst["kms"], _relative(lhs - rhs, lhs, rhs))
                s0, s1 = state(model, a), state(model, modified_evolution(model, a, t))
                worst["stationarity"] = max(worst["stationarity"], _relative(s1 - s0, s0, s1))
            for k, mu_w, nu_w in bohr_measures(model, a):
                if nu_w > 0:
                    worst["radon_nikodym"] = max(worst["radon_nikodym"], abs(mu_w / nu_w * np.exp(k) - 1.0))
    return worst
