import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lepbec.errors import DimensionMismatch
from lepbec.finite_dim import (MatrixModel, bohr_frequencies, bohr_measures, check_suite, free_evolution,
                               kms_residual, leq_residual, modified_evolution, random_model, random_observable, state)
from lepbec.temperature import Constant, PowerLog, ZeroAt

PROFILES = [Constant(0.7), PowerLog(0.5, 2.0), ZeroAt(1.0, 0.5, 2.0)]


def test_constant_profile_is_gibbs():
    eps = (0.0, 0.5, 1.3)
    m = MatrixModel(eps, Constant(2.0))
    w = np.exp(-2.0 * np.asarray(eps))
    assert np.allclose(m.weights, w / w.sum(), rtol=1e-15)
    assert np.trace(m.density_matrix()).real == pytest.approx(1.0)


@pytest.mark.parametrize("eps", [(1.0,), tuple(range(13)), (1.0, 0.5), (-0.1, 1.0)])
def test_invalid_spectra(eps):
    with pytest.raises(ValueError):
        MatrixModel(eps, Constant(1.0))


def test_zero_eigenvalue_needs_beta_at_zero():
    with pytest.raises(ValueError):
        MatrixModel((0.0, 1.0), PowerLog(-0.5, 2.0))


def test_shape_check():
    m = MatrixModel((0.0, 1.0), Constant(1.0))
    with pytest.raises(DimensionMismatch):
        state(m, np.eye(3))


def test_evolutions_at_zero_time_are_identity(rng):
    m = random_model(rng, Constant(1.0), 4)
    a = random_observable(rng, 4)
    assert np.allclose(free_evolution(m, a, 0.0), a)
    assert np.allclose(modified_evolution(m, a, 0.0), a)


def test_constant_profile_modified_evolution_is_rescaled_free(rng):
    m = random_model(rng, Constant(1.5), 5)
    a = random_observable(rng, 5)
    assert np.allclose(modified_evolution(m, a, 0.4), free_evolution(m, a, 0.6), rtol=1e-14)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**31), which=st.integers(0, 2), t=st.floats(-5, 5))
def test_local_and_modified_kms_identities(seed, which, t):
    rng = np.random.default_rng(seed)
    m = random_model(rng, PROFILES[which])
    a, b = random_observable(rng, m.n), random_observable(rng, m.n)
    res, lhs, rhs = leq_residual(m, a, 0, m.n - 1, t, detail=True)
    assert abs(res) <= 1e-12 * max(abs(lhs), abs(rhs), 1e-300)
    scale = max(abs(state(m, a @ modified_evolution(m, b, t + 1j))), 1e-300)
    assert abs(kms_residual(m, a, b, t)) <= 1e-12 * scale


def test_radon_nikodym_ratio(rng):
    m = random_model(rng, ZeroAt(1.0, 0.5, 2.0), 6)
    a = random_observable(rng, 6)
    meas = bohr_measures(m, a)
    assert meas
    for k, mu_w, nu_w in meas:
        assert mu_w / nu_w == pytest.approx(np.exp(-k), rel=1e-12)
    assert np.isclose(sum(x[1] for x in meas), state(m, a.conj().T @ a).real, rtol=1e-12)


def test_bohr_frequencies_are_antisymmetric(rng):
    f = bohr_frequencies(random_model(rng, PowerLog(0.5, 2.0), 5))
    assert np.allclose(np.sort(-f), f)


def test_suite_on_mixed_profiles(rng):
    models = [random_model(rng, PROFILES[i % 3]) for i in range(6)]
    worst = check_suite(models, rng, observables=3)
    assert max(worst.values()) <= 1e-12
