import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lepbec.dispersion import DispersionRelation
from lepbec.errors import DenominatorNonPositive, QSignInvalid, SuperCritical
from lepbec.statistics import (QStatistics, critical_density, critical_mu, denominator, density, fermi_solve_mu,
                               gamma_mu, occupation, sphere_area, sup_G)
from lepbec.temperature import Constant, Custom, PowerLog, ZeroAt

import reference_values as ref


def test_sphere_areas():
    assert sphere_area(1) == pytest.approx(2.0)
    assert sphere_area(2) == pytest.approx(2 * math.pi)
    assert sphere_area(3) == pytest.approx(4 * math.pi)


def test_occupation_bose_einstein():
    s = QStatistics(1.0, -0.5)
    assert occupation(s, Constant(1.0), 1.0) == pytest.approx(1.0 / math.expm1(1.5), rel=1e-15)


def test_occupation_at_critical_point_is_singular():
    with pytest.raises(DenominatorNonPositive):
        occupation(QStatistics(1.0, 0.0), Constant(1.0), 0.0)


def test_occupation_near_critical_point_keeps_precision():
    # 1 / (q expm1(tb - mu - ln q)) with shift 1e-13
    q = 0.5
    s = QStatistics(q, -math.log(q))
    x = 1e-13
    assert occupation(s, Constant(1.0), x) == pytest.approx(1.0 / (q * x), rel=1e-9)


@pytest.mark.parametrize("q", [-1.0, -0.3, 0.0, 0.4, 1.0])
def test_occupation_matches_naive_formula_away_from_poles(q):
    eps = np.linspace(0.5, 20.0, 50)
    s = QStatistics(q, -0.25)
    naive = 1.0 / (np.exp(eps + 0.25) - q)
    assert np.allclose(occupation(s, Constant(1.0), eps), naive, rtol=1e-13, atol=0)


@settings(max_examples=50, deadline=None)
@given(q=st.floats(0.05, 1.0), mu=st.floats(-3.0, 0.0), x=st.floats(0.0, 30.0))
def test_denominator_sign_and_occupation_agree(q, mu, x):
    s = QStatistics(q, min(mu, -math.log(q) - 0.01))
    den = denominator(s, Constant(1.0), x)
    assert den > 0
    assert occupation(s, Constant(1.0), x) == pytest.approx(1.0 / den, rel=1e-12)


def test_convention_b_gamma():
    p = PowerLog(0.5, 2.0)
    s = QStatistics(1.0, 0.3, "B")
    x = 0.7
    assert gamma_mu(s, p, x) == pytest.approx(math.exp(float(p.beta(x)) * (x - 0.3)), rel=1e-14)


def test_invalid_q_and_convention():
    with pytest.raises(ValueError):
        QStatistics(1.5, 0.0)
    with pytest.raises(ValueError):
        QStatistics(0.5, 0.0, "C")


@pytest.mark.parametrize("q", [0.1, 0.5, 1.0])
def test_critical_mu_convention_a(q):
    assert critical_mu(q, Constant(1.0)).value == pytest.approx(-math.log(q), abs=1e-15)


def test_critical_mu_unbounded_for_non_positive_q():
    mq = critical_mu(-1.0, Constant(1.0))
    assert mq.unbounded and mq.value is None
    assert mq.admits(1e9)


def test_sup_g_oracle():
    # beta(x) = x gives G(mu) = mu^2 / 4
    p = Custom(lambda x: x, declared_zero_set=(0.0,))
    for mu in (0.5, 2.0, 5.0):
        assert sup_G(p, mu) == pytest.approx(mu * mu / 4, rel=1e-12)


def test_critical_mu_convention_b_linear_beta():
    p = Custom(lambda x: x, declared_zero_set=(0.0,))
    assert critical_mu(math.exp(-1.0), p, "B").value == pytest.approx(2.0, abs=1e-9)


def test_critical_density_bose_3d():
    res = critical_density(1.0, Constant(1.0), DispersionRelation.power_law(2.0, 3))
    assert res.finite
    assert res.value == pytest.approx(ref.RHO_C_BOSE_3D, rel=1e-10)


@pytest.mark.parametrize("q", [0.25, 0.9])
def test_q_scaling(q):
    disp = DispersionRelation.power_law(2.0, 3)
    assert q * critical_density(q, Constant(1.0), disp).value == pytest.approx(ref.RHO_C_BOSE_3D, rel=1e-10)


def test_critical_density_rejects_non_positive_q():
    with pytest.raises(QSignInvalid):
        critical_density(0.0, Constant(1.0), DispersionRelation.power_law(2.0, 3))


@pytest.mark.parametrize("q,mu,d,expected", [
    (-1.0, 0.0, 3, ref.RHO_FERMI_MU0_3D),
    (0.0, 0.0, 3, ref.RHO_BOLTZMANN_MU0_3D),
    (1.0, -0.5, 3, ref.RHO_BOSE_MU_M05_3D),
    (1.0, -1.0, 1, ref.RHO_BOSE_MU_M1_1D),
    (1.0, -1.0, 2, ref.RHO_BOSE_MU_M1_2D),
])
def test_density_oracles(q, mu, d, expected):
    res = density(QStatistics(q, mu), Constant(1.0), DispersionRelation.power_law(2.0, d))
    assert res.value == pytest.approx(expected, rel=1e-10)


def test_density_is_super_critical_above_mu_q():
    with pytest.raises(SuperCritical):
        density(QStatistics(1.0, 0.1), Constant(1.0), DispersionRelation.power_law(2.0, 3))


def test_critical_density_diverges_in_low_dimension():
    assert not critical_density(1.0, Constant(1.0), DispersionRelation.power_law(2.0, 2)).finite


def test_excited_zero_set_critical_density_is_finite():
    res = critical_density(1.0, ZeroAt(1.0, 0.5, 2.0), DispersionRelation.power_law(2.0, 3))
    assert res.finite and res.value > 0


def test_fermi_solver_recovers_mu():
    disp = DispersionRelation.power_law(2.0, 3)
    mu = fermi_solve_mu(Constant(1.0), disp, None, ref.RHO_FERMI_MU0_3D)
    assert mu == pytest.approx(0.0, abs=1e-9)


@settings(max_examples=15, deadline=None)
@given(mu1=st.floats(-4.0, -0.05), gap=st.floats(0.01, 1.0))
def test_density_increases_with_mu(mu1, gap):
    disp = DispersionRelation.power_law(2.0, 3)
    lo = density(QStatistics(1.0, mu1 - gap), Constant(1.0), disp).value
    hi = density(QStatistics(1.0, mu1), Constant(1.0), disp).value
    assert hi > lo
