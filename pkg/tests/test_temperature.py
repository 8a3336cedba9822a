import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lepbec.dispersion import DispersionRelation
from lepbec.errors import UnboundedAtZero
from lepbec.temperature import (Constant, Custom, PowerLog, ZeroAt, check_admissibility, dimension_condition,
                                probe_beta_near_zero, profile_from_config)


def test_constant_values():
    p = Constant(2.0)
    assert p.tilde_beta(3.0) == 6.0
    assert p.beta(0.0) == 2.0
    assert p.zero_set == (0.0,)


def test_powerlog_is_continuous_at_knot():
    p = PowerLog(0.5, 3.0)
    assert p.tilde_beta(1.0) == pytest.approx(1.0)
    assert p.tilde_beta(1.0 + 1e-12) == pytest.approx(1.0, abs=1e-10)
    assert p.tilde_beta(math.e) == pytest.approx(4.0)


def test_zeroat_vanishes_only_at_level():
    p = ZeroAt(1.0, 0.5, 2.0)
    assert p.tilde_beta(1.0) == 0.0
    assert p.tilde_beta(0.0) == pytest.approx(1.0)
    assert p.tilde_beta(1.0 + math.e) == pytest.approx(3.0)
    assert np.all(np.asarray(p.tilde_beta(np.array([0.5, 1.5, 3.0]))) > 0)


def test_beta_undefined_at_zero_raises():
    with pytest.raises(ValueError):
        PowerLog(-0.5, 2.0).beta(0.0)
    with pytest.raises(ValueError):
        ZeroAt(1.0, 0.5, 2.0).beta(0.0)


def test_negative_energy_rejected():
    with pytest.raises(ValueError):
        Constant(1.0).tilde_beta(-1.0)


@pytest.mark.parametrize("cfg", [{"variant": "constant", "beta0": 0.7},
                                 {"variant": "powerlog", "alpha0": 0.25, "alpha_inf": 3.0},
                                 {"variant": "zeroat", "x0": 0.5, "a": 2.0, "alpha_inf": 1.5}])
def test_config_roundtrip(cfg):
    p = profile_from_config(cfg)
    assert p.to_config() == cfg


def test_config_rejects_unknown_variant():
    with pytest.raises(ValueError):
        profile_from_config({"variant": "mystery"})


def test_probe_finite_and_unbounded():
    est, _ = probe_beta_near_zero(Constant(1.5))
    assert est == 1.5
    with pytest.raises(UnboundedAtZero):
        probe_beta_near_zero(PowerLog(-0.5, 2.0))


def test_admissibility_of_standard_profiles():
    disp = DispersionRelation.power_law(2.0, 3)
    for p in (Constant(1.0), PowerLog(0.0, 2.0), ZeroAt(1.0, 0.5, 2.0)):
        assert check_admissibility(p, disp).ok


def test_undeclared_zero_is_caught():
    # beta vanishes at x = 2 but only the origin is declared
    p = Custom(lambda x: np.abs(x - 2.0), declared_zero_set=(0.0,))
    rep = check_admissibility(p, DispersionRelation.power_law(2.0, 3))
    assert not rep.zeroSetFinite
    assert not rep.ok


def test_slow_tail_is_not_integrable():
    # tilde_beta = 0.5 ln x + 1 at large x gives an x^(1/2 - 1/2) tail in d = 3, s = 2
    rep = check_admissibility(PowerLog(0.0, 0.5), DispersionRelation.power_law(2.0, 3))
    assert not rep.tailIntegrable


@pytest.mark.parametrize("s,d,a0,ainf,zero,inf_", [
    (2, 3, 0, 2, True, True),
    (2, 3, 0.4, 2, True, True),
    (2, 3, 0.5, 2, False, True),
    (2, 3, 1, 2, False, True),
    (2, 5, 0, 2, True, False),
    (1, 1, -0.5, 2, True, True),
])
def test_dimension_condition(s, d, a0, ainf, zero, inf_):
    v = dimension_condition(s, d, a0, ainf)
    assert (v.convergesAtZero, v.convergesAtInfinity) == (zero, inf_)
    assert v.condensationPossible == (zero and inf_)


@settings(max_examples=50, deadline=None)
@given(a0=st.floats(-0.9, 2.0), ainf=st.floats(0.0, 5.0), x=st.floats(0.0, 100.0))
def test_powerlog_tilde_beta_nonnegative_and_monotone(a0, ainf, x):
    p = PowerLog(a0, ainf)
    t = p.tilde_beta(x)
    assert t >= 0
    assert p.tilde_beta(x + 0.5) >= t - 1e-12


@settings(max_examples=50, deadline=None)
@given(x0=st.floats(0.0, 5.0), a=st.floats(0.1, 3.0), x=st.floats(0.0, 20.0))
def test_zeroat_positive_off_level(x0, a, x):
    p = ZeroAt(x0, a, 2.0)
    t = p.tilde_beta(x)
    if abs(x - x0) > 1e-6:
        assert t > 0
    else:
        assert t >= 0
