import math

import numpy as np
import pytest

import reference_values as ref
from lepbec.dispersion import DispersionRelation
from lepbec.errors import NonIntegrable, SuperCritical, UnsupportedDimension
from lepbec.kernel_engine import (GradientPointMass, PointMass, SphereAverage, SurfaceAtoms, TwoPointKernel,
                                  l2_pairing, lep_residual, monotonicity_probe, pair, positivity_probe, reality_check,
                                  relative_residual, validate)
from lepbec.statistics import QStatistics
from lepbec.temperature import Constant, ZeroAt
from lepbec.testfunctions import Bump, PhaseModulated


@pytest.fixture
def bose(disp3):
    return TwoPointKernel(QStatistics(1.0, 0.0), Constant(1.0), disp3)


def test_centred_bump_pairings(bose):
    f = Bump((0.0, 0.0, 0.0), 1.0)
    assert pair(bose, f, f).real == pytest.approx(ref.PAIR_CONSTANT_CENTRED_BUMP, rel=1e-10)
    assert l2_pairing(f, f, bose).real == pytest.approx(ref.L2_CENTRED_BUMP, rel=1e-12)


def test_excited_zero_set_pairing(disp3):
    k = TwoPointKernel(QStatistics(1.0, 0.0), ZeroAt(1.0, 0.5, 2.0), disp3)
    f = Bump((0.0, 0.0, 0.0), 1.5)
    assert pair(k, f, f).real == pytest.approx(ref.PAIR_ZEROAT_CENTRED_BUMP, rel=1e-9)


def _cartesian(kernel, f, g, c, rho, n):
    # midpoint-free trapezoid over the bounding box of the smaller support
    ax = [np.linspace(ci - rho, ci + rho, n) for ci in c]
    X = np.stack(np.meshgrid(*ax, indexing="ij"), -1)
    r = np.linalg.norm(X, axis=-1)
    vals = f._eval(X) * np.conj(g._eval(X)) * kernel.occupation_radial(r)
    return vals.sum() * (ax[0][1] - ax[0][0]) ** 3


def test_off_centre_pair_matches_cartesian_sum(disp3):
    k = TwoPointKernel(QStatistics(0.5, 0.2), Constant(1.0), disp3)
    f = Bump((0.5, 0.3, -0.2), 0.8)
    g = PhaseModulated(Bump((0.7, 0.1, 0.0), 0.6), (1.0, 2.0, 0.5))
    oracle = _cartesian(k, f, g, (0.7, 0.1, 0.0), 0.6, 97)
    assert abs(pair(k, f, g) - oracle) / abs(oracle) < 1e-8


def test_sesquilinearity(bose):
    f, f2 = Bump((0.1, 0.0, 0.0), 0.7), Bump((0.0, 0.3, 0.0), 0.5)
    g = PhaseModulated(Bump((0.0, 0.0, 0.1), 0.6), (0.0, 1.0, 0.0))
    a = 0.7 - 0.4j
    lhs = pair(bose, f + a * f2, g)
    assert lhs == pytest.approx(pair(bose, f, g) + a * pair(bose, f2, g), rel=1e-12)
    assert pair(bose, g, a * f) == pytest.approx(np.conj(a) * pair(bose, g, f), rel=1e-12)


def test_hermiticity_and_positivity(bose):
    f = PhaseModulated(Bump((0.2, 0.0, 0.1), 0.8), (1.0, 0.0, -1.0))
    g = Bump((0.0, 0.2, 0.0), 0.6)
    assert reality_check(bose, f, g) < 1e-14
    assert positivity_probe(bose, f) > 0


def test_monotonicity(bose):
    small = 0.5 * Bump((0.0, 0.0, 0.0), 0.9)
    big = Bump((0.0, 0.0, 0.0), 0.9)
    assert monotonicity_probe(bose, small, big)


@pytest.mark.parametrize("q,mu", [(1.0, -0.5), (0.5, 0.2), (0.0, 0.3), (-1.0, 1.0)])
def test_diagonal_kernel_solves_kernel_equation(disp3, q, mu):
    k = TwoPointKernel(QStatistics(q, mu), Constant(1.0), disp3)
    f = Bump((0.5, 0.3, -0.2), 0.8)
    g = PhaseModulated(Bump((0.7, 0.1, 0.0), 0.6), (1.0, 2.0, 0.5))
    assert relative_residual(k, f, g) < 1e-12


def test_condensates_at_the_origin(disp3):
    parts = (PointMass(2.0, (0.0, 0.0, 0.0)), GradientPointMass(1.5))
    k = TwoPointKernel(QStatistics(0.5, math.log(2.0)), Constant(1.0), disp3, parts)
    assert validate(k).ok
    f = Bump((0.2, 0.1, -0.1), 0.9)
    g = PhaseModulated(Bump((0.1, 0.0, 0.2), 0.7), (1.0, 2.0, 0.5))
    assert relative_residual(k, f, g) < 1e-12


def test_excited_sphere_condensates(disp3):
    parts = (SphereAverage(1.0, 1.0), PointMass(0.7, (0.0, 0.6, 0.8)), SurfaceAtoms(((0.3, (1.0, 0.0, 0.0)),)))
    k = TwoPointKernel(QStatistics(1.0, 0.0), ZeroAt(1.0, 0.5, 2.0), disp3, parts)
    assert validate(k).ok
    f, g = Bump((0.9, 0.3, 0.0), 0.5), Bump((0.8, 0.0, 0.3), 0.6)
    assert relative_residual(k, f, g) < 1e-10


def test_misplaced_point_mass_residual_prediction(disp3):
    D, p = 2.0, (0.3, 0.0, 0.0)
    k = TwoPointKernel(QStatistics(1.0, 0.0), Constant(1.0), disp3, (PointMass(D, p),))
    assert not validate(k).ok
    f, g = Bump((0.2, 0.1, -0.1), 0.9), Bump((0.3, 0.0, 0.2), 0.7)
    pred = D * math.expm1(0.09) * f(p) * np.conj(g(p))
    assert abs(lep_residual(k, f, g) - pred) / abs(pred) < 1e-10


def test_singular_part_needs_critical_mu(disp3):
    k = TwoPointKernel(QStatistics(1.0, -0.2), Constant(1.0), disp3, (PointMass(1.0, (0.0, 0.0, 0.0)),))
    rep = validate(k)
    assert not rep.ok and "critical" in rep.violations[0]


def test_gradient_part_needs_smooth_minimum():
    k = TwoPointKernel(QStatistics(1.0, 0.0), Constant(1.0), DispersionRelation.power_law(1.0, 3),
                       (GradientPointMass(1.0),))
    assert not validate(k).ok


def test_supercritical_kernel_is_rejected(disp3):
    with pytest.raises(SuperCritical):
        TwoPointKernel(QStatistics(1.0, 0.1), Constant(1.0), disp3)


def test_infrared_divergence_is_reported():
    k = TwoPointKernel(QStatistics(1.0, 0.0), Constant(1.0), DispersionRelation.power_law(2.0, 2))
    f = Bump((0.0, 0.0), 1.0)
    with pytest.raises(NonIntegrable):
        pair(k, f, f)


def test_high_dimension_unsupported():
    k = TwoPointKernel(QStatistics(1.0, -1.0), Constant(1.0), DispersionRelation.power_law(2.0, 4))
    f = Bump((0.0, 0.0, 0.0, 0.0), 1.0)
    with pytest.raises(UnsupportedDimension):
        pair(k, f, f)
