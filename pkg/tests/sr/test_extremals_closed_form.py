import math

import numpy as np
import pytest

from app.errors import DimensionMismatchError, InvalidInputError, MissingControlsError, NotNormalizedError
from app.numerics.ode import SolveOptions
from app.sr.extremals import (
    NormalExtremalParams,
    SampledCurve,
    closed_form_extremal,
    first_return,
    integrate_extremal,
    sample_extremal,
    sr_length,
)


def _params(zeta, theta=0.0):
    return NormalExtremalParams(n=1, r=(1.0,), theta=(theta,), zeta=zeta)


def test_half_turn_and_full_turn():
    half = closed_form_extremal(_params(0.5), math.pi).point
    full = closed_form_extremal(_params(0.5), 2 * math.pi).point
    assert half.to_floats() == pytest.approx((0.0, 2.0, math.pi), abs=1e-12)
    assert full.to_floats() == pytest.approx((0.0, 0.0, 2 * math.pi), abs=1e-12)


def test_negative_zeta_mirrors_the_curve():
    point = closed_form_extremal(_params(-0.5), math.pi).point
    assert point.to_floats() == pytest.approx((0.0, -2.0, -math.pi), abs=1e-12)


def test_straight_line():
    curve = sample_extremal(_params(0.0, theta=0.4), np.linspace(0.0, 3.0, 7))
    assert np.all(curve.points[:, -1] == 0.0)
    assert np.allclose(curve.points[:, 0], curve.times * math.cos(0.4))
    assert np.allclose(curve.points[:, 1], curve.times * math.sin(0.4))


def test_controls_rotate_at_twice_zeta():
    sample = closed_form_extremal(_params(0.25, theta=0.1), 2.0)
    assert sample.controls == pytest.approx((math.cos(1.1), math.sin(1.1)))


def test_z_formula():
    p = NormalExtremalParams(n=2, r=(0.6, 0.8), theta=(0.3, 1.1), zeta=0.7)
    t = np.linspace(0.0, 6.0, 31)
    expected = t / (2 * 0.7) - np.sin(2 * 0.7 * t) / (4 * 0.7**2)
    assert np.allclose(sample_extremal(p, t).points[:, -1], expected, atol=1e-13)


def test_first_return():
    t, point = first_return(_params(0.5))
    assert t == pytest.approx(2 * math.pi)
    assert point.to_floats() == pytest.approx((0.0, 0.0, 2 * math.pi))
    reached = closed_form_extremal(_params(0.5), t).point
    assert reached.to_floats() == pytest.approx(point.to_floats(), abs=1e-12)
    with pytest.raises(InvalidInputError):
        first_return(_params(0.0))


_DIRECTIONS = {1: ((1.0,), (0.3,)), 2: ((0.6, 0.8), (0.3, 1.1))}


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("zeta", [2.0, -2.0, 1.0, -1.0, 0.5, -0.5, 0.1, -0.1])
def test_closed_form_matches_the_hamiltonian_flow(n, zeta):
    r, theta = _DIRECTIONS[n]
    params = NormalExtremalParams(n=n, r=r, theta=theta, zeta=zeta)
    twin = integrate_extremal(params, 2 * math.pi, SolveOptions(dt=1e-3))
    closed = sample_extremal(params, twin.times)
    assert np.max(np.abs(closed.points - twin.points)) <= 1e-6
    assert np.max(np.abs(closed.controls - twin.controls)) <= 1e-6


@pytest.mark.parametrize("theta", [0.0, 0.4, 2.5])
def test_small_zeta_approaches_the_straight_line(theta):
    times = np.linspace(0.0, 1.0, 21)
    curved = sample_extremal(_params(1e-6, theta=theta), times)
    straight = sample_extremal(_params(0.0, theta=theta), times)
    assert np.max(np.abs(curved.points - straight.points)) <= 1e-4


def test_length_of_an_arc_length_curve():
    curve = sample_extremal(_params(1.3), np.linspace(0.0, 2.5, 501))
    assert sr_length(curve) == pytest.approx(2.5, abs=1e-12)


def test_length_needs_controls():
    curve = SampledCurve(n=1, times=[0.0, 1.0], points=np.zeros((2, 3)))
    with pytest.raises(MissingControlsError):
        sr_length(curve)


def test_parameter_validation_and_gauge():
    with pytest.raises(NotNormalizedError):
        closed_form_extremal(NormalExtremalParams(n=1, r=(2.0,), theta=(0.0,), zeta=0.0), 1.0)
    with pytest.raises(DimensionMismatchError):
        NormalExtremalParams(n=2, r=(1.0,), theta=(0.0,), zeta=0.0)
    with pytest.raises(InvalidInputError):
        NormalExtremalParams(n=1, r=(-1.0,), theta=(0.0,), zeta=0.0)

    p = NormalExtremalParams(n=2, r=(1.0, 0.0), theta=(0.5 + 2 * math.pi, 3.0), zeta=1.0)
    assert p.theta == pytest.approx((0.5, 0.0))
    assert p.A == pytest.approx((math.sin(0.5), 0.0))
    assert p.B == pytest.approx((math.cos(0.5), 0.0))


def test_normalized_constructor():
    p = NormalExtremalParams.normalized([3.0, 4.0], [0.0, 0.0], 1.0)
    assert p.r == pytest.approx((0.6, 0.8))
    assert p.norm_deviation < 1e-15
