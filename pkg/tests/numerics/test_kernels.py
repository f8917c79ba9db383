import math

import numpy as np
import pytest

from app.numerics.kernels import LIFT_SERIES_CUTOFF, chord_factor, lift, lift_over_sin_squared, sinc


def test_straight_line_limits():
    assert sinc(0.0) == 1.0
    assert chord_factor(0.0) == 1.0
    assert lift(0.0) == 0.0
    assert lift_over_sin_squared(0.0) == 0.0


def test_known_values():
    assert chord_factor(math.pi / 2) == pytest.approx(2j / math.pi, abs=1e-15)
    assert abs(chord_factor(math.pi)) < 1e-15
    assert lift(math.pi / 2) == pytest.approx(1 / math.pi, rel=1e-14)
    assert lift(math.pi) == pytest.approx(1 / (2 * math.pi), rel=1e-14)


def test_chord_factor_matches_its_definition():
    a = np.array([-2.5, -0.3, 0.7, 3.0])
    expected = (np.exp(2j * a) - 1) / (2j * a)
    assert np.allclose(chord_factor(a), expected, rtol=1e-13, atol=0)


def test_lift_is_odd_and_continuous_across_the_series_cutoff():
    a = np.linspace(-2.0, 2.0, 41)
    assert np.allclose(lift(-a), -lift(a), rtol=0, atol=1e-16)
    # each branch against the other branch's formula at the cutoff
    below = math.nextafter(LIFT_SERIES_CUTOFF, 0.0)
    direct = (2 * below - math.sin(2 * below)) / (4 * below * below)
    assert abs(lift(below) - direct) < 1e-13
    at = LIFT_SERIES_CUTOFF
    series = at * (1 / 3 - at**2 / 15 + 2 * at**4 / 315)
    assert abs(lift(at) - series) < 1e-13


def test_arrays_in_arrays_out():
    values = lift(np.zeros((2, 3)))
    assert isinstance(values, np.ndarray) and values.shape == (2, 3)
    assert isinstance(sinc(0.5), float)


def test_lift_over_sin_squared_blows_up_at_poles():
    near = lift_over_sin_squared(math.pi - 1e-6)
    assert near > 1e10
