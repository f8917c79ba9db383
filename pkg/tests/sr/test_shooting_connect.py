import math
from unittest.mock import patch

import numpy as np
import pytest

from app.core.group import GroupPoint
from app.errors import InvalidInputError, NoSolutionFoundError
from app.sr.extremals import NormalExtremalParams, closed_form_extremal
from app.sr.shooting import ShootingOptions, ShootingSolver, connect, scaled_endpoint


def test_scaled_endpoint_matches_the_closed_form():
    p = NormalExtremalParams(n=1, r=(1.0,), theta=(0.7,), zeta=0.4)
    t = 2.5
    w = t * p.direction[0]
    y = np.array([w.real, w.imag, p.zeta * t])
    expected = closed_form_extremal(p, t).point.to_floats()
    assert np.allclose(scaled_endpoint(y), expected, atol=1e-13)


def test_connect_inverts_the_half_turn():
    result = connect(GroupPoint(1, (0.0, 2.0), math.pi))
    assert result.params.zeta == pytest.approx(0.5, abs=1e-6)
    assert result.t == pytest.approx(math.pi, abs=1e-6)
    assert result.residual <= 1e-6
    assert result.starts > 0


def test_connect_horizontal_target_is_a_straight_line():
    result = connect(GroupPoint(1, (2.0, 0.0), 0.0))
    assert abs(result.params.zeta) <= 1e-8
    assert result.t == pytest.approx(2.0, abs=1e-8)


@pytest.mark.parametrize("z", [math.pi, -3.0])
def test_connect_on_the_z_axis(z):
    result = connect(GroupPoint(1, (0.0, 0.0), z))
    assert result.t == pytest.approx(math.sqrt(2 * math.pi * abs(z)), abs=1e-6)
    reached = closed_form_extremal(result.params, result.t).point.to_floats()
    assert np.allclose(reached, [0.0, 0.0, z], atol=1e-6)


@pytest.mark.slow
def test_round_trip_on_random_parameters():
    rng = np.random.default_rng(11)
    targets = []
    for _ in range(100):
        params = NormalExtremalParams(
            n=1, r=(1.0,), theta=(rng.uniform(0.0, 2 * math.pi),), zeta=rng.uniform(-2.0, 2.0)
        )
        targets.append(closed_form_extremal(params, rng.uniform(0.1, 3.0)).point)
    targets += [GroupPoint(1, (0.0, 0.0), z) for z in (-5.0, -3.5, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 3.5, 5.0)]

    for target in targets:
        result = connect(target)
        reached = closed_form_extremal(result.params, result.t).point.to_floats()
        assert np.allclose(reached, target.to_floats(), rtol=0, atol=1e-6), target
        assert result.residual <= 1e-6


def test_connect_in_higher_dimension():
    params = NormalExtremalParams(n=2, r=(0.6, 0.8), theta=(0.3, 1.1), zeta=0.6)
    target = closed_form_extremal(params, 2.0).point
    result = connect(target)
    reached = closed_form_extremal(result.params, result.t).point.to_floats()
    assert np.allclose(reached, target.to_floats(), atol=1e-6)


def test_worker_count_does_not_change_the_answer():
    target = GroupPoint(1, (0.5, -1.0), 0.8)
    single = connect(target, ShootingOptions(workers=1)).to_dict()
    pooled = connect(target, ShootingOptions(workers=3)).to_dict()
    assert single == pooled


def test_origin_is_rejected():
    with pytest.raises(InvalidInputError):
        connect(GroupPoint.origin(1))


def test_exhausted_grid_raises():
    with patch.object(ShootingSolver, "_shoot", return_value=None):
        with pytest.raises(NoSolutionFoundError):
            connect(GroupPoint(1, (1.0, 0.0), 0.0))


def test_option_validation():
    with pytest.raises(InvalidInputError):
        ShootingOptions(tol=0.0)
    with pytest.raises(InvalidInputError):
        ShootingOptions(zeta_grid=())
