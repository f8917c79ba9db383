import math

import numpy as np
import pytest
import sympy

from app.core.fields import frame_field
from app.core.group import GroupPoint
from app.errors import DimensionMismatchError, InvalidInputError
from app.numerics.ode import Method, SolveOptions
from app.sr.extremals import NormalExtremalParams, closed_form_extremal, matched_initial_state
from app.sr.hamiltonian import (
    CotangentState,
    abnormal_classifier,
    energy_drift,
    fiber_hamiltonians,
    hamiltonian_rhs,
    horizontality_defect,
    integrate_cotangent,
    poisson_bracket,
    sr_hamiltonian,
)


def _state(theta=0.3, zeta=0.5):
    return matched_initial_state(NormalExtremalParams(n=1, r=(1.0,), theta=(theta,), zeta=zeta))


def test_fiber_hamiltonians_at_the_origin():
    h, k, h_T = fiber_hamiltonians(_state())
    assert h[0] == pytest.approx(math.cos(0.3))
    assert k[0] == pytest.approx(math.sin(0.3))
    assert h_T == 0.5
    assert sr_hamiltonian(_state()) == pytest.approx(0.5)


def test_fiber_hamiltonians_away_from_the_origin():
    s = CotangentState(n=1, q=GroupPoint(1, (2.0, 3.0), 0.0), xi=(1.0,), eta=(0.0,), zeta=1.0)
    h, k, _ = fiber_hamiltonians(s)
    # lam(X) = xi - y zeta, lam(Y) = eta + x zeta
    assert (h[0], k[0]) == (-2.0, 2.0)


def test_rhs_at_the_origin():
    derivative = hamiltonian_rhs(_state())
    assert derivative.q.to_floats() == pytest.approx((math.cos(0.3), math.sin(0.3), 0.0))
    assert derivative.xi[0] == pytest.approx(-0.5 * math.sin(0.3))
    assert derivative.eta[0] == pytest.approx(0.5 * math.cos(0.3))
    assert derivative.zeta == 0.0


def test_flow_reaches_the_half_turn_point():
    trajectory = integrate_cotangent(_state(theta=0.0), math.pi, SolveOptions(dt=1e-3))
    assert np.allclose(trajectory.final[:3], [0.0, 2.0, math.pi], atol=1e-9)


@pytest.mark.parametrize("zeta", [2.0, -1.0, 0.0])
def test_flow_conserves_energy_and_stays_horizontal(zeta):
    trajectory = integrate_cotangent(_state(zeta=zeta), 2 * math.pi, SolveOptions(dt=1e-3))
    assert energy_drift(trajectory.states, 1) <= 1e-8
    assert horizontality_defect(trajectory.states, 1) <= 1e-9


@pytest.mark.parametrize("t_max, zeta", [(2 * math.pi, 0.5), (10.0, 2.0), (20.0, -1.0)])
def test_adaptive_flow_stays_within_ten_tol_of_the_closed_form(t_max, zeta):
    params = NormalExtremalParams(n=1, r=(1.0,), theta=(0.3,), zeta=zeta)
    trajectory = integrate_cotangent(matched_initial_state(params), t_max, SolveOptions(method=Method.RKF45, tol=1e-9))
    exact = closed_form_extremal(params, t_max).point.to_floats()
    assert np.max(np.abs(trajectory.final[:3] - exact)) <= 1e-8


def test_adaptive_flow_agrees_with_fine_rk4():
    state = _state(theta=0.3, zeta=0.5)
    adaptive = integrate_cotangent(state, 2 * math.pi, SolveOptions(method=Method.RKF45, tol=1e-9))
    fixed = integrate_cotangent(state, 2 * math.pi, SolveOptions(dt=1e-4))
    assert np.max(np.abs(adaptive.final - fixed.final)) <= 1e-8


def test_poisson_bracket_mirrors_the_lie_bracket():
    bracket = poisson_bracket(frame_field(2, "X2"), frame_field(2, "Y2"))
    assert bracket == frame_field(2, "T").scale(2)
    with pytest.raises(DimensionMismatchError):
        poisson_bracket(frame_field(1, "X1"), frame_field(2, "Y1"))


@pytest.mark.parametrize("n, zeta", [(1, 0.5), (2, 1.0), (3, -2.0)])
def test_abnormal_bracket_matrix_is_two_zeta_identity(n, zeta):
    report = abnormal_classifier(n, zeta=zeta)
    assert report.bracket_matrix == 2 * sympy.Rational(zeta) * sympy.eye(n)
    assert report.determinant == (2 * sympy.Rational(zeta)) ** n
    assert report.kernel_dimension == 0
    assert report.constant_curves_only
    assert report.conclusion == "constant curves only"


def test_abnormal_classifier_is_point_independent():
    p = GroupPoint(1, (3, -2), 5)
    assert abnormal_classifier(1, at=p).full_matrix == abnormal_classifier(1).full_matrix


def test_abnormal_classifier_needs_a_nonzero_covector():
    with pytest.raises(InvalidInputError):
        abnormal_classifier(1, zeta=0.0)
