import itertools
from fractions import Fraction

import numpy as np
import pytest

from app.contact.catalog import build_catalog
from app.contact.lie_derivative import (
    TwoForm,
    contact_multiplier,
    differential,
    exterior_derivative,
    interior_product,
    lie_derivative_one_form,
)
from app.core.fields import PolyOneForm, PolyVectorField, contact_form, frame_field, lie_bracket
from app.core.polynomial import Polynomial
from app.errors import DimensionMismatchError, NotContactError


def _var(k, n_vars=3):
    return Polynomial.variable(n_vars, k)


def test_differential_of_a_monomial():
    f = _var(0) * _var(2) * _var(2)
    df = differential(f, 1)
    assert df.components[0] == _var(2) * _var(2)
    assert df.components[1] == 0
    assert df.components[2] == _var(0) * _var(2) * 2


def test_exterior_derivative_of_the_contact_form():
    d_theta = exterior_derivative(contact_form(1))
    # theta = dz + y dx - x dy, so d theta = -2 dx ^ dy
    assert d_theta.components[0][1] == -2
    assert d_theta.components[1][0] == 2
    assert d_theta.components[0][2] == 0


def test_exact_forms_are_closed():
    f = _var(0) * _var(1) + _var(2) ** 3
    assert exterior_derivative(differential(f, 1)).is_zero


def test_interior_product_of_d_theta():
    d_theta = exterior_derivative(contact_form(1))
    contracted = interior_product(PolyVectorField.coordinate(1, 0), d_theta)
    assert [str(c) for c in contracted.components] == ["0", "-2", "0"]


def test_two_forms_must_be_antisymmetric():
    one = Polynomial.constant(3, 1)
    zero = Polynomial.zero(3)
    table = ((zero, one, zero), (one, zero, zero), (zero, zero, zero))
    with pytest.raises(ValueError):
        TwoForm(1, table)
    with pytest.raises(DimensionMismatchError):
        TwoForm(1, ((zero,),))


def test_lie_derivative_of_a_left_invariant_field_vanishes_on_theta():
    for selector in ("X1", "Y1", "T"):
        derivative = lie_derivative_one_form(frame_field(1, selector), contact_form(1))
        if selector == "T":
            assert derivative == PolyOneForm.zero(1)
        else:
            # L_X theta = i_X d theta, which is -2 dy or 2 dx
            assert not all(c.is_zero for c in derivative.components)


def test_dilation_scales_theta_by_two():
    E = PolyVectorField(1, (_var(0), _var(1), _var(2) * 2))
    assert contact_multiplier(E) == 2


def test_non_contact_field_reports_its_residual():
    with pytest.raises(NotContactError) as info:
        contact_multiplier(PolyVectorField.coordinate(1, 0))
    residual = info.value.residual
    assert residual.components[1] == -1
    assert residual.components[0] == 0 and residual.components[2] == 0


def test_multiplier_is_a_polynomial_function():
    z = _var(2)
    field = PolyVectorField(1, (_var(0) * z, _var(1) * z, z * z))
    assert contact_multiplier(field) == z * 2
    assert contact_multiplier(field).evaluate((0, 0, Fraction(3, 2))) == 3


def test_dimension_checks():
    with pytest.raises(DimensionMismatchError):
        contact_multiplier(frame_field(1, "T"), n=2)
    with pytest.raises(DimensionMismatchError):
        lie_derivative_one_form(frame_field(1, "T"), contact_form(2))


def _random_components(rng, count, dim=3):
    monomials = [m for m in itertools.product(range(3), repeat=dim) if sum(m) <= 2]
    return tuple(
        Polynomial(dim, {m: Fraction(int(rng.integers(-3, 4)), int(rng.integers(1, 4))) for m in monomials})
        for _ in range(count)
    )


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_lie_derivative_of_a_bracket_is_the_commutator(seed):
    rng = np.random.default_rng(seed)
    X = PolyVectorField(1, _random_components(rng, 3))
    Y = PolyVectorField(1, _random_components(rng, 3))
    omega = PolyOneForm(1, _random_components(rng, 3))
    L = lie_derivative_one_form
    assert L(lie_bracket(X, Y), omega) == L(X, L(Y, omega)) - L(Y, L(X, omega))


def test_multiplier_is_linear_in_the_field():
    members = build_catalog(2).members()
    rng = np.random.default_rng(5)
    for _ in range(20):
        a, b = rng.choice(len(members), size=2, replace=False)
        A, B = members[a], members[b]
        assert contact_multiplier(A.field + B.field) == A.multiplier + B.multiplier
        combined = A.field.scale(3) - B.field.scale(Fraction(1, 2))
        assert contact_multiplier(combined) == A.multiplier * 3 - B.multiplier * Fraction(1, 2)
