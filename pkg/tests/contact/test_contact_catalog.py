import pytest
import sympy

from app.contact.catalog import (
    SpMatrix,
    block_index_to_core,
    build_catalog,
    core_index_to_block,
    is_infinitesimally_symplectic,
    sp_basis,
    sp_image_field,
    symplectic_form_matrix,
    v1_index_to_core,
)
from app.core.fields import x_index, y_index
from app.core.polynomial import Polynomial
from app.errors import DimensionMismatchError, InvalidInputError


def test_symplectic_form_matrix():
    assert symplectic_form_matrix(1) == sympy.Matrix([[0, -2], [2, 0]])
    J = symplectic_form_matrix(2)
    assert J == sympy.Matrix([[0, 0, -2, 0], [0, 0, 0, -2], [2, 0, 0, 0], [0, 2, 0, 0]])


def test_index_maps():
    assert [v1_index_to_core(2, r) for r in range(4)] == [0, 2, 1, 3]
    assert block_index_to_core(2, 0) == 4
    assert [core_index_to_block(2, block_index_to_core(2, k)) for k in range(5)] == list(range(5))
    with pytest.raises(DimensionMismatchError):
        v1_index_to_core(1, 2)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_sp_basis_has_the_right_dimension(n):
    basis = sp_basis(n)
    assert len(basis) == n * (2 * n + 1)
    J = symplectic_form_matrix(n)
    assert all(is_infinitesimally_symplectic(m.A, J) for m in basis.values())
    stacked = sympy.Matrix([list(m.A) for m in basis.values()])
    assert stacked.rank() == len(basis)


def test_sp_matrix_validation():
    with pytest.raises(InvalidInputError):
        SpMatrix(1, sympy.Matrix([[1, 0], [0, 0]]))
    with pytest.raises(DimensionMismatchError):
        SpMatrix(1, sympy.eye(3))


def test_sp_image_field_is_linear():
    field = sp_image_field(sp_basis(1)["a11"])
    x, y = Polynomial.variable(3, 0), Polynomial.variable(3, 1)
    assert field.components[0] == x
    assert field.components[1] == -y
    assert field.components[2] == 0


@pytest.mark.parametrize("n", [1, 2])
def test_catalog_sizes(n):
    catalog = build_catalog(n)
    sizes = catalog.sizes()
    assert sizes == {"alpha": 2 * n + 1, "sp": n * (2 * n + 1), "dilation_special": 2 * n + 1, "gamma": 1}
    assert len(catalog.members()) == (n + 1) * (2 * n + 3)
    assert len(catalog.beta_basis) == sizes["sp"] + sizes["dilation_special"]


def test_multipliers_of_each_family():
    n = 2
    catalog = build_catalog(n)
    dim = 2 * n + 1
    for member in catalog.alpha + catalog.sp:
        assert member.multiplier == 0, member.name
    assert catalog.member("dilation").multiplier == 2
    for i in range(1, n + 1):
        x, y = Polynomial.variable(dim, x_index(i)), Polynomial.variable(dim, y_index(i))
        assert catalog.member(f"special_x{i}").multiplier == y * 2
        assert catalog.member(f"special_y{i}").multiplier == x * -2
    assert catalog.member("gamma").multiplier == Polynomial.variable(dim, dim - 1) * 2


def test_member_lookup():
    catalog = build_catalog(1)
    assert catalog.member("sp_b11").family == "sp"
    assert [m.name for m in catalog.alpha] == ["alpha_x1", "alpha_y1", "alpha_z"]
    with pytest.raises(KeyError):
        catalog.member("sp_a22")
