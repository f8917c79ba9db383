import numpy as np
import pytest

from app.errors import DimensionMismatchError, InvalidStructureConstantsError
from app.riemannian.connection import (
    StructureConstants,
    connection_from_structure_constants,
    expected_connection_table,
    geodesic_frame_rhs,
    geodesic_rhs_from_connection,
    heisenberg_structure_constants,
    riemannian_geodesic_vector_field,
)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_koszul_table_matches_the_hand_written_one(n):
    constants = heisenberg_structure_constants(n)
    table = connection_from_structure_constants(constants)
    assert np.array_equal(table.gamma, expected_connection_table(n).gamma)
    assert table.metric_defect() == 0.0
    assert table.torsion_defect(constants) == 0.0


def test_structure_constants_of_the_frame():
    c = heisenberg_structure_constants(2).c
    # [X_i, Y_i] = 2T is the only nonzero bracket
    assert c[0, 1, 4] == 2.0 and c[1, 0, 4] == -2.0
    assert c[2, 3, 4] == 2.0
    assert np.count_nonzero(c) == 4


def test_named_entries():
    table = expected_connection_table(1)
    assert list(table.entry("X1", "Y1")) == [0.0, 0.0, 1.0]
    assert list(table.entry("T", "X1")) == [0.0, -1.0, 0.0]
    assert list(table.entry("Y1", "T")) == [1.0, 0.0, 0.0]
    assert not np.any(table.entry("X1", "X1"))


def test_geodesic_equation_from_the_table_matches_the_rotation_law():
    table = expected_connection_table(2)
    a = np.array([0.3, -0.2, 0.5, 0.1, 0.4])
    du, dv, dg = geodesic_frame_rhs(a[0:-1:2], a[1:-1:2], a[-1])
    derivative = geodesic_rhs_from_connection(table, a)
    assert np.allclose(derivative[0:-1:2], du)
    assert np.allclose(derivative[1:-1:2], dv)
    assert derivative[-1] == pytest.approx(dg)


def test_structure_constants_are_validated():
    with pytest.raises(DimensionMismatchError):
        StructureConstants(n=1, c=np.zeros((2, 2, 2)))
    c = np.zeros((3, 3, 3))
    c[0, 1, 2] = 2.0
    with pytest.raises(InvalidStructureConstantsError):
        StructureConstants(n=1, c=c)


def test_geodesic_vector_field_at_the_origin():
    rhs = riemannian_geodesic_vector_field(1)
    a = np.array([0.6, 0.0, 0.8])
    out = rhs(0.0, np.concatenate([np.zeros(3), a]))
    assert out[:3] == pytest.approx(a)
    assert out[3:] == pytest.approx(geodesic_rhs_from_connection(expected_connection_table(1), a))
    assert out[3:] == pytest.approx([0.0, 0.96, 0.0])
