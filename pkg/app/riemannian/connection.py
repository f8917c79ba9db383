"""
Levi-Civita connection of the left-invariant metric that makes
X_1, Y_1, ..., X_n, Y_n, T orthonormal.

For an orthonormal left-invariant frame with [e_i, e_j] = sum_k c[i, j, k] e_k,

    nabla_{e_i} e_j = 1/2 sum_k (c[i, j, k] + c[k, i, j] - c[j, k, i]) e_k

Frame indices follow frame_selectors(n): X1, Y1, ..., Xn, Yn, T.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from app.core.fields import dimension, frame, frame_coefficients, frame_selectors, lie_bracket, x_index, y_index
from app.errors import DimensionMismatchError, InvalidStructureConstantsError
from app.sr.hamiltonian import compiled_frame


@dataclass(frozen=True, eq=False)
class StructureConstants:
    n: int
    c: np.ndarray

    def __post_init__(self):
        dim = dimension(self.n)
        c = np.array(self.c, dtype=float)
        if c.shape != (dim, dim, dim):
            raise DimensionMismatchError(f"Structure constants on n={self.n} need shape {(dim, dim, dim)}, got {c.shape}.")
        if not np.array_equal(c, -c.transpose(1, 0, 2)):
            raise InvalidStructureConstantsError("Structure constants must satisfy c[i][j][k] = -c[j][i][k].")
        object.__setattr__(self, "c", c)

    def bracket(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Frame components of [A, B] for constant-coefficient A, B."""
        return np.einsum("i,j,ijk->k", a, b, self.c)


@dataclass(frozen=True, eq=False)
class ConnectionTable:
    """gamma[i, j, k] is the e_k coefficient of nabla_{e_i} e_j."""

    n: int
    gamma: np.ndarray

    def covariant(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """nabla_A B for constant-coefficient fields A, B."""
        return np.einsum("i,j,ijk->k", a, b, self.gamma)

    def metric_defect(self) -> float:
        return float(np.max(np.abs(self.gamma + self.gamma.transpose(0, 2, 1))))

    def torsion_defect(self, constants: StructureConstants) -> float:
        torsion = self.gamma - self.gamma.transpose(1, 0, 2) - constants.c
        return float(np.max(np.abs(torsion)))

    def entry(self, i: str, j: str) -> np.ndarray:
        """nabla_{e_i} e_j by selector, e.g. entry("X1", "Y1")."""
        names = frame_selectors(self.n)
        return self.gamma[names.index(i), names.index(j)]


@lru_cache(maxsize=None)
def _heisenberg_constants(n: int) -> np.ndarray:
    fields = frame(n)
    dim = dimension(n)
    origin = (0,) * dim
    c = np.zeros((dim, dim, dim))
    for i, V in enumerate(fields):
        for j, W in enumerate(fields):
            # left-invariant, so the frame components are constant
            c[i, j] = [float(v) for v in frame_coefficients(lie_bracket(V, W), origin)]
    return c


def heisenberg_structure_constants(n: int) -> StructureConstants:
    """Constants read off the exact brackets of the frame fields."""
    return StructureConstants(n=n, c=_heisenberg_constants(n).copy())


def connection_from_structure_constants(constants: StructureConstants) -> ConnectionTable:
    c = constants.c
    gamma = 0.5 * (c + np.einsum("kij->ijk", c) - np.einsum("jki->ijk", c))
    return ConnectionTable(n=constants.n, gamma=gamma)


def expected_connection_table(n: int) -> ConnectionTable:
    """
    The table written out by hand:
    nabla_X_i Y_i = T, nabla_Y_i X_i = -T, nabla_X_i T = nabla_T X_i = -Y_i,
    nabla_Y_i T = nabla_T Y_i = X_i, everything else zero.
    """
    dim = dimension(n)
    t = dim - 1
    gamma = np.zeros((dim, dim, dim))
    for i in range(1, n + 1):
        x, y = x_index(i), y_index(i)
        gamma[x, y, t] = 1.0
        gamma[y, x, t] = -1.0
        gamma[x, t, y] = -1.0
        gamma[t, x, y] = -1.0
        gamma[y, t, x] = 1.0
        gamma[t, y, x] = 1.0
    return ConnectionTable(n=n, gamma=gamma)


def geodesic_frame_rhs(u, v, gamma: float):
    """
    Frame velocity equations u_i' = -2 gamma v_i, v_i' = 2 gamma u_i,
    gamma' = 0 for a geodesic written as u_i X_i + v_i Y_i + gamma T.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return -2.0 * gamma * v, 2.0 * gamma * u, 0.0


def geodesic_rhs_from_connection(table: ConnectionTable, a) -> np.ndarray:
    """a' = -nabla_a a, the geodesic equation for frame components a."""
    a = np.asarray(a, dtype=float)
    return -table.covariant(a, a)


def riemannian_geodesic_vector_field(n: int, table: Optional[ConnectionTable] = None):
    """
    Right-hand side on [q, a]: q' = sum_a a_a e_a(q) from the compiled frame,
    a' = -nabla_a a from the connection.
    """
    table = table or connection_from_structure_constants(heisenberg_structure_constants(n))
    op = compiled_frame(n)
    dim = op.dim

    def rhs(t, y):
        q, a = y[:dim], y[dim:]
        return np.concatenate([op.matrix(q).T @ a, -table.covariant(a, a)])

    return rhs
