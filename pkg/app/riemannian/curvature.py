"""
Curvature of the left-invariant metric, the parallel field along the
vertical geodesic and its first conjugate point.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from app.core.fields import dimension, x_index, y_index
from app.errors import (
    DegeneratePlaneError,
    InconsistentInputsError,
    InvalidInputError,
    NoConjugatePointFoundError,
)
from app.numerics.ode import OdeProblem, SolveOptions, integrate
from app.riemannian.connection import (
    ConnectionTable,
    StructureConstants,
    connection_from_structure_constants,
    heisenberg_structure_constants,
)


logger = logging.getLogger(__name__)

TORSION_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class CurvatureTensor:
    """R[i, j, k, l] is the e_l coefficient of R(e_i, e_j) e_k."""

    n: int
    R: np.ndarray

    def apply(self, a, b, c) -> np.ndarray:
        return np.einsum("i,j,k,ijkl->l", a, b, c, self.R)

    def antisymmetry_defect(self) -> float:
        return float(np.max(np.abs(self.R + self.R.transpose(1, 0, 2, 3))))

    def bianchi_defect(self) -> float:
        cyclic = self.R + self.R.transpose(1, 2, 0, 3) + self.R.transpose(2, 0, 1, 3)
        return float(np.max(np.abs(cyclic)))


def curvature_tensor(table: ConnectionTable, constants: StructureConstants) -> CurvatureTensor:
    """
    R(e_i, e_j) e_k = nabla_i nabla_j e_k - nabla_j nabla_i e_k - nabla_[e_i, e_j] e_k
    with constant coefficients.
    """
    if table.n != constants.n:
        raise InconsistentInputsError("Connection and structure constants live on different groups.")
    if table.torsion_defect(constants) > TORSION_TOL:
        raise InconsistentInputsError("Connection is not torsion-free for these structure constants.")
    G, c = table.gamma, constants.c
    R = (
        np.einsum("jkm,iml->ijkl", G, G)
        - np.einsum("ikm,jml->ijkl", G, G)
        - np.einsum("ijm,mkl->ijkl", c, G)
    )
    return CurvatureTensor(n=table.n, R=R)


def heisenberg_curvature(n: int) -> CurvatureTensor:
    constants = heisenberg_structure_constants(n)
    return curvature_tensor(connection_from_structure_constants(constants), constants)


def sectional_curvature(A, B, tensor: Optional[CurvatureTensor] = None) -> float:
    """K(A, B) = <R(A, B) B, A> / (|A|^2 |B|^2 - <A, B>^2) for frame-coefficient vectors."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.shape != B.shape or A.ndim != 1:
        raise InvalidInputError("A and B must be frame-coefficient vectors of equal length.")
    tensor = tensor or heisenberg_curvature((A.size - 1) // 2)
    area = float(A @ A) * float(B @ B) - float(A @ B) ** 2
    if area <= 1e-14 * max(1e-300, float(A @ A) * float(B @ B)):
        raise DegeneratePlaneError("A and B are linearly dependent; the plane is degenerate.")
    return float(tensor.apply(A, B, B) @ A) / area


def frame_vector(n: int, selector: str) -> np.ndarray:
    """Unit frame-coefficient vector for "X<i>", "Y<i>" or "T"."""
    vector = np.zeros(dimension(n))
    if selector == "T":
        vector[-1] = 1.0
    elif selector[0] in "XY" and selector[1:].isdigit() and 1 <= int(selector[1:]) <= n:
        i = int(selector[1:])
        vector[x_index(i) if selector[0] == "X" else y_index(i)] = 1.0
    else:
        raise InvalidInputError(f"Unknown frame vector {selector!r}.")
    return vector


@dataclass
class ParallelFieldReport:
    s_grid: List[float]
    residuals: List[float] = field(default_factory=list)
    curvatures: List[float] = field(default_factory=list)

    @property
    def max_residual(self) -> float:
        return max(self.residuals, default=0.0)


def parallel_field_check(s_grid: Sequence[float], n: int = 1) -> ParallelFieldReport:
    """
    Along the vertical geodesic s -> (0, ..., 0, s), check that
    Z(s) = cos(s) X_1 + sin(s) Y_1 satisfies dZ/ds + nabla_T Z = 0, and record
    K(Z(s), T).
    """
    constants = heisenberg_structure_constants(n)
    table = connection_from_structure_constants(constants)
    tensor = curvature_tensor(table, constants)
    x1, y1, t = frame_vector(n, "X1"), frame_vector(n, "Y1"), frame_vector(n, "T")

    report = ParallelFieldReport(s_grid=[float(s) for s in s_grid])
    for s in report.s_grid:
        Z = math.cos(s) * x1 + math.sin(s) * y1
        dZ = -math.sin(s) * x1 + math.cos(s) * y1
        report.residuals.append(float(np.max(np.abs(dZ + table.covariant(t, Z)))))
        report.curvatures.append(sectional_curvature(Z, t, tensor))
    return report


@dataclass(frozen=True)
class ConjugatePoint:
    t: float
    curvature: float
    steps: int


def conjugate_point_scan(
    t_max: float,
    n: int = 1,
    dt: float = 1e-3,
    metric_scale: float = 1.0,
) -> ConjugatePoint:
    """
    First zero after 0 of the normal Jacobi field f(t) Z(t) along the vertical
    geodesic, f'' + K f = 0, f(0) = 0, f'(0) = 1, with K = K(Z, T) read off the
    curvature tensor.
    """
    if metric_scale != 1.0:
        raise InvalidInputError("Only the metric with an orthonormal X, Y, T frame is supported.")
    if not t_max > 0:
        raise InvalidInputError(f"t_max must be positive, got {t_max!r}.")

    K = sectional_curvature(frame_vector(n, "X1"), frame_vector(n, "T"), heisenberg_curvature(n))
    problem = OdeProblem(rhs=lambda t, y: np.array([y[1], -K * y[0]]), t0=0.0, t1=float(t_max), y0=[0.0, 1.0])
    trajectory = integrate(problem, SolveOptions(dt=dt))
    f = trajectory.states[:, 0]
    fp = trajectory.states[:, 1]

    for k in range(1, len(trajectory)):
        if f[k] == 0.0 or f[k - 1] * f[k] < 0.0:
            # one Newton step from the node just past the sign change
            t_star = float(trajectory.times[k] - f[k] / fp[k])
            logger.info("Conjugate point found", extra={"t": t_star, "curvature": K})
            return ConjugatePoint(t=t_star, curvature=K, steps=trajectory.steps)

    raise NoConjugatePointFoundError(f"No conjugate point on (0, {t_max}]; increase t_max.")
