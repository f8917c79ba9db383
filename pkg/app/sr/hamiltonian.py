"""
Fiber-linear Hamiltonians and the normal Hamiltonian flow on T*G.

Nothing here is typed in by hand: the frame X_1, Y_1, ..., T is compiled
from its exact polynomial coefficients into F(q) = F0 + F1 . q, and

    w = F(q) lam                  (h_i, k_i, h_T)
    H = 1/2 sum over horizontal a of w_a^2
    q'     =  dH/dlam  = sum_a w_a F(q)[a]
    lam'_c = -dH/dq_c  = -sum_a w_a sum_b F1[a, b, c] lam_b

State vectors are laid out as [x1, y1, ..., xn, yn, z, xi1, eta1, ..., xin, etan, zeta].
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Tuple

import numpy as np
import sympy

from app.core.fields import PolyVectorField, contact_form, dimension, frame, frame_field, lie_bracket, pair
from app.core.group import GroupPoint
from app.core.polynomial import to_rational
from app.errors import DimensionMismatchError, InvalidInputError
from app.numerics.ode import OdeProblem, SolveOptions, Trajectory, integrate


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CotangentState:
    """A covector (xi, eta, zeta) at the point q, coordinates dual to (x, y, z)."""

    n: int
    q: GroupPoint
    xi: Tuple[float, ...]
    eta: Tuple[float, ...]
    zeta: float

    def __post_init__(self):
        object.__setattr__(self, "xi", tuple(float(v) for v in self.xi))
        object.__setattr__(self, "eta", tuple(float(v) for v in self.eta))
        object.__setattr__(self, "zeta", float(self.zeta))
        if self.q.n != self.n or len(self.xi) != self.n or len(self.eta) != self.n:
            raise DimensionMismatchError(f"CotangentState on n={self.n} has mismatched component lengths.")
        if not all(math.isfinite(v) for v in self.xi + self.eta + (self.zeta,)):
            raise InvalidInputError("CotangentState entries must be finite.")

    @property
    def covector(self) -> np.ndarray:
        lam = np.empty(dimension(self.n))
        lam[0:-1:2] = self.xi
        lam[1:-1:2] = self.eta
        lam[-1] = self.zeta
        return lam

    def to_vector(self) -> np.ndarray:
        return np.concatenate([np.array(self.q.to_floats()), self.covector])

    @classmethod
    def from_vector(cls, n: int, y) -> "CotangentState":
        y = np.asarray(y, dtype=float)
        dim = dimension(n)
        if y.shape != (2 * dim,):
            raise DimensionMismatchError(f"Expected a state vector of length {2 * dim}, got {y.shape}.")
        lam = y[dim:]
        return cls(
            n=n,
            q=GroupPoint.from_coords([float(v) for v in y[:dim]]),
            xi=tuple(lam[0:-1:2]),
            eta=tuple(lam[1:-1:2]),
            zeta=lam[-1],
        )


class FrameOperator:
    """The frame matrix F(q) = F0 + F1 . q compiled from the exact frame fields."""

    def __init__(self, n: int):
        self.n = n
        self.dim = dimension(n)
        parts = [V.affine_coefficients() for V in frame(n)]
        self.F0 = np.array([c for c, _ in parts])
        self.F1 = np.array([L for _, L in parts])
        theta_const, theta_linear = contact_form(n).affine_coefficients()
        self._theta0 = theta_const
        self._theta1 = theta_linear

    def matrix(self, q: np.ndarray) -> np.ndarray:
        return self.F0 + self.F1 @ q

    def fiber(self, q: np.ndarray, lam: np.ndarray) -> np.ndarray:
        return self.matrix(q) @ lam

    def theta(self, q: np.ndarray) -> np.ndarray:
        return self._theta0 + self._theta1 @ q

    def hamiltonian(self, y: np.ndarray) -> float:
        w = self.fiber(y[: self.dim], y[self.dim :])
        return 0.5 * float(np.dot(w[:-1], w[:-1]))

    def rhs(self, y: np.ndarray) -> np.ndarray:
        q, lam = y[: self.dim], y[self.dim :]
        F = self.matrix(q)
        w = (F @ lam)[:-1]
        qdot = F[:-1].T @ w
        lamdot = -np.einsum("a,abc,b->c", w, self.F1[:-1], lam)
        return np.concatenate([qdot, lamdot])


@lru_cache(maxsize=None)
def compiled_frame(n: int) -> FrameOperator:
    return FrameOperator(n)


def fiber_hamiltonians(s: CotangentState) -> Tuple[np.ndarray, np.ndarray, float]:
    """(h, k, h_T) with h_i = lam(X_i), k_i = lam(Y_i), h_T = lam(T)."""
    op = compiled_frame(s.n)
    w = op.fiber(np.array(s.q.to_floats()), s.covector)
    return w[0:-1:2].copy(), w[1:-1:2].copy(), float(w[-1])


def sr_hamiltonian(s: CotangentState) -> float:
    h, k, _ = fiber_hamiltonians(s)
    return 0.5 * float(np.dot(h, h) + np.dot(k, k))


def hamiltonian_rhs(s: CotangentState) -> CotangentState:
    """Time derivative of s under the normal flow, packed as a CotangentState."""
    derivative = compiled_frame(s.n).rhs(s.to_vector())
    return CotangentState.from_vector(s.n, derivative)


def hamiltonian_vector_field(n: int) -> Callable[[float, np.ndarray], np.ndarray]:
    """Right-hand side (t, y) -> y' of the normal flow, ready for integrate()."""
    op = compiled_frame(n)
    return lambda t, y: op.rhs(y)


def integrate_cotangent(s: CotangentState, t_max: float, opts: Optional[SolveOptions] = None) -> Trajectory:
    problem = OdeProblem(rhs=hamiltonian_vector_field(s.n), t0=0.0, t1=float(t_max), y0=s.to_vector())
    return integrate(problem, opts)


def horizontality_defect(states: np.ndarray, n: int) -> float:
    """max |theta(q)(q')| over the rows of a sampled cotangent trajectory."""
    op = compiled_frame(n)
    worst = 0.0
    for y in np.atleast_2d(states):
        qdot = op.rhs(y)[: op.dim]
        worst = max(worst, abs(float(op.theta(y[: op.dim]) @ qdot)))
    return worst


def energy_drift(states: np.ndarray, n: int) -> float:
    op = compiled_frame(n)
    rows = np.atleast_2d(states)
    start = op.hamiltonian(rows[0])
    return max(abs(op.hamiltonian(y) - start) for y in rows)


def poisson_bracket(V: PolyVectorField, W: PolyVectorField) -> PolyVectorField:
    """
    The field U with {lam(V), lam(W)} = lam(U). Sign convention:
    {lam(V), lam(W)} := lam([V, W]).
    """
    if V.n != W.n:
        raise DimensionMismatchError(f"Cannot bracket Hamiltonians on n={V.n} and n={W.n}.")
    return lie_bracket(V, W)


@dataclass
class AbnormalReport:
    n: int
    zeta: float
    bracket_matrix: sympy.Matrix
    determinant: sympy.Rational
    full_matrix: sympy.Matrix
    kernel_dimension: int
    conclusion: str

    @property
    def constant_curves_only(self) -> bool:
        return self.kernel_dimension == 0


def abnormal_classifier(n: int, zeta: float = 1.0, at: Optional[GroupPoint] = None) -> AbnormalReport:
    """
    On the annihilator of D the covector is zeta * theta, so every Poisson
    bracket of horizontal Hamiltonians is zeta * theta([V, W]). If the
    2n x 2n bracket matrix has trivial kernel, a characteristic curve has
    zero horizontal velocity and its projection is constant.
    """
    if not math.isfinite(zeta) or zeta == 0:
        raise InvalidInputError("The annihilator covector with zeta = 0 is zero; extremals need a nonzero covector.")
    at = at or GroupPoint.origin(n)
    if at.n != n:
        raise DimensionMismatchError(f"Point on n={at.n} does not belong to n={n}.")

    coords = at.coords
    theta = contact_form(n)
    scale = to_rational(zeta)
    horizontal = frame(n)[:-1]

    def bracket_value(V: PolyVectorField, W: PolyVectorField) -> sympy.Rational:
        return scale * to_rational(pair(theta, poisson_bracket(V, W)).evaluate(coords))

    full = sympy.Matrix(2 * n, 2 * n, lambda a, b: bracket_value(horizontal[a], horizontal[b]))
    xs = [frame_field(n, f"X{i}") for i in range(1, n + 1)]
    ys = [frame_field(n, f"Y{i}") for i in range(1, n + 1)]
    block = sympy.Matrix(n, n, lambda i, j: bracket_value(xs[i], ys[j]))

    kernel_dimension = len(full.nullspace())
    conclusion = "constant curves only" if kernel_dimension == 0 else "nonconstant abnormal directions exist"
    report = AbnormalReport(
        n=n,
        zeta=float(zeta),
        bracket_matrix=block,
        determinant=block.det(),
        full_matrix=full,
        kernel_dimension=kernel_dimension,
        conclusion=conclusion,
    )
    logger.info(
        "Abnormal classification",
        extra={"n": n, "zeta": zeta, "determinant": str(report.determinant), "conclusion": conclusion},
    )
    return report
