"""
The group G = R^(2n+1) with the law

    (x, z)(x', z') = (x + x', z + z' + sum_i x_i y'_i - sum_i x'_i y_i)

plus the exact checks tying the law to the frame fields: left invariance
of X_i, Y_i, T and the bracket-generating rank of the distribution.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import numpy as np
import sympy

from app.core.fields import dimension, frame, frame_field, frame_selectors, lie_bracket, x_index, y_index
from app.core.polynomial import Polynomial, Scalar, to_fraction, to_rational
from app.errors import DimensionMismatchError


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GroupPoint:
    """
    A point (x_1, y_1, ..., x_n, y_n, z). Entries may be ints, Fractions or
    floats; group arithmetic stays exact whenever the inputs are.
    """

    n: int
    xy: Tuple[Scalar, ...]
    z: Scalar

    def __post_init__(self):
        object.__setattr__(self, "xy", tuple(self.xy))
        dimension(self.n)
        if len(self.xy) != 2 * self.n:
            raise DimensionMismatchError(f"GroupPoint on n={self.n} needs {2 * self.n} horizontal entries, got {len(self.xy)}.")
        for value in self.xy + (self.z,):
            if not math.isfinite(float(value)):
                raise ValueError(f"GroupPoint entries must be finite, got {value!r}.")

    @classmethod
    def origin(cls, n: int) -> "GroupPoint":
        return cls(n, (0,) * (2 * n), 0)

    @classmethod
    def from_coords(cls, coords: Sequence[Scalar]) -> "GroupPoint":
        if len(coords) < 3 or len(coords) % 2 == 0:
            raise DimensionMismatchError(f"Expected 2n+1 coordinates, got {len(coords)}.")
        return cls((len(coords) - 1) // 2, tuple(coords[:-1]), coords[-1])

    @property
    def coords(self) -> Tuple[Scalar, ...]:
        return self.xy + (self.z,)

    def x(self, i: int) -> Scalar:
        return self.xy[x_index(i)]

    def y(self, i: int) -> Scalar:
        return self.xy[y_index(i)]

    def to_floats(self) -> Tuple[float, ...]:
        return tuple(float(v) for v in self.coords)


def _check_pair(p: GroupPoint, q: GroupPoint) -> None:
    if p.n != q.n:
        raise DimensionMismatchError(f"Cannot multiply points on n={p.n} and n={q.n}.")


def multiply(p: GroupPoint, q: GroupPoint) -> GroupPoint:
    _check_pair(p, q)
    xy = tuple(a + b for a, b in zip(p.xy, q.xy))
    z = p.z + q.z
    for i in range(1, p.n + 1):
        z = z + p.x(i) * q.y(i) - q.x(i) * p.y(i)
    return GroupPoint(p.n, xy, z)


def inverse(p: GroupPoint) -> GroupPoint:
    return GroupPoint(p.n, tuple(-v for v in p.xy), -p.z)


def left_translation(p: GroupPoint) -> Tuple[Polynomial, ...]:
    """Coordinates of p.q as exact polynomials in the coordinates of q."""
    dim = dimension(p.n)
    coords = [to_fraction(v) for v in p.coords]
    q = [Polynomial.variable(dim, k) for k in range(dim)]
    image = [q[k] + coords[k] for k in range(dim - 1)]
    z = q[dim - 1] + coords[dim - 1]
    for i in range(1, p.n + 1):
        z = z + coords[x_index(i)] * q[y_index(i)] - q[x_index(i)] * coords[y_index(i)]
    image.append(z)
    return tuple(image)


@dataclass
class LeftInvarianceReport:
    n: int
    samples: int
    max_residual: Fraction
    residual_by_field: Dict[str, Fraction] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.max_residual == 0


def left_invariance_check(n: int, samples: Sequence[GroupPoint]) -> LeftInvarianceReport:
    """
    For each sample p and frame field V compare dL_p(V(0)) with V(p).
    The differential of L_p is read off the group law polynomials, so the
    comparison is exact.
    """
    dim = dimension(n)
    origin = (0,) * dim
    fields = dict(zip(frame_selectors(n), frame(n)))
    residuals = {name: Fraction(0) for name in fields}

    for p in samples:
        if p.n != n:
            raise DimensionMismatchError(f"Sample on n={p.n} does not belong to n={n}.")
        translation = left_translation(p)
        jacobian = [[comp.diff(k).evaluate(origin) for k in range(dim)] for comp in translation]
        exact_p = tuple(to_fraction(v) for v in p.coords)
        for name, V in fields.items():
            at_origin = V.evaluate(origin)
            pushed = [sum(row[k] * at_origin[k] for k in range(dim)) for row in jacobian]
            at_p = V.evaluate(exact_p)
            worst = max(abs(a - b) for a, b in zip(pushed, at_p))
            residuals[name] = max(residuals[name], worst)

    report = LeftInvarianceReport(
        n=n,
        samples=len(samples),
        max_residual=max(residuals.values()) if residuals else Fraction(0),
        residual_by_field=residuals,
    )
    logger.info(
        "Left invariance checked",
        extra={"n": n, "samples": report.samples, "max_residual": str(report.max_residual)},
    )
    return report


def bracket_generating_rank(n: int, p: GroupPoint, include_bracket: bool = True) -> int:
    """
    Exact rank at p of {X_i(p), Y_i(p)} together with [X_1, Y_1](p).
    Without the bracket this is the rank 2n of the distribution.
    """
    if p.n != n:
        raise DimensionMismatchError(f"Point on n={p.n} does not belong to n={n}.")
    coords = tuple(to_fraction(v) for v in p.coords)
    vectors = [frame_field(n, f"X{i}") for i in range(1, n + 1)]
    vectors += [frame_field(n, f"Y{i}") for i in range(1, n + 1)]
    if include_bracket:
        vectors.append(lie_bracket(frame_field(n, "X1"), frame_field(n, "Y1")))
    rows = [[to_rational(v) for v in V.evaluate(coords)] for V in vectors]
    return sympy.Matrix(rows).rank()


def random_rational_points(n: int, count: int, seed: int = 0, bound: int = 9) -> List[GroupPoint]:
    """Deterministic sample of rational points with small numerators and denominators."""
    rng = np.random.default_rng(seed)
    dim = dimension(n)
    points = []
    for _ in range(count):
        nums = rng.integers(-bound, bound + 1, size=dim)
        dens = rng.integers(1, bound + 1, size=dim)
        points.append(GroupPoint.from_coords([Fraction(int(a), int(b)) for a, b in zip(nums, dens)]))
    return points
