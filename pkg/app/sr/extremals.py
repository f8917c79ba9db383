"""
Closed-form normal extremals from the origin, their numeric twins, and
sub-Riemannian length.

With (x_i + i y_i)'(0) = r_i exp(i theta_i) and constant zeta the horizontal
velocity rotates as r_i exp(i (2 zeta t + theta_i)), so

    x_i + i y_i = r_i exp(i theta_i) * t * chord_factor(zeta t)
    z           = sum_i r_i^2 * t^2 * lift(zeta t)
                = sum_i r_i^2 (t / (2 zeta) - sin(2 zeta t) / (4 zeta^2))
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from app.core.fields import dimension
from app.core.group import GroupPoint
from app.errors import DimensionMismatchError, InvalidInputError, MissingControlsError, NotNormalizedError
from app.numerics.kernels import chord_factor, lift
from app.numerics.ode import SolveOptions
from app.sr.hamiltonian import CotangentState, compiled_frame, integrate_cotangent


logger = logging.getLogger(__name__)

# orientation of the velocity rotation, fixed by matching the Hamiltonian flow
ORIENTATION = 1
NORMALIZATION_TOL = 1e-9
GAUGE_RADIUS = 1e-12
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class NormalExtremalParams:
    n: int
    r: Tuple[float, ...]
    theta: Tuple[float, ...]
    zeta: float

    def __post_init__(self):
        dimension(self.n)
        r = tuple(float(v) for v in self.r)
        theta = tuple(float(v) for v in self.theta)
        if len(r) != self.n or len(theta) != self.n:
            raise DimensionMismatchError(
                f"Extremal parameters on n={self.n} need {self.n} radii and {self.n} angles, got {len(r)} and {len(theta)}."
            )
        if not all(math.isfinite(v) for v in r + theta + (float(self.zeta),)):
            raise InvalidInputError("Extremal parameters must be finite.")
        if any(v < 0 for v in r):
            raise InvalidInputError(f"Radii must be nonnegative, got {r}.")
        # theta_i is a gauge freedom when r_i vanishes
        theta = tuple(0.0 if ri < GAUGE_RADIUS else ti % TWO_PI for ri, ti in zip(r, theta))
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "zeta", float(self.zeta))

    @classmethod
    def normalized(cls, r: Sequence[float], theta: Sequence[float], zeta: float) -> "NormalExtremalParams":
        r = np.asarray(r, dtype=float)
        norm = float(np.linalg.norm(r))
        if norm == 0 or not math.isfinite(norm):
            raise InvalidInputError("Cannot normalize a zero horizontal direction.")
        return cls(n=r.size, r=tuple(r / norm), theta=tuple(theta), zeta=zeta)

    @classmethod
    def from_direction(cls, direction: Sequence[complex], zeta: float) -> "NormalExtremalParams":
        """Parameters from the complex initial velocities r_i exp(i theta_i)."""
        direction = np.asarray(direction, dtype=complex)
        return cls.normalized(np.abs(direction), np.angle(direction), zeta)

    @property
    def A(self) -> Tuple[float, ...]:
        return tuple(ri * math.sin(ti) for ri, ti in zip(self.r, self.theta))

    @property
    def B(self) -> Tuple[float, ...]:
        return tuple(ri * math.cos(ti) for ri, ti in zip(self.r, self.theta))

    @property
    def norm_deviation(self) -> float:
        return abs(sum(ri * ri for ri in self.r) - 1.0)

    @property
    def direction(self) -> np.ndarray:
        return np.array(self.r) * np.exp(1j * np.array(self.theta))

    def as_tuple(self) -> Tuple[float, ...]:
        return self.r + self.theta + (self.zeta,)


@dataclass(frozen=True, eq=False)
class SampledCurve:
    """
    times: (m,) strictly increasing; points: (m, 2n+1) interleaved coordinates;
    controls: optional (m, 2n) array (u_1, v_1, ..., u_n, v_n).
    """

    n: int
    times: np.ndarray
    points: np.ndarray
    controls: Optional[np.ndarray] = None

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float).reshape(-1)
        points = np.atleast_2d(np.asarray(self.points, dtype=float))
        dim = dimension(self.n)
        if points.shape != (times.size, dim):
            raise DimensionMismatchError(f"Expected points of shape ({times.size}, {dim}), got {points.shape}.")
        if times.size > 1 and not np.all(np.diff(times) > 0):
            raise InvalidInputError("Sample times must be strictly increasing.")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "points", points)
        if self.controls is not None:
            controls = np.atleast_2d(np.asarray(self.controls, dtype=float))
            if controls.shape != (times.size, 2 * self.n):
                raise DimensionMismatchError(
                    f"Expected controls of shape ({times.size}, {2 * self.n}), got {controls.shape}."
                )
            object.__setattr__(self, "controls", controls)

    def __len__(self) -> int:
        return self.times.size

    def point(self, k: int) -> GroupPoint:
        return GroupPoint.from_coords([float(v) for v in self.points[k]])

    @property
    def end(self) -> GroupPoint:
        return self.point(-1)


@dataclass(frozen=True)
class ExtremalSample:
    point: GroupPoint
    controls: Tuple[float, ...]


def _check_normalized(p: NormalExtremalParams) -> None:
    if p.norm_deviation > NORMALIZATION_TOL:
        raise NotNormalizedError(
            f"sum r_i^2 = {sum(ri * ri for ri in p.r)!r}; closed forms require arc-length parameters."
        )


def _closed_form_arrays(p: NormalExtremalParams, times: np.ndarray):
    times = np.asarray(times, dtype=float).reshape(-1)
    direction = p.direction
    a = ORIENTATION * p.zeta * times
    horizontal = np.outer(times * chord_factor(a), direction)
    points = np.empty((times.size, dimension(p.n)))
    points[:, 0:-1:2] = horizontal.real
    points[:, 1:-1:2] = horizontal.imag
    points[:, -1] = float(np.sum(np.square(p.r))) * np.square(times) * np.asarray(lift(a))
    velocity = np.outer(np.exp(2j * a), direction)
    controls = np.empty((times.size, 2 * p.n))
    controls[:, 0::2] = velocity.real
    controls[:, 1::2] = velocity.imag
    return times, points, controls


def closed_form_extremal(p: NormalExtremalParams, t: float) -> ExtremalSample:
    _check_normalized(p)
    _, points, controls = _closed_form_arrays(p, np.array([t]))
    return ExtremalSample(
        point=GroupPoint.from_coords([float(v) for v in points[0]]),
        controls=tuple(float(v) for v in controls[0]),
    )


def sample_extremal(p: NormalExtremalParams, times: Sequence[float]) -> SampledCurve:
    _check_normalized(p)
    times, points, controls = _closed_form_arrays(p, np.asarray(times, dtype=float))
    return SampledCurve(n=p.n, times=times, points=points, controls=controls)


def matched_initial_state(p: NormalExtremalParams) -> CotangentState:
    """Covector at the origin with (h_i, k_i) = (r_i cos theta_i, r_i sin theta_i)."""
    return CotangentState(
        n=p.n,
        q=GroupPoint.origin(p.n),
        xi=p.B,
        eta=p.A,
        zeta=p.zeta,
    )


def integrate_extremal(p: NormalExtremalParams, t_max: float, opts: Optional[SolveOptions] = None) -> SampledCurve:
    """Numeric twin of sample_extremal: the Hamiltonian flow from the matched covector."""
    if not t_max > 0:
        raise InvalidInputError(f"t_max must be positive, got {t_max!r}.")
    trajectory = integrate_cotangent(matched_initial_state(p), t_max, opts)
    op = compiled_frame(p.n)
    dim = op.dim
    controls = np.array([op.fiber(y[:dim], y[dim:])[:-1] for y in trajectory.states])
    logger.debug("Extremal integrated", extra={"n": p.n, "t_max": t_max, "steps": len(trajectory.times) - 1})
    return SampledCurve(n=p.n, times=trajectory.times, points=trajectory.states[:, :dim], controls=controls)


def sr_length(c: SampledCurve) -> float:
    """Trapezoidal length of the control speed sqrt(sum u_i^2 + v_i^2)."""
    if c.controls is None:
        raise MissingControlsError("sr_length needs the controls (u_i, v_i) of the curve.")
    if len(c) < 2:
        return 0.0
    speed = np.sqrt(np.sum(np.square(c.controls), axis=1))
    return float(np.trapezoid(speed, c.times))


def first_return(p: NormalExtremalParams) -> Tuple[float, GroupPoint]:
    """
    First positive time at which the horizontal projection closes up, and
    the point reached there on the z-axis.
    """
    _check_normalized(p)
    if p.zeta == 0:
        raise InvalidInputError("Straight lines (zeta = 0) never return to the z-axis.")
    t = math.pi / abs(p.zeta)
    z = math.copysign(math.pi / (2.0 * p.zeta * p.zeta), ORIENTATION * p.zeta) * sum(ri * ri for ri in p.r)
    return t, GroupPoint(p.n, (0.0,) * (2 * p.n), z)
