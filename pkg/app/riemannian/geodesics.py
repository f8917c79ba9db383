"""
Riemannian geodesics from the origin in closed form, the numeric oracle
they are checked against, and the vertical drift coefficient.

A unit-speed geodesic u_i X_i + v_i Y_i + gamma T has constant gamma and
u_i + i v_i = rho_i exp(i (2 gamma t + phi_i)). Integrating the coordinate
equations from the origin gives

    x_i + i y_i = rho_i exp(i phi_i) * t * chord_factor(gamma t)
    z           = gamma t + sum_i rho_i^2 t^2 lift(gamma t)
                = C(gamma) t - sum_i rho_i^2 sin(2 gamma t) / (4 gamma^2)

with C(gamma) = (1 + gamma^2) / (2 gamma) under unit speed.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.core.fields import dimension
from app.core.group import GroupPoint
from app.errors import DimensionMismatchError, InvalidInputError, NotUnitSpeedError
from app.numerics.kernels import chord_factor, lift
from app.numerics.ode import OdeProblem, SolveOptions, integrate
from app.riemannian.connection import riemannian_geodesic_vector_field
from app.sr.extremals import SampledCurve


logger = logging.getLogger(__name__)

UNIT_SPEED_TOL = 1e-12
GAUGE_RADIUS = 1e-12
ORACLE_MATCH_TOL = 1e-8
DEFAULT_ADJUDICATION_GAMMAS = (0.2, -0.2, 0.6, -0.6, 0.9, -0.9)


@dataclass(frozen=True)
class RiemGeodesicParams:
    n: int
    rho: Tuple[float, ...]
    phi: Tuple[float, ...]
    gamma: float

    def __post_init__(self):
        dimension(self.n)
        rho = tuple(float(v) for v in self.rho)
        phi = tuple(float(v) for v in self.phi)
        if len(rho) != self.n or len(phi) != self.n:
            raise DimensionMismatchError(f"Geodesic parameters on n={self.n} need {self.n} radii and angles.")
        if not all(math.isfinite(v) for v in rho + phi + (float(self.gamma),)):
            raise InvalidInputError("Geodesic parameters must be finite.")
        if any(v < 0 for v in rho):
            raise InvalidInputError(f"Radii must be nonnegative, got {rho}.")
        if abs(self.gamma) > 1.0:
            raise NotUnitSpeedError(f"|gamma| <= 1 is required for unit speed, got {self.gamma!r}.")
        phi = tuple(0.0 if ri < GAUGE_RADIUS else ti % (2.0 * math.pi) for ri, ti in zip(rho, phi))
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "gamma", float(self.gamma))

    @classmethod
    def with_gamma(cls, direction: Sequence[complex], gamma: float) -> "RiemGeodesicParams":
        """
        Rescale the horizontal direction so that sum rho_i^2 = 1 - gamma^2.
        A zero direction is only allowed for |gamma| = 1.
        """
        if abs(gamma) > 1.0:
            raise NotUnitSpeedError(f"|gamma| <= 1 is required for unit speed, got {gamma!r}.")
        direction = np.asarray(direction, dtype=complex)
        norm = float(np.linalg.norm(direction))
        horizontal = math.sqrt(max(0.0, 1.0 - gamma * gamma))
        if norm == 0.0:
            if horizontal > UNIT_SPEED_TOL:
                raise NotUnitSpeedError("A zero horizontal direction needs |gamma| = 1.")
            scaled = direction
        else:
            scaled = direction * (horizontal / norm)
        return cls(n=direction.size, rho=tuple(np.abs(scaled)), phi=tuple(np.angle(scaled)), gamma=gamma)

    @classmethod
    def from_velocity(cls, velocity: Sequence[float]) -> "RiemGeodesicParams":
        """From frame components (u_1, v_1, ..., u_n, v_n, gamma) at the origin."""
        velocity = np.asarray(velocity, dtype=float)
        horizontal = velocity[0:-1:2] + 1j * velocity[1:-1:2]
        return cls(n=horizontal.size, rho=tuple(np.abs(horizontal)), phi=tuple(np.angle(horizontal)), gamma=velocity[-1])

    @property
    def speed_deviation(self) -> float:
        return abs(sum(r * r for r in self.rho) + self.gamma * self.gamma - 1.0)

    @property
    def direction(self) -> np.ndarray:
        return np.array(self.rho) * np.exp(1j * np.array(self.phi))

    def initial_velocity(self) -> np.ndarray:
        velocity = np.empty(dimension(self.n))
        velocity[0:-1:2] = self.direction.real
        velocity[1:-1:2] = self.direction.imag
        velocity[-1] = self.gamma
        return velocity


@dataclass(frozen=True)
class RiemSample:
    point: GroupPoint
    velocity: Tuple[float, ...]


def _check_unit_speed(p: RiemGeodesicParams) -> None:
    if p.speed_deviation > UNIT_SPEED_TOL:
        raise NotUnitSpeedError(
            f"sum rho_i^2 + gamma^2 deviates from 1 by {p.speed_deviation:.3e}."
        )


def _closed_form_arrays(p: RiemGeodesicParams, times: np.ndarray):
    times = np.asarray(times, dtype=float).reshape(-1)
    direction = p.direction
    a = p.gamma * times
    horizontal = np.outer(times * chord_factor(a), direction)
    points = np.empty((times.size, dimension(p.n)))
    points[:, 0:-1:2] = horizontal.real
    points[:, 1:-1:2] = horizontal.imag
    points[:, -1] = a + float(np.sum(np.square(p.rho))) * np.square(times) * np.asarray(lift(a))
    rotating = np.outer(np.exp(2j * a), direction)
    velocity = np.empty((times.size, dimension(p.n)))
    velocity[:, 0:-1:2] = rotating.real
    velocity[:, 1:-1:2] = rotating.imag
    velocity[:, -1] = p.gamma
    return times, points, velocity


def closed_form_riem_geodesic(p: RiemGeodesicParams, t: float) -> RiemSample:
    _check_unit_speed(p)
    _, points, velocity = _closed_form_arrays(p, np.array([t]))
    return RiemSample(
        point=GroupPoint.from_coords([float(v) for v in points[0]]),
        velocity=tuple(float(v) for v in velocity[0]),
    )


def sample_riem_geodesic(p: RiemGeodesicParams, times: Sequence[float]) -> Tuple[SampledCurve, np.ndarray]:
    """Sampled closed form plus the (m, 2n+1) frame velocities (u_1, v_1, ..., gamma)."""
    _check_unit_speed(p)
    times, points, velocity = _closed_form_arrays(p, np.asarray(times, dtype=float))
    curve = SampledCurve(n=p.n, times=times, points=points, controls=velocity[:, :-1])
    return curve, velocity


def integrate_riem_geodesic(p: RiemGeodesicParams, t_max: float, opts: Optional[SolveOptions] = None):
    """Numeric oracle: coordinates and frame velocity integrated together."""
    if not t_max > 0:
        raise InvalidInputError(f"t_max must be positive, got {t_max!r}.")
    dim = dimension(p.n)
    y0 = np.concatenate([np.zeros(dim), p.initial_velocity()])
    problem = OdeProblem(rhs=riemannian_geodesic_vector_field(p.n), t0=0.0, t1=float(t_max), y0=y0)
    trajectory = integrate(problem, opts)
    curve = SampledCurve(
        n=p.n,
        times=trajectory.times,
        points=trajectory.states[:, :dim],
        controls=trajectory.states[:, dim:-1],
    )
    return curve, trajectory.states[:, dim:]


def drift_coefficient(gamma: float) -> float:
    """Linear z-drift (1 + gamma^2) / (2 gamma) of a unit-speed geodesic."""
    if gamma == 0:
        raise InvalidInputError("The drift coefficient is undefined for horizontal geodesics.")
    return (1.0 + gamma * gamma) / (2.0 * gamma)


def printed_drift_coefficient(gamma: float) -> float:
    """The competing value (3 gamma^2 - 1) / (2 gamma); kept for adjudication."""
    if gamma == 0:
        raise InvalidInputError("The drift coefficient is undefined for horizontal geodesics.")
    return (3.0 * gamma * gamma - 1.0) / (2.0 * gamma)


def drift_model(coefficient: float, rho_squared: float, gamma: float, times) -> np.ndarray:
    times = np.asarray(times, dtype=float)
    return coefficient * times - rho_squared * np.sin(2.0 * gamma * times) / (4.0 * gamma * gamma)


@dataclass
class DriftAdjudication:
    gammas: List[float]
    derived_errors: List[float] = field(default_factory=list)
    printed_errors: List[float] = field(default_factory=list)

    @property
    def derived_matches(self) -> bool:
        return all(e <= ORACLE_MATCH_TOL for e in self.derived_errors)

    @property
    def printed_matches(self) -> bool:
        return all(e <= ORACLE_MATCH_TOL for e in self.printed_errors)

    @property
    def selected(self) -> Optional[str]:
        if self.derived_matches and not self.printed_matches:
            return "derived"
        if self.printed_matches and not self.derived_matches:
            return "printed"
        return None

    def to_dict(self) -> Dict[str, object]:
        return {
            "gammas": self.gammas,
            "derived_errors": self.derived_errors,
            "printed_errors": self.printed_errors,
            "selected": self.selected,
        }


def adjudicate_drift_coefficient(
    gammas: Sequence[float] = DEFAULT_ADJUDICATION_GAMMAS,
    t_max: float = 10.0,
    dt: float = 2e-3,
) -> DriftAdjudication:
    """
    Integrate the geodesic equations numerically for each gamma and compare
    z(t) with both candidate drift coefficients.
    """
    report = DriftAdjudication(gammas=[float(g) for g in gammas])
    for gamma in report.gammas:
        params = RiemGeodesicParams.with_gamma([1.0], gamma)
        curve, _ = integrate_riem_geodesic(params, t_max, SolveOptions(dt=dt))
        rho_squared = 1.0 - gamma * gamma
        z = curve.points[:, -1]
        report.derived_errors.append(
            float(np.max(np.abs(z - drift_model(drift_coefficient(gamma), rho_squared, gamma, curve.times))))
        )
        report.printed_errors.append(
            float(np.max(np.abs(z - drift_model(printed_drift_coefficient(gamma), rho_squared, gamma, curve.times))))
        )
    logger.info("Drift coefficient adjudicated", extra={"selected": report.selected, "gammas": report.gammas})
    return report


def riemannian_exp(velocity: Sequence[float]) -> GroupPoint:
    """
    Endpoint at time 1 of the geodesic from the origin with initial frame
    velocity V = (u_1, v_1, ..., u_n, v_n, g); its length is |V|.
    """
    velocity = np.asarray(velocity, dtype=float)
    if velocity.ndim != 1 or velocity.size < 3 or velocity.size % 2 == 0:
        raise DimensionMismatchError(f"Expected 2n+1 frame components, got {velocity.shape}.")
    h = velocity[0:-1:2] + 1j * velocity[1:-1:2]
    g = float(velocity[-1])
    horizontal = h * chord_factor(g)
    coords = np.empty(velocity.size)
    coords[0:-1:2] = horizontal.real
    coords[1:-1:2] = horizontal.imag
    coords[-1] = g + float(np.vdot(h, h).real) * lift(g)
    return GroupPoint.from_coords([float(v) for v in coords])


@dataclass(frozen=True)
class ChordComparison:
    gamma: float
    arc_length: float
    derived_chord: float
    printed_chord: float

    @property
    def derived_chord_shorter(self) -> bool:
        return self.derived_chord < self.arc_length

    @property
    def printed_chord_shorter(self) -> bool:
        return self.printed_chord < self.arc_length


def chord_comparison(gamma: float) -> ChordComparison:
    """
    After time pi/|gamma| a geodesic is back on the z-axis at height
    C(gamma) pi / gamma. Compare that arc with the vertical segment joining
    the same two points, under both drift coefficients.
    """
    if gamma == 0 or abs(gamma) >= 1.0:
        raise InvalidInputError(f"chord_comparison needs 0 < |gamma| < 1, got {gamma!r}.")
    arc = math.pi / abs(gamma)
    return ChordComparison(
        gamma=float(gamma),
        arc_length=arc,
        derived_chord=abs(drift_coefficient(gamma)) * arc,
        printed_chord=abs(printed_drift_coefficient(gamma)) * arc,
    )
