"""
Numerical minimality experiments: look for a strictly shorter geodesic to
the same endpoint.

Write an initial velocity as V = (h, g) with h in C^n and g the T part. The
endpoint of the geodesic with velocity V at time 1 is

    P = h chord_factor(g),    Z = g + |h|^2 lift(g),    length |V|

so for P != 0 the horizontal part is fixed by g (h = P exp(-ig) / sinc(g))
and the two-point problem collapses to one scalar equation

    F(g) = g + |P|^2 lift(g) / sinc(g)^2 - Z = 0

between consecutive poles g = k pi. On the z-axis (P = 0) the solutions are
the vertical segment and the one-parameter families g = m pi.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from app.core.group import GroupPoint
from app.errors import InvalidInputError, MaxIterationsExceededError, NonFiniteValueError, SingularJacobianError
from app.numerics.kernels import lift_over_sin_squared, sinc
from app.numerics.roots import newton_solve
from app.riemannian.geodesics import RiemGeodesicParams, closed_form_riem_geodesic, riemannian_exp
from config.settings import get_settings


logger = logging.getLogger(__name__)

AXIS_TOL = 1e-12
POLE_GAP = 1e-9
DEFAULT_RAY_STEP = 0.25


@dataclass(frozen=True)
class SearchOptions:
    tol: float = 1e-6
    margin: float = 1e-3
    grid_points: int = 256
    workers: Optional[int] = None

    def __post_init__(self):
        if not self.tol > 0 or not self.margin >= 0:
            raise InvalidInputError("SearchOptions needs tol > 0 and margin >= 0.")
        if self.grid_points < 8:
            raise InvalidInputError("SearchOptions needs at least 8 grid points per interval.")


@dataclass(frozen=True)
class Witness:
    params: RiemGeodesicParams
    t: float
    endpoint_error: float


@dataclass(frozen=True)
class ProbeResult:
    beaten: bool
    endpoint: GroupPoint
    t: float
    witness: Optional[Witness] = None


def _horizontal(coords: np.ndarray) -> np.ndarray:
    return coords[0:-1:2] + 1j * coords[1:-1:2]


def _velocity(h: np.ndarray, g: float) -> np.ndarray:
    V = np.empty(2 * h.size + 1)
    V[0:-1:2] = h.real
    V[1:-1:2] = h.imag
    V[-1] = g
    return V


def _intervals(limit: float) -> List[Tuple[float, float]]:
    """Open intervals between consecutive poles k pi, clipped to (-limit, limit)."""
    intervals = [(-min(math.pi, limit), min(math.pi, limit))]
    k = 1
    while k * math.pi < limit:
        hi = min((k + 1) * math.pi, limit)
        intervals.append((k * math.pi, hi))
        intervals.append((-hi, -k * math.pi))
        k += 1
    return intervals


def _scalar_roots(P2: float, Z: float, limit: float, grid_points: int) -> List[float]:
    def F(g):
        return g + P2 * lift_over_sin_squared(g) - Z

    roots = []
    for lo, hi in _intervals(limit):
        pad = POLE_GAP * max(1.0, abs(lo), abs(hi))
        grid = np.linspace(lo + pad, hi - pad, grid_points)
        values = np.asarray(F(grid))
        for a, b, fa, fb in zip(grid[:-1], grid[1:], values[:-1], values[1:]):
            if not (np.isfinite(fa) and np.isfinite(fb)):
                continue
            if fa == 0.0:
                roots.append(float(a))
            elif fa * fb < 0.0:
                roots.append(float(brentq(F, a, b, xtol=1e-14, rtol=4 * np.finfo(float).eps)))
    return roots


def candidate_velocities(endpoint: GroupPoint, limit: float, grid_points: int = 256) -> List[np.ndarray]:
    """Initial velocities (length = |V|) of geodesics from the origin to endpoint with |g| < limit."""
    coords = np.array(endpoint.to_floats())
    P = _horizontal(coords)
    Z = float(coords[-1])
    P2 = float(np.vdot(P, P).real)
    candidates = []

    if P2 > (AXIS_TOL * max(1.0, abs(Z))) ** 2:
        for g in _scalar_roots(P2, Z, limit, grid_points):
            h = P * np.exp(-1j * g) / sinc(g)
            candidates.append(_velocity(h, g))
        return candidates

    if abs(Z) <= AXIS_TOL:
        return candidates
    sign = math.copysign(1.0, Z)
    candidates.append(_velocity(np.zeros(P.size, dtype=complex), Z))
    m = 1
    while m * math.pi < abs(Z) and m * math.pi < limit:
        radius = math.sqrt(2.0 * m * math.pi * (abs(Z) - m * math.pi))
        h = np.zeros(P.size, dtype=complex)
        h[0] = radius
        candidates.append(_velocity(h, sign * m * math.pi))
        m += 1
    return candidates


def _polish(V: np.ndarray, target: np.ndarray) -> np.ndarray:
    def residual(W):
        return np.array(riemannian_exp(W).to_floats()) - target

    try:
        return newton_solve(residual, V, tol=1e-12, max_iter=8).x
    except (MaxIterationsExceededError, SingularJacobianError, NonFiniteValueError):
        return V


def _witness(V: np.ndarray, target: np.ndarray) -> Optional[Witness]:
    length = float(np.linalg.norm(V))
    if length == 0.0:
        return None
    params = RiemGeodesicParams.from_velocity(V / length)
    reached = np.array(closed_form_riem_geodesic(params, length).point.to_floats())
    return Witness(params=params, t=length, endpoint_error=float(np.max(np.abs(reached - target))))


def minimality_probe(p: RiemGeodesicParams, t: float, search: Optional[SearchOptions] = None) -> ProbeResult:
    """
    Search for a geodesic from the origin to the endpoint of p at time t with
    length below t - margin. beaten=False only means no witness was found.
    """
    search = search or SearchOptions()
    if not t > 0:
        raise InvalidInputError(f"Probe parameter must be positive, got {t!r}.")
    endpoint = closed_form_riem_geodesic(p, t).point
    target = np.array(endpoint.to_floats())

    best = None
    for V in candidate_velocities(endpoint, limit=t, grid_points=search.grid_points):
        if float(np.linalg.norm(V)) >= t - search.margin:
            continue
        witness = _witness(_polish(V, target), target)
        if witness is None or witness.endpoint_error > search.tol or witness.t >= t - search.margin:
            continue
        if best is None or witness.t < best.t:
            best = witness

    return ProbeResult(beaten=best is not None, endpoint=endpoint, t=float(t), witness=best)


@dataclass(frozen=True)
class RayScanRow:
    gamma: float
    direction_id: int
    status: str
    first_beaten_t: Optional[float] = None
    witness_gamma: Optional[float] = None
    witness_t: Optional[float] = None

    def as_record(self) -> dict:
        return {
            "gamma": self.gamma,
            "direction_id": self.direction_id,
            "status": self.status,
            "first_beaten_t": self.first_beaten_t,
            "witness_gamma": self.witness_gamma,
            "witness_t": self.witness_t,
        }


def _scan_direction(
    n: int, direction_id: int, gamma: float, horizon: float, step: float, search: SearchOptions
) -> RayScanRow:
    direction = np.zeros(n, dtype=complex)
    direction[0] = 1.0
    params = RiemGeodesicParams.with_gamma(direction, gamma)
    count = int(math.floor(horizon / step + 1e-9))
    for k in range(1, count + 1):
        t = k * step
        probe = minimality_probe(params, t, search)
        if probe.beaten:
            row = RayScanRow(
                gamma=gamma,
                direction_id=direction_id,
                status="beaten",
                first_beaten_t=t,
                witness_gamma=probe.witness.params.gamma,
                witness_t=probe.witness.t,
            )
            logger.info("Direction beaten", extra=row.as_record())
            return row
    logger.info("Direction is a ray up to horizon", extra={"gamma": gamma, "horizon": horizon})
    return RayScanRow(gamma=gamma, direction_id=direction_id, status="ray")


def ray_scan(
    n: int,
    gamma_grid: Sequence[float],
    horizon: float,
    step: float = DEFAULT_RAY_STEP,
    search: Optional[SearchOptions] = None,
) -> List[RayScanRow]:
    """
    Probe each direction with T part gamma at parameters step, 2 step, ...,
    horizon and report the first parameter at which it stops minimizing.
    """
    gammas = [float(g) for g in gamma_grid]
    if not gammas:
        raise InvalidInputError("ray_scan needs a non-empty gamma grid.")
    if not horizon > 0 or not step > 0:
        raise InvalidInputError("ray_scan needs a positive horizon and step.")
    search = search or SearchOptions()
    workers = search.workers or get_settings().workers

    def run(indexed):
        direction_id, gamma = indexed
        return _scan_direction(n, direction_id, gamma, horizon, step, search)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(run, enumerate(gammas)))
    return [run(item) for item in enumerate(gammas)]


@dataclass(frozen=True)
class DistanceProbeResult:
    Z: float
    best_length: float
    best_gamma: float
    vertical_length: float
    turns: int

    def to_dict(self) -> dict:
        return {
            "Z": self.Z,
            "best_length": self.best_length,
            "best_gamma": self.best_gamma,
            "vertical_length": self.vertical_length,
        }


def distance_probe(target_z: float, n: int = 1) -> DistanceProbeResult:
    """
    Shortest geodesic from the origin to (0, ..., 0, Z) over the vertical
    segment and the spirals closing after m full turns,
    length^2 = 2 m pi Z - m^2 pi^2 for m pi < Z.
    """
    if not (math.isfinite(target_z) and target_z > 0):
        raise InvalidInputError(f"distance_probe needs Z > 0, got {target_z!r}.")
    endpoint = GroupPoint(n, (0.0,) * (2 * n), float(target_z))
    best_length, best_gamma, turns = float(target_z), 1.0, 0
    for V in candidate_velocities(endpoint, limit=math.inf):
        length = float(np.linalg.norm(V))
        if length < best_length:
            best_length, best_gamma, turns = length, float(V[-1]) / length, int(round(abs(V[-1]) / math.pi))
    logger.info("Distance probe", extra={"Z": target_z, "best_length": best_length, "turns": turns})
    return DistanceProbeResult(
        Z=float(target_z),
        best_length=best_length,
        best_gamma=best_gamma,
        vertical_length=float(target_z),
        turns=turns,
    )
