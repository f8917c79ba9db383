"""
Two-point connection by multi-start shooting on the closed-form endpoint map.

The unknowns are the scaled initial data p = t r exp(i theta) in C^n and
kappa = zeta t, for which the endpoint is

    x + i y = p * chord_factor(kappa),   z = |p|^2 lift(kappa),   t = |p|

This system is square for every n and smooth through kappa = 0. On the
z-axis the solutions form a circle (rotations of p), so Newton takes
minimum-norm least-squares steps.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from app.core.group import GroupPoint
from app.errors import (
    InvalidInputError,
    MaxIterationsExceededError,
    NonFiniteValueError,
    NoSolutionFoundError,
    SingularJacobianError,
)
from app.numerics.kernels import chord_factor, lift
from app.numerics.roots import newton_solve
from app.sr.extremals import ORIENTATION, NormalExtremalParams, closed_form_extremal
from config.settings import get_settings


logger = logging.getLogger(__name__)

DEFAULT_ZETA_GRID = (0.0, 0.1, -0.1, 0.25, -0.25, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0, 4.0, -4.0)
DEFAULT_T_FACTORS = (1.0, 2.0, 4.0)
AXIS_RADIUS = 1e-12
MIN_LENGTH = 1e-12


@dataclass(frozen=True)
class ShootingOptions:
    tol: float = 1e-9
    max_iter: int = 60
    zeta_grid: Tuple[float, ...] = DEFAULT_ZETA_GRID
    t_factors: Tuple[float, ...] = DEFAULT_T_FACTORS
    workers: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "zeta_grid", tuple(float(v) for v in self.zeta_grid))
        object.__setattr__(self, "t_factors", tuple(float(v) for v in self.t_factors))
        if not self.tol > 0:
            raise InvalidInputError(f"Shooting tolerance must be positive, got {self.tol!r}.")
        if self.max_iter < 1:
            raise InvalidInputError("max_iter must be at least 1.")
        if not self.zeta_grid or not self.t_factors or any(f <= 0 for f in self.t_factors):
            raise InvalidInputError("Shooting needs a non-empty zeta grid and positive t factors.")


@dataclass(frozen=True)
class ConnectResult:
    params: NormalExtremalParams
    t: float
    residual: float
    starts: int
    solutions: int

    def to_dict(self) -> dict:
        return {
            "params": {
                "r": list(self.params.r),
                "theta": list(self.params.theta),
                "zeta": self.params.zeta,
            },
            "t": self.t,
            "residual": self.residual,
            "starts": self.starts,
        }


@dataclass(frozen=True)
class _Seed:
    p: np.ndarray
    kappa: float


def _pack(p: np.ndarray, kappa: float) -> np.ndarray:
    y = np.empty(2 * p.size + 1)
    y[0:-1:2] = p.real
    y[1:-1:2] = p.imag
    y[-1] = kappa
    return y


def _unpack(y: np.ndarray) -> Tuple[np.ndarray, float]:
    return y[0:-1:2] + 1j * y[1:-1:2], float(y[-1])


def scaled_endpoint(y: np.ndarray) -> np.ndarray:
    """Endpoint (x1, y1, ..., z) of the extremal with scaled data y = [p, kappa]."""
    p, kappa = _unpack(np.asarray(y, dtype=float))
    a = ORIENTATION * kappa
    horizontal = p * chord_factor(a)
    out = np.empty(2 * p.size + 1)
    out[0:-1:2] = horizontal.real
    out[1:-1:2] = horizontal.imag
    out[-1] = float(np.vdot(p, p).real) * lift(a)
    return out


class ShootingSolver:
    """Multi-start damped Newton on the scaled endpoint map."""

    def __init__(self, options: Optional[ShootingOptions] = None):
        self.options = options or ShootingOptions()

    def seeds(self, target: GroupPoint) -> List[_Seed]:
        """
        Start grid: zeta over the options grid, t over multiples of the gauge
        |x| + sqrt|z|, direction from the target's horizontal projection
        rotated back by the phase the kernel adds.
        """
        coords = np.array(target.to_floats())
        horizontal = coords[0:-1:2] + 1j * coords[1:-1:2]
        z = coords[-1]
        radius = float(np.linalg.norm(horizontal))
        gauge = radius + math.sqrt(abs(z))

        if radius > AXIS_RADIUS:
            base = horizontal / radius
        else:
            base = np.zeros(target.n, dtype=complex)
            base[0] = 1.0

        seeds = []
        for factor in self.options.t_factors:
            t0 = factor * gauge
            for zeta0 in self.options.zeta_grid:
                kappa0 = zeta0 * t0
                seeds.append(_Seed(p=t0 * base * np.exp(-1j * ORIENTATION * kappa0), kappa=kappa0))

        if radius <= AXIS_RADIUS:
            # one full turn lands on the axis: z = |p|^2 / (2 pi)
            length = math.sqrt(2.0 * math.pi * abs(z))
            for sign in (1.0, -1.0):
                seeds.append(_Seed(p=length * base, kappa=sign * math.pi))
        return seeds

    def _shoot(self, seed: _Seed, target: np.ndarray) -> Optional[Tuple[NormalExtremalParams, float, float]]:
        def residual(y):
            return scaled_endpoint(y) - target

        try:
            result = newton_solve(
                residual, _pack(seed.p, seed.kappa), tol=0.1 * self.options.tol, max_iter=self.options.max_iter
            )
        except (MaxIterationsExceededError, SingularJacobianError, NonFiniteValueError) as exc:
            logger.debug("Shooting start failed", extra={"kappa0": seed.kappa, "error": type(exc).__name__})
            return None

        p, kappa = _unpack(result.x)
        t = float(np.linalg.norm(p))
        if t < MIN_LENGTH:
            return None
        params = NormalExtremalParams.from_direction(p / t, kappa / t)
        reached = np.array(closed_form_extremal(params, t).point.to_floats())
        error = float(np.max(np.abs(reached - target)))
        if error > self.options.tol:
            return None
        return params, t, error

    def solve(self, target: GroupPoint) -> ConnectResult:
        coords = np.array(target.to_floats())
        if not np.any(coords):
            raise InvalidInputError("connect needs a target different from the origin.")

        seeds = self.seeds(target)
        workers = self.options.workers or get_settings().workers
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                outcomes = list(pool.map(lambda s: self._shoot(s, coords), seeds))
        else:
            outcomes = [self._shoot(s, coords) for s in seeds]

        found = [o for o in outcomes if o is not None]
        if not found:
            logger.warning("Shooting grid exhausted", extra={"target": coords.tolist(), "starts": len(seeds)})
            raise NoSolutionFoundError(
                f"No start of {len(seeds)} converged to {coords.tolist()}; enlarge the start grid."
            )

        # least length, then lexicographic parameters
        params, t, error = min(found, key=lambda o: (round(o[1], 9), o[0].as_tuple()))
        result = ConnectResult(params=params, t=t, residual=error, starts=len(seeds), solutions=len(found))
        logger.info(
            "Shooting converged",
            extra={"t": t, "zeta": params.zeta, "residual": error, "starts": len(seeds), "solutions": len(found)},
        )
        return result


def connect(target: GroupPoint, options: Optional[ShootingOptions] = None) -> ConnectResult:
    return ShootingSolver(options).solve(target)
