"""
Explicit Runge-Kutta integration: classical fixed-step RK4 and the adaptive
Runge-Kutta-Fehlberg 4(5) pair.

No event detection and no dense output; a trajectory is the list of accepted
steps, endpoints included.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

import numpy as np

from app.errors import InvalidInputError, NonFiniteStateError, StepLimitExceededError


logger = logging.getLogger(__name__)

DEFAULT_DT = 1e-3
DEFAULT_TOL = 1e-9
DEFAULT_MAX_STEPS = 1_000_000

Rhs = Callable[[float, np.ndarray], np.ndarray]


class Method(str, Enum):
    RK4 = "fixed-RK4"
    RKF45 = "adaptive-RK45"


# Fehlberg tableau
_C = (0.0, 1 / 4, 3 / 8, 12 / 13, 1.0, 1 / 2)
_A = (
    (),
    (1 / 4,),
    (3 / 32, 9 / 32),
    (1932 / 2197, -7200 / 2197, 7296 / 2197),
    (439 / 216, -8.0, 3680 / 513, -845 / 4104),
    (-8 / 27, 2.0, -3544 / 2565, 1859 / 4104, -11 / 40),
)
# fifth-order weights (propagated) and the 5th-minus-4th error weights
_B5 = (16 / 135, 0.0, 6656 / 12825, 28561 / 56430, -9 / 50, 2 / 55)
_TR = (1 / 360, 0.0, -128 / 4275, -2197 / 75240, 1 / 50, 2 / 55)

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0


@dataclass(frozen=True)
class SolveOptions:
    method: Method = Method.RK4
    dt: float = DEFAULT_DT
    tol: float = DEFAULT_TOL
    max_steps: int = DEFAULT_MAX_STEPS

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        if self.method is Method.RK4 and not (self.dt > 0 and math.isfinite(self.dt)):
            raise InvalidInputError(f"Fixed-step integration requires dt > 0, got {self.dt!r}.")
        if self.method is Method.RKF45 and not (self.tol > 0 and math.isfinite(self.tol)):
            raise InvalidInputError(f"Adaptive integration requires tol > 0, got {self.tol!r}.")
        if int(self.max_steps) < 1:
            raise InvalidInputError(f"max_steps must be at least 1, got {self.max_steps!r}.")


@dataclass(frozen=True, eq=False)
class OdeProblem:
    rhs: Rhs
    t0: float
    t1: float
    y0: np.ndarray

    def __post_init__(self):
        y0 = np.array(self.y0, dtype=float)
        if y0.ndim != 1 or y0.size == 0:
            raise InvalidInputError("y0 must be a non-empty state vector.")
        if not np.all(np.isfinite(y0)):
            raise NonFiniteStateError("Initial state contains NaN or inf.")
        if not (math.isfinite(self.t0) and math.isfinite(self.t1)) or self.t1 < self.t0:
            raise InvalidInputError(f"Need finite t0 <= t1, got [{self.t0}, {self.t1}].")
        object.__setattr__(self, "y0", y0)

    @property
    def dimension(self) -> int:
        return self.y0.size


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    steps: int
    rejected: int = 0

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def __len__(self) -> int:
        return self.times.size


def _evaluate(rhs: Rhs, t: float, y: np.ndarray, dim: int) -> np.ndarray:
    dy = np.asarray(rhs(t, y), dtype=float)
    if dy.shape != (dim,):
        raise InvalidInputError(f"rhs returned shape {dy.shape}, expected ({dim},).")
    return dy


def _check_finite(y: np.ndarray, t: float) -> None:
    if not np.all(np.isfinite(y)):
        raise NonFiniteStateError(f"State became non-finite at t={t!r}.")


def _rk4(problem: OdeProblem, opts: SolveOptions) -> Trajectory:
    span = problem.t1 - problem.t0
    steps = max(1, math.ceil(span / opts.dt - 1e-9)) if span > 0 else 0
    if steps > opts.max_steps:
        raise StepLimitExceededError(
            f"Fixed-step integration needs {steps} steps; max_steps is {opts.max_steps}."
        )

    dim = problem.dimension
    times = np.empty(steps + 1)
    states = np.empty((steps + 1, dim))
    times[0] = problem.t0
    states[0] = problem.y0
    h = span / steps if steps else 0.0
    f = problem.rhs
    y = problem.y0.copy()

    for k in range(steps):
        t = problem.t0 + k * h
        k1 = _evaluate(f, t, y, dim)
        k2 = _evaluate(f, t + 0.5 * h, y + 0.5 * h * k1, dim)
        k3 = _evaluate(f, t + 0.5 * h, y + 0.5 * h * k2, dim)
        k4 = _evaluate(f, t + h, y + h * k3, dim)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t_next = problem.t1 if k == steps - 1 else problem.t0 + (k + 1) * h
        _check_finite(y, t_next)
        times[k + 1] = t_next
        states[k + 1] = y

    return Trajectory(times=times, states=states, steps=steps)


def _rkf45_stages(f: Rhs, t: float, y: np.ndarray, h: float, dim: int):
    ks = []
    for c, row in zip(_C, _A):
        y_stage = y.copy()
        for a, k in zip(row, ks):
            y_stage = y_stage + h * a * k
        ks.append(_evaluate(f, t + c * h, y_stage, dim))
    high = y + h * sum(b * k for b, k in zip(_B5, ks))
    error = h * sum(e * k for e, k in zip(_TR, ks))
    return high, error


def _rkf45(problem: OdeProblem, opts: SolveOptions) -> Trajectory:
    dim = problem.dimension
    t = problem.t0
    y = problem.y0.copy()
    times = [t]
    states = [y.copy()]
    span = problem.t1 - problem.t0
    h = min(opts.dt, span) if span > 0 else 0.0
    attempts = 0
    rejected = 0

    while t < problem.t1:
        if attempts >= opts.max_steps:
            raise StepLimitExceededError(
                f"Adaptive integration stopped at t={t!r} after {attempts} attempts."
            )
        if h <= 1e-14 * max(1.0, abs(t)):
            raise StepLimitExceededError(f"Step size underflow at t={t!r}.")
        attempts += 1
        last = t + h >= problem.t1
        if last:
            h = problem.t1 - t

        candidate, error = _rkf45_stages(problem.rhs, t, y, h, dim)
        scale = np.maximum(1.0, np.maximum(np.abs(y), np.abs(candidate)))
        # error per unit step, so the local estimates summed over [t0, t1] stay below tol
        err = float(np.max(np.abs(error) / scale)) * span / h if np.all(np.isfinite(error)) else math.inf

        if err <= opts.tol:
            t = problem.t1 if last else t + h
            y = candidate
            _check_finite(y, t)
            times.append(t)
            states.append(y.copy())
        else:
            rejected += 1

        if err == 0.0:
            factor = _MAX_FACTOR
        elif math.isfinite(err):
            factor = min(_MAX_FACTOR, max(_MIN_FACTOR, _SAFETY * (opts.tol / err) ** 0.25))
        else:
            factor = _MIN_FACTOR
        h = h * factor

    return Trajectory(
        times=np.array(times),
        states=np.array(states),
        steps=len(times) - 1,
        rejected=rejected,
    )


def integrate(problem: OdeProblem, opts: Optional[SolveOptions] = None) -> Trajectory:
    """
    Integrate problem.rhs from t0 to t1.

    Fixed-step RK4 uses the uniform step span / ceil(span / dt), so the last
    node is exactly t1. RKF45 propagates the fifth-order solution and accepts
    a step when its scaled local error estimate per unit step, relative to
    the span, is below tol.
    """
    opts = opts or SolveOptions()
    if opts.method is Method.RK4:
        trajectory = _rk4(problem, opts)
    else:
        trajectory = _rkf45(problem, opts)

    logger.debug(
        "Integration finished",
        extra={
            "method": opts.method.value,
            "steps": trajectory.steps,
            "rejected": trajectory.rejected,
            "t1": problem.t1,
        },
    )
    return trajectory
