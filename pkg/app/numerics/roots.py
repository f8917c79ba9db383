"""
Finite-difference Jacobians and a damped Newton solver used by the
shooting and witness searches.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from app.errors import (
    InvalidInputError,
    MaxIterationsExceededError,
    NonFiniteValueError,
    SingularJacobianError,
)


logger = logging.getLogger(__name__)

VectorFunction = Callable[[np.ndarray], np.ndarray]

RELATIVE_STEP = 1e-6
MIN_STEP_FRACTION = 1e-4
# singular values below this fraction of the largest are treated as zero
LSTSQ_RCOND = 1e-8
SINGULAR_RATIO = 1e-12


@dataclass(frozen=True, eq=False)
class NewtonResult:
    x: np.ndarray
    residual: float
    iterations: int


def _call(F: VectorFunction, x: np.ndarray) -> np.ndarray:
    value = np.atleast_1d(np.asarray(F(x), dtype=float))
    if not np.all(np.isfinite(value)):
        raise NonFiniteValueError(f"Function returned a non-finite value at x={x.tolist()}.")
    return value


def fd_jacobian(F: VectorFunction, x, h: Optional[float] = None) -> np.ndarray:
    """
    Central-difference Jacobian. The default step is 1e-6 * max(1, |x|_inf);
    the divisor is the step actually realized in floating point, which keeps
    linear maps exact to rounding.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if h is None:
        h = RELATIVE_STEP * max(1.0, float(np.max(np.abs(x))))
    if not h > 0:
        raise InvalidInputError(f"Difference step must be positive, got {h!r}.")

    columns = []
    for j in range(x.size):
        plus = x.copy()
        minus = x.copy()
        plus[j] += h
        minus[j] -= h
        columns.append((_call(F, plus) - _call(F, minus)) / (plus[j] - minus[j]))
    return np.column_stack(columns)


def _newton_step(J: np.ndarray, fx: np.ndarray, rank_deficient: str) -> np.ndarray:
    if rank_deficient == "raise":
        singular = np.linalg.svd(J, compute_uv=False)
        if singular.size == 0 or singular[0] == 0.0 or singular[-1] < SINGULAR_RATIO * singular[0]:
            raise SingularJacobianError("Jacobian is numerically singular.")
        if J.shape[0] == J.shape[1] and singular.size == J.shape[1]:
            return np.linalg.solve(J, -fx)
    # minimum-norm step; a circle of solutions leaves a null direction
    return np.linalg.lstsq(J, -fx, rcond=LSTSQ_RCOND)[0]


def newton_solve(
    F: VectorFunction,
    x0,
    tol: float = 1e-10,
    max_iter: int = 50,
    rank_deficient: str = "lstsq",
) -> NewtonResult:
    """
    Damped Newton iteration until |F(x)|_inf <= tol.

    Each step is halved while the residual norm fails to decrease, down to a
    fraction of 1e-4; if no fraction helps, the smallest one is taken anyway.
    rank_deficient="lstsq" takes minimum-norm least-squares steps,
    "raise" raises SingularJacobianError on a singular Jacobian.
    """
    if rank_deficient not in ("lstsq", "raise"):
        raise InvalidInputError(f"rank_deficient must be 'lstsq' or 'raise', got {rank_deficient!r}.")
    if not tol > 0 or max_iter < 1:
        raise InvalidInputError("newton_solve requires tol > 0 and max_iter >= 1.")

    x = np.atleast_1d(np.asarray(x0, dtype=float)).copy()
    fx = _call(F, x)

    for iteration in range(max_iter):
        residual = float(np.max(np.abs(fx)))
        if residual <= tol:
            return NewtonResult(x=x, residual=residual, iterations=iteration)

        step = _newton_step(fd_jacobian(F, x), fx, rank_deficient)
        current = float(np.linalg.norm(fx))
        fraction = 1.0
        accepted = None
        while fraction >= MIN_STEP_FRACTION:
            trial = x + fraction * step
            try:
                f_trial = _call(F, trial)
            except NonFiniteValueError:
                f_trial = None
            if f_trial is not None and float(np.linalg.norm(f_trial)) < current:
                accepted = (trial, f_trial)
                break
            last_fraction = fraction
            fraction *= 0.5

        if accepted is None:
            trial = x + last_fraction * step
            accepted = (trial, _call(F, trial))
        x, fx = accepted
        logger.debug("Newton iteration", extra={"iteration": iteration, "residual": residual, "fraction": fraction})

    residual = float(np.max(np.abs(fx)))
    if residual <= tol:
        return NewtonResult(x=x, residual=residual, iterations=max_iter)
    raise MaxIterationsExceededError(
        f"Newton did not reach tol={tol} in {max_iter} iterations (residual {residual:.3e})."
    )
