"""
Scalar kernels shared by the sub-Riemannian and Riemannian closed forms.

Both geodesic families rotate their horizontal velocity at a constant rate,
so their endpoints are built from

    sinc(a)         = sin(a) / a
    chord_factor(a) = (exp(2ia) - 1) / (2ia) = exp(ia) sinc(a)
    lift(a)         = (2a - sin 2a) / (4a^2)

The straight-line branches are the a -> 0 limits (sinc -> 1, lift -> 0).
All three accept scalars or numpy arrays.
"""

import numpy as np


# below this |a| the lift series is used; its first dropped term is ~3.5e-4 a^7
LIFT_SERIES_CUTOFF = 1e-2


def _finish(values: np.ndarray, scalar: bool):
    return values.item() if scalar else values


def sinc(a):
    arr = np.asarray(a, dtype=float)
    # numpy's sinc is the normalized one
    return _finish(np.sinc(arr / np.pi), arr.ndim == 0)


def chord_factor(a):
    arr = np.asarray(a, dtype=float)
    values = np.exp(1j * arr) * np.sinc(arr / np.pi)
    return _finish(values, arr.ndim == 0)


def lift(a):
    """(2a - sin 2a) / (4a^2), odd in a, ~ a/3 near 0."""
    arr = np.asarray(a, dtype=float)
    small = np.abs(arr) < LIFT_SERIES_CUTOFF
    safe = np.where(small, 1.0, arr)
    direct = (2.0 * safe - np.sin(2.0 * safe)) / (4.0 * safe * safe)
    a2 = arr * arr
    series = arr * (1.0 / 3.0 - a2 / 15.0 + 2.0 * a2 * a2 / 315.0)
    return _finish(np.where(small, series, direct), arr.ndim == 0)


def lift_over_sin_squared(a):
    """
    a^2 lift(a) / sin(a)^2 = lift(a) / sinc(a)^2.
    Finite at 0 (limit 0), poles at nonzero multiples of pi.
    """
    arr = np.asarray(a, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        values = np.asarray(lift(arr)) / np.sinc(arr / np.pi) ** 2
    return _finish(values, arr.ndim == 0)
