"""
Subcommand handlers. Each takes a RunConfig, writes its artifact and returns
an exit code; exceptions are mapped to exit codes by app.cli.main.
"""

import logging
import math

import numpy as np

from app.cli.config import RunConfig
from app.cli.export import trajectory_columns, write_json, write_records, write_table
from app.cli.verify import run_suite
from app.core.fields import dimension
from app.core.group import GroupPoint
from app.errors import ConfigError, DimensionMismatchError
from app.numerics.ode import SolveOptions
from app.riemannian.geodesics import RiemGeodesicParams, sample_riem_geodesic
from app.riemannian.minimality import SearchOptions, distance_probe, ray_scan
from app.sr.extremals import NormalExtremalParams, integrate_extremal, sample_extremal
from app.sr.shooting import ShootingOptions, connect


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1

RAY_SCAN_FIELDS = ("gamma", "direction_id", "status", "first_beaten_t", "witness_gamma", "witness_t")


def time_grid(t_max: float, dt: float) -> np.ndarray:
    """Uniform grid 0 = t_0 < ... < t_m = t_max with spacing at most dt."""
    steps = max(1, math.ceil(t_max / dt - 1e-9))
    return np.linspace(0.0, t_max, steps + 1)


def _n_for(config: RunConfig, length: int, what: str) -> int:
    n = config.n if config.n is not None else length
    if length != n:
        raise DimensionMismatchError(f"{what} needs {n} entries for n={n}, got {length}.")
    return n


def cmd_sr_geodesic(config: RunConfig) -> int:
    r = config.float_list("r")
    theta = config.float_list("theta")
    n = _n_for(config, len(r), "--r")
    _n_for(config, len(theta), "--theta")
    params = NormalExtremalParams(n=n, r=r, theta=theta, zeta=float(config.require("zeta")))
    t_max = config.positive("t_max")
    dt = config.positive("dt")

    extra = ()
    if config.get("twin", False):
        twin = integrate_extremal(params, t_max, SolveOptions(dt=dt))
        curve = sample_extremal(params, twin.times)
        deviation = np.max(np.abs(curve.points - twin.points), axis=1)
        rows = np.column_stack([curve.times, curve.points, curve.controls, deviation])
        extra = ("deviation",)
        logger.info("Numeric twin compared", extra={"max_deviation": float(np.max(deviation))})
    else:
        curve = sample_extremal(params, time_grid(t_max, dt))
        rows = np.column_stack([curve.times, curve.points, curve.controls])

    write_table(trajectory_columns(n, extra=extra), rows, config.output, config.format)
    return EXIT_OK


def _riem_direction(config: RunConfig, n_hint: int):
    rho = config.float_list("rho", required=False)
    if rho is not None:
        phi = config.float_list("phi", required=False) or (0.0,) * len(rho)
        if len(phi) != len(rho):
            raise DimensionMismatchError(f"--phi needs {len(rho)} entries, got {len(phi)}.")
        return np.array(rho) * np.exp(1j * np.array(phi))
    u0 = config.float_list("u0", required=False)
    v0 = config.float_list("v0", required=False)
    if u0 is None and v0 is None:
        return np.zeros(n_hint, dtype=complex)
    u0 = u0 or (0.0,) * len(v0)
    v0 = v0 or (0.0,) * len(u0)
    if len(u0) != len(v0):
        raise DimensionMismatchError(f"--u0 and --v0 need the same length, got {len(u0)} and {len(v0)}.")
    return np.array(u0) + 1j * np.array(v0)


def cmd_riem_geodesic(config: RunConfig) -> int:
    direction = _riem_direction(config, config.n or 1)
    n = _n_for(config, direction.size, "the horizontal direction")
    params = RiemGeodesicParams.with_gamma(direction, float(config.require("gamma")))
    t_max = config.positive("t_max")
    dt = config.positive("dt")

    curve, velocity = sample_riem_geodesic(params, time_grid(t_max, dt))
    rows = np.column_stack([curve.times, curve.points, velocity])
    columns = trajectory_columns(n, extra=("g",))
    write_table(columns, rows, config.output, config.format)
    return EXIT_OK


def cmd_connect(config: RunConfig) -> int:
    target = config.float_list("target")
    if config.n is not None and len(target) != dimension(config.n):
        raise DimensionMismatchError(f"--target needs {dimension(config.n)} coordinates for n={config.n}.")
    if len(target) < 3 or len(target) % 2 == 0:
        raise DimensionMismatchError(f"--target needs 2n+1 coordinates, got {len(target)}.")
    point = GroupPoint.from_coords(target)
    result = connect(point, ShootingOptions(tol=config.positive("tol")))
    payload = {"target": list(target), **result.to_dict()}
    write_json(payload, config.output)
    return EXIT_OK


def cmd_verify(config: RunConfig) -> int:
    report = run_suite(config.require("suite"))
    write_json(report.to_dict(), config.output)
    return EXIT_OK if report.passed else EXIT_VERIFICATION_FAILED


def cmd_ray_scan(config: RunConfig) -> int:
    gammas = config.float_list("gammas")
    if not gammas:
        raise ConfigError("--gammas must name at least one value.")
    rows = ray_scan(
        config.n or 1,
        gammas,
        horizon=config.positive("horizon"),
        step=config.positive("step"),
        search=SearchOptions(),
    )
    write_records(RAY_SCAN_FIELDS, [row.as_record() for row in rows], config.output, config.format)
    return EXIT_OK


def cmd_distance_probe(config: RunConfig) -> int:
    try:
        target_z = float(config.require("z"))
    except (TypeError, ValueError) as exc:
        raise ConfigError("--z must be a number.") from exc
    result = distance_probe(target_z, n=config.n or 1)
    write_json(result.to_dict(), config.output)
    return EXIT_OK


COMMANDS = {
    "sr-geodesic": cmd_sr_geodesic,
    "riem-geodesic": cmd_riem_geodesic,
    "connect": cmd_connect,
    "verify": cmd_verify,
    "ray-scan": cmd_ray_scan,
    "distance-probe": cmd_distance_probe,
}
