"""
Entry point: ``python -m app.cli <command> [flags]``.

Exit codes: 0 success, 1 verification failure, 2 validation error,
3 I/O error, 4 solver failure.
"""

import argparse
import logging
import sys
from typing import Optional, Sequence

from app.cli.commands import COMMANDS
from app.cli.config import FORMATS, build_run_config
from app.cli.verify import SUITES
from app.errors import HeisenbergError
from config.settings import get_settings


logger = logging.getLogger(__name__)

EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_SOLVER = 4


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON file whose keys mirror the flags; flags override it")
    parser.add_argument("--n", type=int, help="number of (x_i, y_i) pairs")
    parser.add_argument("--output", "-o", help="artifact path (default: stdout)")
    parser.add_argument("--format", choices=FORMATS)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="heisenberg", description="Geodesics on the Heisenberg group.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sr-geodesic", help="sample a sub-Riemannian normal extremal")
    _common(p)
    p.add_argument("--r", help="comma-separated radii r_i (sum r_i^2 = 1)")
    p.add_argument("--theta", help="comma-separated angles theta_i")
    p.add_argument("--zeta", type=float)
    p.add_argument("--t-max", type=float)
    p.add_argument("--dt", type=float)
    p.add_argument("--twin", action="store_true", default=None, help="add the integrated twin and a deviation column")

    p = sub.add_parser("riem-geodesic", help="sample a Riemannian geodesic")
    _common(p)
    p.add_argument("--rho", help="comma-separated horizontal radii")
    p.add_argument("--phi", help="comma-separated horizontal angles")
    p.add_argument("--u0", help="comma-separated X_i components of the initial velocity")
    p.add_argument("--v0", help="comma-separated Y_i components of the initial velocity")
    p.add_argument("--gamma", type=float, help="T component, |gamma| <= 1")
    p.add_argument("--t-max", type=float)
    p.add_argument("--dt", type=float)

    p = sub.add_parser("connect", help="shoot a normal extremal from the origin to a target")
    _common(p)
    p.add_argument("--target", help="comma-separated x1,y1,...,xn,yn,z")
    p.add_argument("--tol", type=float)

    p = sub.add_parser("verify", help="run a verification suite")
    _common(p)
    p.add_argument("suite", choices=sorted(SUITES))

    p = sub.add_parser("ray-scan", help="classify Riemannian directions as rays or beaten")
    _common(p)
    p.add_argument("--gammas", help="comma-separated T components")
    p.add_argument("--horizon", type=float)
    p.add_argument("--step", type=float)

    p = sub.add_parser("distance-probe", help="shortest geodesic to a point on the z-axis")
    _common(p)
    p.add_argument("--z", type=float)
    return parser


def run(command: str, flags: dict) -> int:
    """Build the run configuration, dispatch and map failures to exit codes."""
    try:
        config = build_run_config(command, flags)
        return COMMANDS[command](config)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (HeisenbergError, RuntimeError, ArithmeticError) as exc:
        logger.warning("Solver failure", extra={"command": command, "error": str(exc)})
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=get_settings().log_level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    flags = {key: value for key, value in vars(args).items() if key != "command"}
    return run(args.command, flags)


if __name__ == "__main__":
    raise SystemExit(main())
