"""
Verification runner:
- Runs every suite (brackets, connection, contact, curvature, extremals, rays)
- Prints one line per suite and the failed checks, if any
- Exits non-zero when any suite fails

Set VERIFY_SUITES=brackets,contact to run a subset.
"""

import os
import sys

from app.cli.verify import SUITES, run_suite


def main() -> int:
    requested = os.getenv("VERIFY_SUITES")
    names = [s.strip() for s in requested.split(",") if s.strip()] if requested else list(SUITES)

    failed = 0
    for name in names:
        print(f"[verify] running {name}")
        report = run_suite(name)
        bad = [c for c in report.checks if not c.passed]
        print(f"[verify] {name}: {len(report.checks) - len(bad)}/{len(report.checks)} checks passed")
        for check in bad:
            print(f"  - {check.name}: expected {check.expected}, got {check.actual} ({check.provenance})")
        failed += bool(bad)

    if failed:
        print(f"[verify] {failed} suite(s) failed")
        return 1
    print("[verify] all suites passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
