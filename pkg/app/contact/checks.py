"""
Exact checks on the contact catalog: transitivity of the alpha fields, the
isotropy decomposition of the fields vanishing at the origin and closure of
the whole catalog under the Lie bracket.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import sympy

from app.contact.catalog import (
    ContactCatalog,
    SpMatrix,
    block_index_to_core,
    is_infinitesimally_symplectic,
    symplectic_form_matrix,
)
from app.core.fields import PolyVectorField, dimension, lie_bracket
from app.core.group import GroupPoint, random_rational_points
from app.core.polynomial import to_rational
from app.errors import NotClosedError, NotInIsotropyAlgebraError


logger = logging.getLogger(__name__)


@dataclass
class TransitivityReport:
    n: int
    points: List[GroupPoint]
    ranks: List[int] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(rank == dimension(self.n) for rank in self.ranks)


def transitivity_check(catalog: ContactCatalog, points: Optional[Sequence[GroupPoint]] = None) -> TransitivityReport:
    """Exact rank of the alpha fields at the origin and at random rational points."""
    n = catalog.n
    if points is None:
        points = [GroupPoint.origin(n)] + random_rational_points(n, 3)
    report = TransitivityReport(n=n, points=list(points))
    for point in report.points:
        coords = point.coords
        values = sympy.Matrix([[to_rational(v) for v in m.field.evaluate(coords)] for m in catalog.alpha])
        report.ranks.append(int(values.rank()))
    logger.info("Transitivity check", extra={"n": n, "ranks": report.ranks})
    return report


@dataclass(frozen=True)
class IsotropyDecomposition:
    """
    linearization[r][s] = d X_s / d q_r at the origin in the order
    (z, x_1, ..., x_n, y_1, ..., y_n). M is c with u -> 2c u, v -> c v; K acts
    on V_1; N is the image of u in V_1.
    """

    name: str
    linearization: sympy.ImmutableMatrix
    M: sympy.Rational
    K: SpMatrix
    N: Tuple[sympy.Rational, ...]


@dataclass
class IsotropyReport:
    n: int
    decompositions: List[IsotropyDecomposition] = field(default_factory=list)
    skipped: List[str] = field(default_factory=list)


def linearization_at_origin(X: PolyVectorField) -> sympy.ImmutableMatrix:
    n = X.n
    dim = dimension(n)
    origin = (0,) * dim
    return sympy.ImmutableMatrix(
        dim,
        dim,
        lambda r, s: to_rational(
            X.components[block_index_to_core(n, int(s))].diff(block_index_to_core(n, int(r))).evaluate(origin)
        ),
    )


def decompose_isotropy(name: str, X: PolyVectorField) -> IsotropyDecomposition:
    n = X.n
    lin = linearization_at_origin(X)
    if any(lin[r, 0] != 0 for r in range(1, 2 * n + 1)):
        raise NotInIsotropyAlgebraError(f"{name}: linearization moves V_1 off the contact plane.", linearization=lin)
    c = lin[0, 0] / 2
    K = lin[1:, 1:] - c * sympy.eye(2 * n)
    if not is_infinitesimally_symplectic(K, symplectic_form_matrix(n)):
        raise NotInIsotropyAlgebraError(f"{name}: V_1 block minus c I is not in sp(V_1).", linearization=lin)
    return IsotropyDecomposition(
        name=name,
        linearization=lin,
        M=sympy.Rational(c),
        K=SpMatrix(n, K),
        N=tuple(lin[0, s] for s in range(1, 2 * n + 1)),
    )


def isotropy_check(catalog: ContactCatalog) -> IsotropyReport:
    """Decompose every member vanishing at the origin; the others are listed as skipped."""
    n = catalog.n
    origin = (0,) * dimension(n)
    report = IsotropyReport(n=n)
    for member in catalog.members():
        if any(value != 0 for value in member.field.evaluate(origin)):
            report.skipped.append(member.name)
            continue
        report.decompositions.append(decompose_isotropy(member.name, member.field))
    return report


def _field_vector(X: PolyVectorField) -> Dict[tuple, Fraction]:
    return {(k, monom): coeff for k, comp in enumerate(X.components) for monom, coeff in comp.terms.items()}


def _format(value: Fraction) -> str:
    return str(value)


@dataclass(frozen=True)
class ClosureEntry:
    left: str
    right: str
    expansion: Dict[str, Fraction]
    residual: str

    def to_dict(self) -> dict:
        return {
            "left": self.left,
            "right": self.right,
            "expansion": {name: _format(coeff) for name, coeff in self.expansion.items()},
            "residual": self.residual,
        }


@dataclass
class ClosureTable:
    n: int
    names: List[str]
    entries: List[ClosureEntry] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(entry.residual == "0" for entry in self.entries)

    def lookup(self, left: str, right: str) -> ClosureEntry:
        for entry in self.entries:
            if (entry.left, entry.right) == (left, right):
                return entry
        raise KeyError((left, right))

    def to_dict(self) -> dict:
        return {"n": self.n, "pairs": [entry.to_dict() for entry in self.entries]}


class _SpanSolver:
    """Exact coordinates in the span of a linearly independent list of fields."""

    def __init__(self, fields: Sequence[PolyVectorField]):
        vectors = [_field_vector(X) for X in fields]
        self.keys = sorted({key for vector in vectors for key in vector})
        self.index = {key: row for row, key in enumerate(self.keys)}
        self.A = sympy.Matrix(
            len(self.keys),
            len(vectors),
            lambda r, c: to_rational(vectors[c].get(self.keys[r], Fraction(0))),
        )
        _, pivots = self.A.T.rref()
        self.rows = list(pivots)
        self.S_inv = self.A.extract(self.rows, list(range(len(vectors)))).inv()

    def solve(self, X: PolyVectorField) -> Tuple[List[Fraction], Dict[tuple, Fraction]]:
        vector = _field_vector(X)
        outside = {key: value for key, value in vector.items() if key not in self.index}
        b = sympy.Matrix([to_rational(vector.get(key, Fraction(0))) for key in self.keys])
        coeffs = self.S_inv * b.extract(self.rows, [0])
        residual = b - self.A * coeffs
        leftover = {self.keys[r]: residual[r] for r in range(len(self.keys)) if residual[r] != 0}
        leftover.update(outside)
        return [Fraction(int(c.p), int(c.q)) for c in coeffs], leftover


def bracket_closure_check(catalog: ContactCatalog) -> ClosureTable:
    """
    Expand [A, B] for every unordered pair (A, B) of catalog members in the
    catalog basis, with exact rational coefficients.
    """
    members = catalog.members()
    names = [m.name for m in members]
    solver = _SpanSolver([m.field for m in members])
    table = ClosureTable(n=catalog.n, names=names)
    failures = []

    for i, left in enumerate(members):
        for right in members[i:]:
            coeffs, leftover = solver.solve(lie_bracket(left.field, right.field))
            expansion = {name: c for name, c in zip(names, coeffs) if c != 0}
            residual = "0" if not leftover else str(len(leftover)) + " unmatched terms"
            entry = ClosureEntry(left=left.name, right=right.name, expansion=expansion, residual=residual)
            table.entries.append(entry)
            if leftover:
                failures.append(entry)

    logger.info(
        "Bracket closure check",
        extra={"n": catalog.n, "pairs": len(table.entries), "failures": len(failures)},
    )
    if failures:
        raise NotClosedError(f"{len(failures)} brackets leave the catalog span.", failures=failures)
    return table
