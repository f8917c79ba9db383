"""
The finite catalog of infinitesimal contact transformations of theta.

alpha)  d/dx_i + y_i d/dz,  d/dy_i - x_i d/dz,  d/dz           f = 0
beta)   sum A_rs q_r d/dq_s for A in sp(V_1)                    f = 0
        dilation  sum (x_j d/dx_j + y_j d/dy_j) + 2z d/dz       f = 2
        z d/dx_i + y_i E                                        f = 2 y_i
        z d/dy_i - x_i E                                        f = -2 x_i
gamma)  z E                                                     f = 2 z

with E = sum (x_j d/dx_j + y_j d/dy_j) + z d/dz. The second special family
carries a minus sign: with a plus, theta(X) = 0 for X != 0 and the field is
not contact.

Matrices on V_1 are indexed in the order (x_1, ..., x_n, y_1, ..., y_n);
with the transversal u = d/dz in front this is (z, x_1, ..., y_n).
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List

import sympy

from app.contact.lie_derivative import contact_multiplier, exterior_derivative
from app.core.fields import PolyVectorField, contact_form, dimension, x_index, y_index
from app.core.polynomial import Polynomial, to_rational
from app.errors import ConstructionFailedError, DimensionMismatchError, InvalidInputError, NotContactError


logger = logging.getLogger(__name__)


def v1_index_to_core(n: int, r: int) -> int:
    """Core coordinate index of the r-th V_1 direction (0-based, x's then y's)."""
    if not 0 <= r < 2 * n:
        raise DimensionMismatchError(f"V_1 index {r} out of range for n={n}.")
    return x_index(r + 1) if r < n else y_index(r - n + 1)


def block_index_to_core(n: int, k: int) -> int:
    """Order (z, x_1, ..., x_n, y_1, ..., y_n) to the interleaved core order."""
    if k == 0:
        return dimension(n) - 1
    return v1_index_to_core(n, k - 1)


def core_index_to_block(n: int, index: int) -> int:
    dim = dimension(n)
    if index == dim - 1:
        return 0
    if not 0 <= index < dim - 1:
        raise DimensionMismatchError(f"Core index {index} out of range for n={n}.")
    i, is_y = divmod(index, 2)
    return 1 + i + (n if is_y else 0)


def symplectic_form_matrix(n: int) -> sympy.Matrix:
    """J[r][s] = d theta(e_r, e_s) at the origin on V_1."""
    dim = dimension(n)
    d_theta = exterior_derivative(contact_form(n))
    origin = (0,) * dim
    return sympy.Matrix(
        2 * n,
        2 * n,
        lambda r, s: to_rational(d_theta.components[v1_index_to_core(n, r)][v1_index_to_core(n, s)].evaluate(origin)),
    )


def is_infinitesimally_symplectic(A: sympy.Matrix, J: sympy.Matrix) -> bool:
    return (A.T * J + J * A).is_zero_matrix


@dataclass(frozen=True)
class SpMatrix:
    n: int
    A: sympy.Matrix

    def __post_init__(self):
        A = sympy.Matrix(self.A)
        if A.shape != (2 * self.n, 2 * self.n):
            raise DimensionMismatchError(f"sp(V_1) element on n={self.n} must be {2 * self.n}x{2 * self.n}.")
        if not is_infinitesimally_symplectic(A, symplectic_form_matrix(self.n)):
            raise InvalidInputError("Matrix does not satisfy A^T J + J A = 0.")
        object.__setattr__(self, "A", sympy.ImmutableMatrix(A))


def sp_basis(n: int) -> Dict[str, SpMatrix]:
    """
    Basis of sp(V_1), dimension n(2n+1):
    a_pq  E[x_p, x_q] - E[y_q, y_p]          (all p, q)
    b_pq  E[x_p, y_q] + E[x_q, y_p]          (p <= q)
    c_pq  E[y_p, x_q] + E[y_q, x_p]          (p <= q)
    """
    dimension(n)
    basis = {}

    def elementary(entries):
        A = sympy.zeros(2 * n, 2 * n)
        for (r, s), value in entries.items():
            A[r, s] = value
        return SpMatrix(n, A)

    for p in range(n):
        for q in range(n):
            basis[f"a{p + 1}{q + 1}"] = elementary({(p, q): 1, (n + q, n + p): -1})
    for p in range(n):
        for q in range(p, n):
            basis[f"b{p + 1}{q + 1}"] = elementary({(p, n + q): 1, (q, n + p): 1})
    for p in range(n):
        for q in range(p, n):
            basis[f"c{p + 1}{q + 1}"] = elementary({(n + p, q): 1, (n + q, p): 1})
    return basis


def sp_image_field(sp: SpMatrix) -> PolyVectorField:
    """sum_{r,s} A_rs q_r d/dq_s over V_1."""
    n = sp.n
    dim = dimension(n)
    components = [Polynomial.zero(dim) for _ in range(dim)]
    for r in range(2 * n):
        q_r = Polynomial.variable(dim, v1_index_to_core(n, r))
        for s in range(2 * n):
            value = sympy.Rational(sp.A[r, s])
            if value != 0:
                target = v1_index_to_core(n, s)
                components[target] = components[target] + q_r * Fraction(int(value.p), int(value.q))
    return PolyVectorField(n, tuple(components))


def euler_field(n: int) -> PolyVectorField:
    dim = dimension(n)
    return PolyVectorField(n, tuple(Polynomial.variable(dim, k) for k in range(dim)))


def alpha_fields(n: int) -> Dict[str, PolyVectorField]:
    dim = dimension(n)
    z = dim - 1
    fields = {}
    for i in range(1, n + 1):
        x, y = Polynomial.variable(dim, x_index(i)), Polynomial.variable(dim, y_index(i))
        fields[f"alpha_x{i}"] = PolyVectorField.coordinate(n, x_index(i)) + PolyVectorField.coordinate(n, z).scale(y)
        fields[f"alpha_y{i}"] = PolyVectorField.coordinate(n, y_index(i)) - PolyVectorField.coordinate(n, z).scale(x)
    fields["alpha_z"] = PolyVectorField.coordinate(n, z)
    return fields


def dilation_field(n: int) -> PolyVectorField:
    dim = dimension(n)
    z = Polynomial.variable(dim, dim - 1)
    return euler_field(n) + PolyVectorField.coordinate(n, dim - 1).scale(z)


def special_fields(n: int) -> Dict[str, PolyVectorField]:
    dim = dimension(n)
    z = Polynomial.variable(dim, dim - 1)
    E = euler_field(n)
    fields = {}
    for i in range(1, n + 1):
        x, y = Polynomial.variable(dim, x_index(i)), Polynomial.variable(dim, y_index(i))
        fields[f"special_x{i}"] = PolyVectorField.coordinate(n, x_index(i)).scale(z) + E.scale(y)
        fields[f"special_y{i}"] = PolyVectorField.coordinate(n, y_index(i)).scale(z) - E.scale(x)
    return fields


def gamma_field(n: int) -> PolyVectorField:
    dim = dimension(n)
    return euler_field(n).scale(Polynomial.variable(dim, dim - 1))


@dataclass(frozen=True)
class CatalogMember:
    name: str
    family: str
    field: PolyVectorField
    multiplier: Polynomial


@dataclass
class ContactCatalog:
    n: int
    alpha: List[CatalogMember] = field(default_factory=list)
    sp: List[CatalogMember] = field(default_factory=list)
    dilation: List[CatalogMember] = field(default_factory=list)
    special: List[CatalogMember] = field(default_factory=list)
    gamma: List[CatalogMember] = field(default_factory=list)

    @property
    def beta_basis(self) -> List[CatalogMember]:
        return self.dilation + self.special + self.sp

    def members(self) -> List[CatalogMember]:
        return self.alpha + self.sp + self.dilation + self.special + self.gamma

    def member(self, name: str) -> CatalogMember:
        for m in self.members():
            if m.name == name:
                return m
        raise KeyError(name)

    def sizes(self) -> Dict[str, int]:
        return {
            "alpha": len(self.alpha),
            "sp": len(self.sp),
            "dilation_special": len(self.dilation) + len(self.special),
            "gamma": len(self.gamma),
        }


def _member(name: str, family: str, X: PolyVectorField) -> CatalogMember:
    try:
        f = contact_multiplier(X)
    except NotContactError as exc:
        raise ConstructionFailedError(f"Catalog field {name} is not contact: {exc}") from exc
    return CatalogMember(name=name, family=family, field=X, multiplier=f)


def build_catalog(n: int) -> ContactCatalog:
    """Every member is checked with contact_multiplier as it is built."""
    dimension(n)
    catalog = ContactCatalog(n=n)
    catalog.alpha = [_member(name, "alpha", X) for name, X in alpha_fields(n).items()]
    catalog.sp = [_member(f"sp_{name}", "sp", sp_image_field(A)) for name, A in sp_basis(n).items()]
    catalog.dilation = [_member("dilation", "dilation", dilation_field(n))]
    catalog.special = [_member(name, "special", X) for name, X in special_fields(n).items()]
    catalog.gamma = [_member("gamma", "gamma", gamma_field(n))]
    logger.info("Contact catalog built", extra={"n": n, **catalog.sizes()})
    return catalog
