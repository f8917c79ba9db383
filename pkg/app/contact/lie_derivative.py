"""
Exact Cartan calculus on polynomial forms: d, interior products and the
Lie derivative L_X omega = i_X d omega + d(omega(X)).
"""

from dataclasses import dataclass
from typing import Tuple

from app.core.fields import PolyOneForm, PolyVectorField, contact_form, dimension, pair
from app.core.polynomial import Polynomial
from app.errors import DimensionMismatchError, NotContactError


@dataclass(frozen=True)
class TwoForm:
    """
    sum_{a<b} components[a][b] dq_a ^ dq_b, stored as a full antisymmetric
    table so that components[b][a] = -components[a][b].
    """

    n: int
    components: Tuple[Tuple[Polynomial, ...], ...]

    def __post_init__(self):
        dim = dimension(self.n)
        rows = tuple(tuple(row) for row in self.components)
        if len(rows) != dim or any(len(row) != dim for row in rows):
            raise DimensionMismatchError(f"Two-form on n={self.n} needs a {dim}x{dim} table.")
        for a in range(dim):
            for b in range(dim):
                if rows[a][b] != -rows[b][a]:
                    raise ValueError(f"Two-form table is not antisymmetric at ({a}, {b}).")
        object.__setattr__(self, "components", rows)

    @property
    def is_zero(self) -> bool:
        return all(entry.is_zero for row in self.components for entry in row)

    def evaluate(self, coords) -> tuple:
        return tuple(tuple(entry.evaluate(coords) for entry in row) for row in self.components)


def differential(f: Polynomial, n: int) -> PolyOneForm:
    dim = dimension(n)
    if f.n_vars != dim:
        raise DimensionMismatchError(f"Function in {f.n_vars} variables does not live on n={n}.")
    return PolyOneForm(n, tuple(f.diff(b) for b in range(dim)))


def exterior_derivative(omega: PolyOneForm) -> TwoForm:
    """(d omega)[a][b] = d_a omega_b - d_b omega_a."""
    dim = omega.n_vars
    w = omega.components
    table = tuple(tuple(w[b].diff(a) - w[a].diff(b) for b in range(dim)) for a in range(dim))
    return TwoForm(omega.n, table)


def interior_product(X: PolyVectorField, beta: TwoForm) -> PolyOneForm:
    """(i_X beta)_b = sum_a X_a beta[a][b]."""
    if X.n != beta.n:
        raise DimensionMismatchError(f"Cannot contract a field on n={X.n} with a form on n={beta.n}.")
    dim = X.n_vars
    components = []
    for b in range(dim):
        total = Polynomial.zero(dim)
        for a in range(dim):
            if not X.components[a].is_zero:
                total = total + X.components[a] * beta.components[a][b]
        components.append(total)
    return PolyOneForm(X.n, tuple(components))


def lie_derivative_one_form(X: PolyVectorField, omega: PolyOneForm) -> PolyOneForm:
    if X.n != omega.n:
        raise DimensionMismatchError(f"Cannot differentiate a form on n={omega.n} along a field on n={X.n}.")
    return interior_product(X, exterior_derivative(omega)) + differential(pair(omega, X), X.n)


def contact_multiplier(X: PolyVectorField, n: int = None) -> Polynomial:
    """
    The f with L_X theta = f theta. theta has dz coefficient 1, so f is the dz
    coefficient of L_X theta and the rest must match f theta exactly.
    """
    if n is not None and n != X.n:
        raise DimensionMismatchError(f"Field lives on n={X.n}, not n={n}.")
    theta = contact_form(X.n)
    derivative = lie_derivative_one_form(X, theta)
    f = derivative.components[-1]
    residual = derivative - theta.scale(f)
    if not residual.is_zero:
        raise NotContactError(f"L_X theta is not a multiple of theta; residual {residual}.", residual=residual)
    return f
