"""
Polynomial vector fields and 1-forms on G = R^(2n+1), the left-invariant
frame X_i, Y_i, T and the contact form theta.

Convention C1 (the only place frame signs are written down):

    X_i = d/dx_i - y_i d/dz,   Y_i = d/dy_i + x_i d/dz,   T = d/dz
    theta = dz + sum_i (y_i dx_i - x_i dy_i)

Every Hamiltonian and geodesic equation elsewhere is derived from these
polynomials.
"""

import re
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from app.core.polynomial import Polynomial, Scalar, variable_names
from app.errors import DimensionMismatchError, InvalidSelectorError


_SELECTOR = re.compile(r"^(?P<kind>[XY])_?(?P<index>\d+)$|^T$")


def dimension(n: int) -> int:
    if not isinstance(n, int) or n < 1:
        raise DimensionMismatchError(f"n must be a positive integer, got {n!r}.")
    return 2 * n + 1


def x_index(i: int) -> int:
    """Core coordinate index of x_i (1-based i)."""
    return 2 * (i - 1)


def y_index(i: int) -> int:
    return 2 * (i - 1) + 1


def _check_components(n: int, components: Sequence[Polynomial], kind: str) -> None:
    dim = dimension(n)
    if len(components) != dim:
        raise DimensionMismatchError(f"{kind} on n={n} needs {dim} components, got {len(components)}.")
    for comp in components:
        if not isinstance(comp, Polynomial) or comp.n_vars != dim:
            raise DimensionMismatchError(f"{kind} components must be polynomials in {dim} variables.")


def _affine_parts(n: int, components: Sequence[Polynomial], kind: str) -> Tuple[np.ndarray, np.ndarray]:
    dim = dimension(n)
    constant = np.zeros(dim)
    linear = np.zeros((dim, dim))
    for k, comp in enumerate(components):
        for monom, coeff in comp.terms.items():
            order = sum(monom)
            if order == 0:
                constant[k] = float(coeff)
            elif order == 1:
                linear[k, monom.index(1)] = float(coeff)
            else:
                raise ValueError(f"{kind} component {k} has degree {order}; only affine coefficients compile.")
    return constant, linear


@dataclass(frozen=True)
class PolyVectorField:
    """Sum of components[k] * d/dq_k with exact polynomial coefficients."""

    n: int
    components: Tuple[Polynomial, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        _check_components(self.n, self.components, "Vector field")

    @classmethod
    def zero(cls, n: int) -> "PolyVectorField":
        dim = dimension(n)
        return cls(n, tuple(Polynomial.zero(dim) for _ in range(dim)))

    @classmethod
    def coordinate(cls, n: int, index: int) -> "PolyVectorField":
        """The coordinate field d/dq_index."""
        dim = dimension(n)
        return cls(n, tuple(Polynomial.constant(dim, 1 if k == index else 0) for k in range(dim)))

    @property
    def n_vars(self) -> int:
        return dimension(self.n)

    @property
    def is_zero(self) -> bool:
        return all(comp.is_zero for comp in self.components)

    @property
    def degree(self) -> int:
        return max(comp.degree for comp in self.components)

    def _check_same(self, other: "PolyVectorField") -> None:
        if not isinstance(other, PolyVectorField) or other.n != self.n:
            raise DimensionMismatchError("Vector fields live on groups of different dimension.")

    def __add__(self, other: "PolyVectorField") -> "PolyVectorField":
        self._check_same(other)
        return PolyVectorField(self.n, tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "PolyVectorField") -> "PolyVectorField":
        self._check_same(other)
        return PolyVectorField(self.n, tuple(a - b for a, b in zip(self.components, other.components)))

    def __neg__(self) -> "PolyVectorField":
        return PolyVectorField(self.n, tuple(-a for a in self.components))

    def scale(self, factor) -> "PolyVectorField":
        """Multiply by a scalar or by a polynomial function."""
        return PolyVectorField(self.n, tuple(a * factor for a in self.components))

    def __rmul__(self, factor) -> "PolyVectorField":
        return self.scale(factor)

    def apply(self, f: Polynomial) -> Polynomial:
        """Directional derivative V(f) = sum_k V_k df/dq_k."""
        if f.n_vars != self.n_vars:
            raise DimensionMismatchError("Function and field live on different spaces.")
        result = Polynomial.zero(self.n_vars)
        for k, comp in enumerate(self.components):
            if not comp.is_zero:
                result = result + comp * f.diff(k)
        return result

    def evaluate(self, coords: Sequence[Scalar]) -> tuple:
        return tuple(comp.evaluate(coords) for comp in self.components)

    def affine_coefficients(self) -> Tuple[np.ndarray, np.ndarray]:
        """(c, L) with V(q) = c + L q, for fields of degree at most one."""
        return _affine_parts(self.n, self.components, "Vector field")

    def __str__(self) -> str:
        names = variable_names(self.n_vars)
        parts = [f"({comp}) d/d{name}" for comp, name in zip(self.components, names) if not comp.is_zero]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class PolyOneForm:
    """Sum of components[k] * dq_k with exact polynomial coefficients."""

    n: int
    components: Tuple[Polynomial, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        _check_components(self.n, self.components, "One-form")

    @classmethod
    def zero(cls, n: int) -> "PolyOneForm":
        dim = dimension(n)
        return cls(n, tuple(Polynomial.zero(dim) for _ in range(dim)))

    @property
    def n_vars(self) -> int:
        return dimension(self.n)

    @property
    def is_zero(self) -> bool:
        return all(comp.is_zero for comp in self.components)

    def _check_same(self, other: "PolyOneForm") -> None:
        if not isinstance(other, PolyOneForm) or other.n != self.n:
            raise DimensionMismatchError("One-forms live on groups of different dimension.")

    def __add__(self, other: "PolyOneForm") -> "PolyOneForm":
        self._check_same(other)
        return PolyOneForm(self.n, tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "PolyOneForm") -> "PolyOneForm":
        self._check_same(other)
        return PolyOneForm(self.n, tuple(a - b for a, b in zip(self.components, other.components)))

    def scale(self, factor) -> "PolyOneForm":
        return PolyOneForm(self.n, tuple(a * factor for a in self.components))

    def evaluate(self, coords: Sequence[Scalar]) -> tuple:
        return tuple(comp.evaluate(coords) for comp in self.components)

    def affine_coefficients(self) -> Tuple[np.ndarray, np.ndarray]:
        return _affine_parts(self.n, self.components, "One-form")

    def __str__(self) -> str:
        names = variable_names(self.n_vars)
        parts = [f"({comp}) d{name}" for comp, name in zip(self.components, names) if not comp.is_zero]
        return " + ".join(parts) if parts else "0"


def frame_selectors(n: int) -> List[str]:
    """Frame order X1, Y1, ..., Xn, Yn, T."""
    dimension(n)
    selectors = []
    for i in range(1, n + 1):
        selectors.extend((f"X{i}", f"Y{i}"))
    selectors.append("T")
    return selectors


def frame_field(n: int, which: str) -> PolyVectorField:
    """Left-invariant frame field X_i, Y_i or T (selector strings "X1", "Y2", "T")."""
    dim = dimension(n)
    match = _SELECTOR.match(str(which).strip())
    if not match:
        raise InvalidSelectorError(f"Unknown frame selector {which!r}; expected X<i>, Y<i> or T.")

    zero = Polynomial.zero(dim)
    one = Polynomial.constant(dim, 1)
    components = [zero] * dim
    if match.group("kind") is None:
        components[dim - 1] = one
        return PolyVectorField(n, tuple(components))

    i = int(match.group("index"))
    if not 1 <= i <= n:
        raise InvalidSelectorError(f"Frame selector {which!r} is out of range for n={n}.")
    if match.group("kind") == "X":
        components[x_index(i)] = one
        components[dim - 1] = -Polynomial.variable(dim, y_index(i))
    else:
        components[y_index(i)] = one
        components[dim - 1] = Polynomial.variable(dim, x_index(i))
    return PolyVectorField(n, tuple(components))


def frame(n: int) -> List[PolyVectorField]:
    return [frame_field(n, selector) for selector in frame_selectors(n)]


def contact_form(n: int) -> PolyOneForm:
    """theta = dz + sum_i (y_i dx_i - x_i dy_i)."""
    dim = dimension(n)
    components = [Polynomial.zero(dim)] * dim
    for i in range(1, n + 1):
        components[x_index(i)] = Polynomial.variable(dim, y_index(i))
        components[y_index(i)] = -Polynomial.variable(dim, x_index(i))
    components[dim - 1] = Polynomial.constant(dim, 1)
    return PolyOneForm(n, tuple(components))


def lie_bracket(V: PolyVectorField, W: PolyVectorField) -> PolyVectorField:
    """[V, W] = V(W) - W(V), componentwise and exact."""
    if V.n != W.n:
        raise DimensionMismatchError(f"Cannot bracket fields on n={V.n} and n={W.n}.")
    return PolyVectorField(
        V.n,
        tuple(V.apply(w) - W.apply(v) for v, w in zip(V.components, W.components)),
    )


def pair(omega: PolyOneForm, V: PolyVectorField) -> Polynomial:
    """Pointwise pairing omega(V) = sum_k omega_k V_k."""
    if omega.n != V.n:
        raise DimensionMismatchError(f"Cannot pair a form on n={omega.n} with a field on n={V.n}.")
    result = Polynomial.zero(V.n_vars)
    for w, v in zip(omega.components, V.components):
        result = result + w * v
    return result


def frame_coefficients(field: PolyVectorField, coords: Sequence[Scalar]) -> tuple:
    """
    Components of field(q) in the frame (X1, Y1, ..., T) at q.
    Inverts the unipotent frame matrix exactly: the horizontal parts carry
    over and the T part absorbs the z-correction.
    """
    n = field.n
    values = list(field.evaluate(coords))
    dim = dimension(n)
    t_part = values[dim - 1]
    for i in range(1, n + 1):
        a, b = values[x_index(i)], values[y_index(i)]
        x, y = coords[x_index(i)], coords[y_index(i)]
        t_part = t_part + a * y - b * x
    return tuple(values[: dim - 1]) + (t_part,)
