"""
Exact multivariate polynomials over the rationals.

Backed by sympy's sparse polynomial rings (``sympy.polys.rings``) with QQ
coefficients, so every sum, product and derivative is exact. Variables are
ordered x1, y1, ..., xn, yn, z (interleaved, matching the frame order).
"""

from fractions import Fraction
from functools import lru_cache
from numbers import Number
from typing import Dict, Mapping, Optional, Sequence, Tuple, Union

import sympy
from sympy.polys.domains import QQ
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyRing, ring

from app.errors import DimensionMismatchError


Monomial = Tuple[int, ...]
Scalar = Union[int, Fraction, float]


def variable_names(n_vars: int) -> Tuple[str, ...]:
    """
    Names of the coordinates for a ring with ``n_vars`` variables.
    An odd count 2n+1 gives x1, y1, ..., xn, yn, z; anything else q1..qk.
    """
    if n_vars < 1:
        raise DimensionMismatchError(f"Polynomial needs at least one variable, got {n_vars}.")
    if n_vars % 2 == 1 and n_vars >= 3:
        names = []
        for i in range(1, (n_vars - 1) // 2 + 1):
            names.extend((f"x{i}", f"y{i}"))
        names.append("z")
        return tuple(names)
    return tuple(f"q{i}" for i in range(1, n_vars + 1))


@lru_cache(maxsize=None)
def polynomial_ring(n_vars: int) -> PolyRing:
    return ring(",".join(variable_names(n_vars)), QQ, lex)[0]


def to_fraction(value: Scalar) -> Fraction:
    """Exact rational value of an int, Fraction or (binary) float."""
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


def to_rational(value: Scalar) -> sympy.Rational:
    frac = to_fraction(value)
    return sympy.Rational(frac.numerator, frac.denominator)


def _to_qq(value: Scalar):
    frac = to_fraction(value)
    return QQ(frac.numerator, frac.denominator)


def _from_qq(coeff) -> Fraction:
    return Fraction(int(coeff.numerator), int(coeff.denominator))


class Polynomial:
    """
    Immutable exact polynomial in ``n_vars`` variables.

    Terms are exposed as a mapping from exponent tuples to Fractions; zero
    coefficients are never stored.
    """

    __slots__ = ("n_vars", "_element")

    def __init__(self, n_vars: int, terms: Optional[Mapping[Monomial, Scalar]] = None):
        ring_ = polynomial_ring(n_vars)
        element = ring_.zero
        for monom, coeff in (terms or {}).items():
            monom = tuple(int(e) for e in monom)
            if len(monom) != n_vars or any(e < 0 for e in monom):
                raise DimensionMismatchError(
                    f"Exponent {monom} does not fit a ring with {n_vars} variables."
                )
            element = element + ring_.term_new(monom, _to_qq(coeff))
        object.__setattr__(self, "n_vars", n_vars)
        object.__setattr__(self, "_element", element)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def _wrap(cls, n_vars: int, element) -> "Polynomial":
        poly = cls.__new__(cls)
        object.__setattr__(poly, "n_vars", n_vars)
        object.__setattr__(poly, "_element", element)
        return poly

    @classmethod
    def zero(cls, n_vars: int) -> "Polynomial":
        return cls._wrap(n_vars, polynomial_ring(n_vars).zero)

    @classmethod
    def constant(cls, n_vars: int, value: Scalar) -> "Polynomial":
        return cls._wrap(n_vars, polynomial_ring(n_vars).ground_new(_to_qq(value)))

    @classmethod
    def variable(cls, n_vars: int, index: int) -> "Polynomial":
        ring_ = polynomial_ring(n_vars)
        if not 0 <= index < n_vars:
            raise DimensionMismatchError(f"Variable index {index} out of range for {n_vars} variables.")
        return cls._wrap(n_vars, ring_.gens[index])

    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return {monom: _from_qq(coeff) for monom, coeff in self._element.items()}

    @property
    def is_zero(self) -> bool:
        return not self._element

    @property
    def degree(self) -> int:
        if self.is_zero:
            return -1
        return max(sum(monom) for monom in self._element.keys())

    def _coerce(self, other) -> Optional["Polynomial"]:
        if isinstance(other, Polynomial):
            if other.n_vars != self.n_vars:
                raise DimensionMismatchError(
                    f"Cannot combine polynomials in {self.n_vars} and {other.n_vars} variables."
                )
            return other
        if isinstance(other, Number):
            return Polynomial.constant(self.n_vars, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Polynomial._wrap(self.n_vars, self._element + other._element)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._wrap(self.n_vars, -self._element)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Polynomial._wrap(self.n_vars, self._element - other._element)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Polynomial._wrap(self.n_vars, self._element * other._element)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        return Polynomial._wrap(self.n_vars, self._element ** int(exponent))

    def __eq__(self, other):
        if isinstance(other, Number):
            other = Polynomial.constant(self.n_vars, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.n_vars == other.n_vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.n_vars, frozenset(self.terms.items())))

    def diff(self, index: int) -> "Polynomial":
        """Partial derivative with respect to variable ``index``."""
        index = int(index)
        if not 0 <= index < self.n_vars:
            raise DimensionMismatchError(f"Variable index {index} out of range for {self.n_vars} variables.")
        return Polynomial._wrap(self.n_vars, self._element.diff(index))

    def evaluate(self, values: Sequence[Scalar]):
        """
        Value at a point. Exact (Fraction) for rational inputs, float as soon
        as any coordinate is a float.
        """
        if len(values) != self.n_vars:
            raise DimensionMismatchError(
                f"Expected {self.n_vars} coordinates, got {len(values)}."
            )
        total = Fraction(0)
        for monom, coeff in self._element.items():
            term = _from_qq(coeff)
            for value, exponent in zip(values, monom):
                if exponent:
                    term = term * value ** exponent
            total = total + term
        return total

    def __str__(self) -> str:
        """
        Canonical text form ``coef * x1^a y1^b ... z^c + ...``, terms in
        descending lexicographic exponent order.
        """
        if self.is_zero:
            return "0"
        names = variable_names(self.n_vars)
        parts = []
        for monom, coeff in sorted(self.terms.items(), reverse=True):
            factors = []
            for name, exponent in zip(names, monom):
                if exponent == 1:
                    factors.append(name)
                elif exponent > 1:
                    factors.append(f"{name}^{exponent}")
            parts.append(f"{coeff} * {' '.join(factors)}" if factors else f"{coeff}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"Polynomial({self.n_vars}, {str(self)!r})"
