"""
Exact numbers in cyclotomic fields.

An element of Q(mu_N) is an element of sympy's algebraic field generated by
t = exp(2*pi*i/N); coeffs mirrors it in the power basis 1, t, ..., t^(phi(N)-1).
Rational values always collapse to order 1, so two rationals compare and hash
like Fractions.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

from sympy import I, QQ, exp, integer_nthroot, pi, totient
from sympy.polys.domains import AlgebraicField

from .errors import RootNotInFieldError

logger = logging.getLogger(__name__)


def lcm(a: int, b: int) -> int:
    """Least common multiple of two positive integers."""
    return a * b // gcd(a, b)


@lru_cache(maxsize=None)
def field_degree(order: int) -> int:
    """Degree of Q(mu_order) over Q."""
    return int(totient(order))


@lru_cache(maxsize=None)
def cyclotomic_field(order: int) -> AlgebraicField:
    """Q(mu_order) for order at least 3, generated by exp(2*pi*i/order)."""
    if order < 3:
        raise ValueError(f"Q(mu_{order}) is the rational field")
    K = QQ.algebraic_field(exp(2 * pi * I / order))
    logger.debug("built %s of degree %d", K, len(K.mod.to_list()) - 1)
    return K


@lru_cache(maxsize=None)
def _generator_power(order: int, k: int):
    K = cyclotomic_field(order)
    return K.new([QQ(1), QQ(0)]) ** k


def _to_qq(c: Fraction):
    return QQ(c.numerator, c.denominator)


def _to_fraction(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def _element(order: int, powers: Mapping[int, Fraction]):
    """sum(c * t^k) in cyclotomic_field(order)."""
    K = cyclotomic_field(order)
    total = K.zero
    for k, c in powers.items():
        if c:
            total = total + K.new([_to_qq(c)]) * _generator_power(order, k % order)
    return total


@dataclass(frozen=True, eq=False)
class Cyclotomic:
    """An element of the cyclotomic field of the given order."""

    order: int = 1
    coeffs: Tuple[Fraction, ...] = (Fraction(0),)
    _value: Any = field(default=None, init=False, repr=False)

    def __post_init__(self):
        """Validate and normalize after creation."""
        if self.order < 1:
            raise ValueError("Cyclotomic order must be positive")
        coeffs = tuple(Fraction(c) for c in self.coeffs)
        if len(coeffs) != field_degree(self.order):
            raise ValueError(
                f"Expected {field_degree(self.order)} coefficients for order "
                f"{self.order}, got {len(coeffs)}")
        if self.order > 1 and not any(coeffs[1:]):
            object.__setattr__(self, "order", 1)
            coeffs = coeffs[:1]
        object.__setattr__(self, "coeffs", coeffs)
        if self.order > 1:
            object.__setattr__(self, "_value", _element(self.order, dict(enumerate(coeffs))))

    # Constructors

    @classmethod
    def rational(cls, value: Union[int, Fraction]) -> "Cyclotomic":
        return cls(1, (Fraction(value),))

    @classmethod
    def from_element(cls, order: int, value) -> "Cyclotomic":
        """Wrap an element of cyclotomic_field(order)."""
        rep = [_to_fraction(c) for c in reversed(value.to_list())]
        rep.extend([Fraction(0)] * (field_degree(order) - len(rep)))
        return cls(order, tuple(rep))

    @classmethod
    def from_powers(cls, order: int, coeffs: List[Fraction]) -> "Cyclotomic":
        """Element sum(coeffs[i] * mu_order^i)."""
        if order <= 2:
            sign = -1 if order == 2 else 1
            return cls.rational(sum((Fraction(c) * sign ** i for i, c in enumerate(coeffs)),
                                    Fraction(0)))
        return cls.from_element(order, _element(order, dict(enumerate(coeffs))))

    @classmethod
    def root_of_unity(cls, order: int, k: int = 1) -> "Cyclotomic":
        """mu_order^k with mu_order = exp(2*pi*i/order)."""
        if order < 1:
            raise ValueError("Root of unity order must be positive")
        k %= order
        g = gcd(k, order)
        order, k = order // g, k // g
        if order <= 2:
            return cls.rational(1 if order == 1 else -1)
        return cls.from_element(order, _generator_power(order, k))

    # Queries

    @property
    def is_rational(self) -> bool:
        return self.order == 1

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @property
    def rational_part(self) -> Fraction:
        """Coefficient of 1 in the power basis."""
        return self.coeffs[0]

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def in_field(self, order: int):
        """This number as an element of cyclotomic_field(order)."""
        if order % self.order:
            raise ValueError(f"Q(mu_{self.order}) does not embed in Q(mu_{order})")
        if order == self.order:
            return self._value
        step = order // self.order
        return _element(order, {i * step: c for i, c in enumerate(self.coeffs)})

    # Arithmetic

    def __bool__(self) -> bool:
        return not self.is_zero

    def __add__(self, other: Any) -> "Cyclotomic":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if self.order == 1 and other.order == 1:
            return Cyclotomic.rational(self.coeffs[0] + other.coeffs[0])
        order = lcm(self.order, other.order)
        return Cyclotomic.from_element(order, self.in_field(order) + other.in_field(order))

    __radd__ = __add__

    def __neg__(self) -> "Cyclotomic":
        return Cyclotomic(self.order, tuple(-c for c in self.coeffs))

    def __sub__(self, other: Any) -> "Cyclotomic":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> "Cyclotomic":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other: Any) -> "Cyclotomic":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if other.order == 1:
            s = other.coeffs[0]
            return Cyclotomic(self.order, tuple(c * s for c in self.coeffs))
        if self.order == 1:
            s = self.coeffs[0]
            return Cyclotomic(other.order, tuple(c * s for c in other.coeffs))
        order = lcm(self.order, other.order)
        return Cyclotomic.from_element(order, self.in_field(order) * other.in_field(order))

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        """Multiplicative inverse."""
        if self.is_zero:
            raise ZeroDivisionError("Inverse of zero cyclotomic number")
        if self.order == 1:
            return Cyclotomic.rational(1 / self.coeffs[0])
        K = cyclotomic_field(self.order)
        return Cyclotomic.from_element(self.order, K.one / self._value)

    def __truediv__(self, other: Any) -> "Cyclotomic":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: Any) -> "Cyclotomic":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int) -> "Cyclotomic":
        if n < 0:
            return self.inverse() ** (-n)
        if self.order == 1:
            return Cyclotomic.rational(self.coeffs[0] ** n)
        return Cyclotomic.from_element(self.order, self._value ** n)

    def nth_root(self, n: int) -> "Cyclotomic":
        """
        The n-th root with the smallest nonnegative argument.

        Supported only when this number is a positive rational times a root
        of unity and the rational part is an exact n-th power.
        """
        if n < 1:
            raise ValueError("Root index must be positive")
        if n == 1 or self.is_zero:
            return self
        unit_order = lcm(self.order, 2)
        for e in range(unit_order):
            candidate = self * Cyclotomic.root_of_unity(unit_order, -e)
            if candidate.is_rational and candidate.coeffs[0] > 0:
                radius = candidate.coeffs[0]
                break
        else:
            raise RootNotInFieldError(f"{self} is not a rational times a root of unity")
        num, num_exact = integer_nthroot(radius.numerator, n)
        den, den_exact = integer_nthroot(radius.denominator, n)
        if not (num_exact and den_exact):
            raise RootNotInFieldError(f"{radius} is not a perfect {n}-th power")
        logger.debug("root %d of %s taken with argument index %d", n, self, e)
        modulus = Cyclotomic.rational(Fraction(int(num), int(den)))
        return modulus * Cyclotomic.root_of_unity(unit_order * n, e)

    # Comparison and text

    def __eq__(self, other: Any) -> bool:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if self.order == other.order:
            return self.coeffs == other.coeffs
        order = lcm(self.order, other.order)
        return self.in_field(order) == other.in_field(order)

    def __hash__(self) -> int:
        if self.order == 1:
            return hash(self.coeffs[0])
        return hash("cyclotomic")

    def __str__(self) -> str:
        if self.order == 1:
            return str(self.coeffs[0])
        parts: List[str] = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                parts.append(str(c))
                continue
            unit = f"mu{self.order}" if i == 1 else f"mu{self.order}^{i}"
            if c == 1:
                parts.append(unit)
            elif c == -1:
                parts.append(f"-{unit}")
            else:
                parts.append(f"{c}*{unit}")
        return "(" + " + ".join(parts).replace("+ -", "- ") + ")"

    def to_json(self) -> Union[str, Dict[str, Any]]:
        """Rational text, or the order with power-basis coefficients."""
        if self.order == 1:
            return str(self.coeffs[0])
        return {"cyclotomic_order": self.order, "coeffs": [str(c) for c in self.coeffs]}


ZERO = Cyclotomic.rational(0)
ONE = Cyclotomic.rational(1)


def _coerce(value: Any) -> Optional[Cyclotomic]:
    if isinstance(value, Cyclotomic):
        return value
    if isinstance(value, (int, Fraction)):
        return Cyclotomic.rational(value)
    return None


def as_cyclotomic(value: Union[int, Fraction, Cyclotomic]) -> Cyclotomic:
    """Coerce an int, Fraction or Cyclotomic."""
    result = _coerce(value)
    if result is None:
        raise TypeError(f"Cannot use {value!r} as an exact coefficient")
    return result
