"""
Truncated Puiseux series with exact coefficients.

A series stores integer keys k meaning the exponent k/r, where r is its
ramification. Keys at or above the truncation T are unknown; T = None means
the series is exact. An empty exact series is zero, an empty truncated series
carries no information.

Series near infinity are kept in the reciprocal coordinate (1/x or 1/z) so that
every stored series is ascending; format_series(..., reciprocal=True) prints
them back in the original variable.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, List, Mapping, Optional, Tuple, Union

from .config import DEFAULT_TERMS
from .cyclotomic import ONE, ZERO, Cyclotomic, as_cyclotomic, lcm
from .errors import (
    IllFormedCompositionError,
    ParseError,
    PrecisionExhaustedError,
    UnknownOrderError,
    VariableMismatchError,
    ZeroLeadingTermError,
    ZeroOrderError,
)

logger = logging.getLogger(__name__)

Coefficient = Union[int, Fraction, Cyclotomic]

GRAMMAR = (
    "expr := term (('+'|'-') term)* ; "
    "term := coeff ('*'? VAR ('^' exponent)?)? | VAR ('^' exponent)? ; "
    "coeff := INT ('/' POSINT)? ; exponent := INT | '(' INT '/' POSINT ')' ; "
    "VAR := single letter"
)


def _ceil(value: Fraction) -> int:
    return -((-value.numerator) // value.denominator)


def _min_bound(a: Optional[Fraction], b: Optional[Fraction]) -> Optional[Fraction]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


@dataclass(frozen=True, eq=False)
class PuiseuxSeries:
    """A truncated series in var^(1/ramification)."""

    terms: Mapping[int, Coefficient]
    ramification: int = 1
    truncation: Optional[int] = None
    var: str = "z"

    def __post_init__(self):
        """Coerce coefficients and drop zero or unknown terms."""
        if self.ramification < 1:
            raise ValueError("Ramification must be at least 1")
        clean: Dict[int, Cyclotomic] = {}
        for k, c in self.terms.items():
            c = as_cyclotomic(c)
            if c.is_zero:
                continue
            if self.truncation is not None and k >= self.truncation:
                continue
            clean[int(k)] = c
        object.__setattr__(self, "terms", clean)

    @property
    def is_exact(self) -> bool:
        return self.truncation is None

    @property
    def is_zero(self) -> bool:
        """True only for the exact zero series."""
        return self.is_exact and not self.terms

    @property
    def precision(self) -> Optional[Fraction]:
        """Exponent from which terms are unknown, None when exact."""
        if self.truncation is None:
            return None
        return Fraction(self.truncation, self.ramification)

    @property
    def leading_key(self) -> int:
        if not self.terms:
            raise UnknownOrderError("Series has no known nonzero term")
        return min(self.terms)

    @property
    def leading_coefficient(self) -> Cyclotomic:
        return self.terms[self.leading_key]

    def exponents(self) -> List[Fraction]:
        """Support exponents in ascending order."""
        return [Fraction(k, self.ramification) for k in sorted(self.terms)]

    def items(self) -> List[Tuple[Fraction, Cyclotomic]]:
        return [(Fraction(k, self.ramification), self.terms[k]) for k in sorted(self.terms)]

    def coefficient(self, exponent: Union[int, Fraction]) -> Cyclotomic:
        """Coefficient at the given exponent (zero when not stored)."""
        key = Fraction(exponent) * self.ramification
        if key.denominator != 1:
            return ZERO
        return self.terms.get(int(key), ZERO)

    def relabel(self, var: str) -> "PuiseuxSeries":
        if var == self.var:
            return self
        return PuiseuxSeries(self.terms, self.ramification, self.truncation, var)

    def at_ramification(self, r: int) -> "PuiseuxSeries":
        """Same value presented at a multiple r of the ramification."""
        if r % self.ramification:
            raise ValueError(f"{r} is not a multiple of {self.ramification}")
        terms, truncation = _lifted(self, r)
        return PuiseuxSeries(terms, r, truncation, self.var)

    def shifted(self, exponent: Union[int, Fraction]) -> "PuiseuxSeries":
        """Multiply by var^exponent."""
        return arith("mul", self, monomial(exponent, 1, self.var))

    # Operators

    def _other(self, other) -> Optional["PuiseuxSeries"]:
        if isinstance(other, PuiseuxSeries):
            return other
        if isinstance(other, (int, Fraction, Cyclotomic)):
            return constant(other, self.var)
        return None

    def __add__(self, other):
        other = self._other(other)
        return NotImplemented if other is None else arith("add", self, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._other(other)
        return NotImplemented if other is None else arith("sub", self, other)

    def __rsub__(self, other):
        other = self._other(other)
        return NotImplemented if other is None else arith("sub", other, self)

    def __mul__(self, other):
        other = self._other(other)
        return NotImplemented if other is None else arith("mul", self, other)

    __rmul__ = __mul__

    def __neg__(self) -> "PuiseuxSeries":
        return PuiseuxSeries({k: -c for k, c in self.terms.items()},
                             self.ramification, self.truncation, self.var)

    def __eq__(self, other) -> bool:
        other = self._other(other)
        if other is None:
            return NotImplemented
        if self.var != other.var:
            return False
        r = lcm(self.ramification, other.ramification)
        return _lifted(self, r) == _lifted(other, r)

    def __hash__(self) -> int:
        return hash((self.var, self.precision, tuple(self.exponents())))

    def __str__(self) -> str:
        return format_series(self)


@dataclass(frozen=True, eq=False)
class Poly(PuiseuxSeries):
    """An exact polynomial with integer exponents."""

    def __post_init__(self):
        """Validate the polynomial after creation."""
        super().__post_init__()
        if not self.is_exact:
            raise ValueError("A polynomial must be exact")
        if self.ramification != 1:
            if any(k % self.ramification for k in self.terms):
                raise ValueError("A polynomial has integer exponents")
            object.__setattr__(self, "terms",
                               {k // self.ramification: c for k, c in self.terms.items()})
            object.__setattr__(self, "ramification", 1)
        if any(k < 0 for k in self.terms):
            raise ValueError("A polynomial has nonnegative exponents")

    def relabel(self, var: str) -> "Poly":
        if var == self.var:
            return self
        return Poly(self.terms, 1, None, var)

    @property
    def degree(self) -> int:
        return max(self.terms) if self.terms else -1

    @property
    def leading_coefficient(self) -> Cyclotomic:
        if not self.terms:
            return ZERO
        return self.terms[self.degree]

    @property
    def is_monic(self) -> bool:
        return self.leading_coefficient == 1


def monomial(exponent: Union[int, Fraction], coeff: Coefficient = 1,
             var: str = "z") -> PuiseuxSeries:
    """Exact series coeff * var^exponent."""
    exponent = Fraction(exponent)
    return PuiseuxSeries({exponent.numerator: coeff}, exponent.denominator, None, var)


def constant(value: Coefficient, var: str = "z") -> PuiseuxSeries:
    return PuiseuxSeries({0: value}, 1, None, var)


def zero(var: str = "z") -> PuiseuxSeries:
    return PuiseuxSeries({}, 1, None, var)


def as_poly(series: PuiseuxSeries) -> Poly:
    """Validate a series as a polynomial."""
    if isinstance(series, Poly):
        return series
    return Poly(series.terms, series.ramification, series.truncation, series.var)


def _lifted(a: PuiseuxSeries, r: int) -> Tuple[Dict[int, Cyclotomic], Optional[int]]:
    if r == a.ramification:
        return dict(a.terms), a.truncation
    step = r // a.ramification
    terms = {k * step: c for k, c in a.terms.items()}
    return terms, None if a.truncation is None else a.truncation * step


def _from_exponents(acc: Mapping[Fraction, Cyclotomic], until: Optional[Fraction],
                    var: str, base: int = 1) -> PuiseuxSeries:
    r = base
    for e in acc:
        r = lcm(r, e.denominator)
    truncation = None if until is None else _ceil(until * r)
    return PuiseuxSeries({int(e * r): c for e, c in acc.items()}, r, truncation, var)


def _check_var(a: PuiseuxSeries, b: PuiseuxSeries):
    if a.var != b.var:
        raise VariableMismatchError(f"Variables {a.var!r} and {b.var!r} differ")


# Arithmetic

def arith(kind: str, a: PuiseuxSeries, b: PuiseuxSeries) -> PuiseuxSeries:
    """Add, subtract or multiply two series of the same variable."""
    _check_var(a, b)
    r = lcm(a.ramification, b.ramification)
    ta, Ta = _lifted(a, r)
    tb, Tb = _lifted(b, r)

    if kind in ("add", "sub"):
        truncation = Ta if Tb is None else (Tb if Ta is None else min(Ta, Tb))
        out = dict(ta)
        for k, c in tb.items():
            out[k] = out.get(k, ZERO) + (c if kind == "add" else -c)
        return PuiseuxSeries(out, r, truncation, a.var)

    if kind != "mul":
        raise ValueError(f"Unknown arithmetic kind: {kind}")

    if a.is_zero or b.is_zero:
        return zero(a.var)
    va = min(ta) if ta else Ta
    vb = min(tb) if tb else Tb
    truncation = None
    if Ta is not None:
        truncation = Ta + vb
    if Tb is not None:
        truncation = Tb + va if truncation is None else min(truncation, Tb + va)
    out: Dict[int, Cyclotomic] = {}
    for i, x in ta.items():
        for j, y in tb.items():
            k = i + j
            if truncation is not None and k >= truncation:
                continue
            out[k] = out.get(k, ZERO) + x * y
    return PuiseuxSeries(out, r, truncation, a.var)


def mul_inverse(a: PuiseuxSeries, precision: Optional[int] = None) -> PuiseuxSeries:
    """
    Multiplicative inverse.

    Args:
        a: Series with a known nonzero leading term
        precision: Relative keys to expand when a is exact but not a monomial

    Returns:
        Series b with a*b = 1 on the propagated range
    """
    if a.is_zero:
        raise ZeroLeadingTermError("Cannot invert the zero series")
    if not a.terms:
        raise UnknownOrderError("Cannot invert a series with no known terms")
    r = a.ramification
    v = min(a.terms)
    inv_c = a.terms[v].inverse()
    if a.is_exact and len(a.terms) == 1:
        return PuiseuxSeries({-v: inv_c}, r, None, a.var)

    if a.truncation is not None:
        n = a.truncation - v
    else:
        n = precision if precision is not None else DEFAULT_TERMS * r
    tail = sorted((k - v, c) for k, c in a.terms.items() if k != v)
    b = [inv_c] + [ZERO] * (n - 1)
    for j in range(1, n):
        acc = ZERO
        for i, c in tail:
            if i > j:
                break
            if b[j - i]:
                acc = acc + c * b[j - i]
        b[j] = -inv_c * acc
    return PuiseuxSeries({j - v: b[j] for j in range(n)}, r, n - v, a.var)


def derivative(a: PuiseuxSeries) -> PuiseuxSeries:
    """Termwise derivative in a.var."""
    r = a.ramification
    out = {k - r: c * Fraction(k, r) for k, c in a.terms.items() if k != 0}
    truncation = None if a.truncation is None else a.truncation - r
    return PuiseuxSeries(out, r, truncation, a.var)


def order(a: PuiseuxSeries) -> Union[Fraction, float]:
    """Least exponent with a nonzero coefficient, inf for exact zero."""
    if a.terms:
        return Fraction(min(a.terms), a.ramification)
    if a.is_exact:
        return math.inf
    raise UnknownOrderError(
        f"No known term below exponent {a.precision}; the order is unknown")


def reduce_ramification(a: PuiseuxSeries) -> PuiseuxSeries:
    """Present a at its minimal ramification."""
    g = a.ramification
    for k in a.terms:
        g = gcd(g, k)
        if g == 1:
            return a
    if g == 1:
        return a
    truncation = None if a.truncation is None else a.truncation // g
    return PuiseuxSeries({k // g: c for k, c in a.terms.items()},
                         a.ramification // g, truncation, a.var)


def twist(a: PuiseuxSeries, k: int) -> PuiseuxSeries:
    """Substitute var^(1/r) -> mu_r^k var^(1/r)."""
    r = a.ramification
    if r == 1 or k % r == 0:
        return a
    out = {j: c * Cyclotomic.root_of_unity(r, j * k) for j, c in a.terms.items()}
    return PuiseuxSeries(out, r, a.truncation, a.var)


def _coeff_power(c: Cyclotomic, e: Fraction) -> Cyclotomic:
    if e.denominator == 1:
        return c ** e.numerator
    return c.nth_root(e.denominator) ** e.numerator


def _unit_power(unit: Mapping[int, Cyclotomic], beta: Fraction, n: int) -> List[Cyclotomic]:
    """First n coefficients of (1 + sum_{i>0} unit[i] t^i) ** beta."""
    if n <= 0:
        return []
    tail = sorted((i, c) for i, c in unit.items() if i > 0)
    p = [ONE] + [ZERO] * (n - 1)
    for j in range(1, n):
        acc = ZERO
        for i, c in tail:
            if i > j:
                break
            if p[j - i]:
                acc = acc + c * p[j - i] * (beta * i - (j - i))
        p[j] = acc / j
    return p


def compose(outer: PuiseuxSeries, inner: PuiseuxSeries,
            precision: Optional[int] = None) -> PuiseuxSeries:
    """
    Substitute inner for the variable of outer.

    Needs ord(inner) > 0, or an exact outer with ord(inner) != 0. Fractional
    powers of inner use the principal root of its leading coefficient.

    Args:
        outer: Series to substitute into
        inner: Series in the result variable
        precision: Relative keys to expand when exact inputs give an infinite result

    Returns:
        outer(inner) in the variable of inner
    """
    if not inner.terms:
        raise IllFormedCompositionError("Inner series has no known leading term")
    ri = inner.ramification
    vk = min(inner.terms)
    v = Fraction(vk, ri)
    if v == 0:
        raise IllFormedCompositionError("Inner series has order zero")
    if v < 0 and not outer.is_exact:
        raise IllFormedCompositionError(
            "A negative-order inner series needs an exact outer series")
    if outer.is_zero:
        return zero(inner.var)

    c = inner.terms[vk]
    inv_c = c.inverse()
    unit = {k - vk: x * inv_c for k, x in inner.terms.items()}
    unit_truncation = None if inner.truncation is None else inner.truncation - vk
    unit_is_one = unit_truncation is None and len(unit) == 1
    ro = outer.ramification
    powers = [(Fraction(k, ro), a) for k, a in sorted(outer.terms.items())]

    if not powers:
        return _from_exponents({}, Fraction(outer.truncation, ro) * v, inner.var, ri)

    def exact_power(e: Fraction) -> bool:
        return unit_is_one or (unit_truncation is None and e.denominator == 1 and e >= 0)

    lead = min(e * v for e, _ in powers)
    until: Optional[Fraction] = None
    if outer.truncation is not None:
        until = Fraction(outer.truncation, ro) * v
    if unit_truncation is not None:
        until = _min_bound(until, lead + Fraction(unit_truncation, ri))
    if not all(exact_power(e) for e, _ in powers):
        extra = precision if precision is not None else DEFAULT_TERMS * ri
        until = _min_bound(until, lead + Fraction(extra, ri))

    acc: Dict[Fraction, Cyclotomic] = {}
    for e, a in powers:
        base = e * v
        if until is not None and base >= until:
            continue
        scale = a * _coeff_power(c, e)
        if unit_is_one:
            expansion = [ONE]
        else:
            n = max(unit) * int(e) + 1 if exact_power(e) else None
            if until is not None:
                bound = _ceil((until - base) * ri)
                n = bound if n is None else min(n, bound)
            expansion = _unit_power(unit, e, n)
        for j, x in enumerate(expansion):
            if x:
                exponent = base + Fraction(j, ri)
                acc[exponent] = acc.get(exponent, ZERO) + scale * x
    return _from_exponents(acc, until, inner.var, ri)


def comp_inverse(u: PuiseuxSeries, target: Optional[int] = None,
                 var: Optional[str] = None) -> PuiseuxSeries:
    """
    Compositional inverse v with u(v(s)) = s.

    For u = c t^(m/r) (1 + ...) with m > 0 the result lives in s^(1/m) and is
    computed by Lagrange-Buermann inversion; target counts its keys past the
    leading one.

    A negative-order u is inverted only when it is an exact monomial. Otherwise
    v is a descending series in s, which has no truncated form here; invert
    1/u instead and read the result in 1/s.
    """
    var = var or u.var
    if not u.terms:
        if u.is_zero:
            raise ZeroOrderError("The zero series has no compositional inverse")
        raise UnknownOrderError("Cannot invert a series with no known terms")
    u = reduce_ramification(u)
    r = u.ramification
    m = min(u.terms)
    if m == 0:
        raise ZeroOrderError("Series of order zero has no compositional inverse")
    c = u.terms[m]
    alpha = Fraction(m, r)

    if u.is_exact and len(u.terms) == 1:
        return _from_exponents({1 / alpha: _coeff_power(c, -1 / alpha)}, None, var)
    if m < 0:
        raise IllFormedCompositionError(
            f"The inverse of a negative-order series is a series at infinity; "
            f"invert 1/u, of order {-alpha}, and substitute 1/{var}")

    n = target if target is not None else DEFAULT_TERMS * m
    if u.truncation is not None:
        available = u.truncation - m
        if available < 1:
            raise PrecisionExhaustedError("Series is known to too few terms to invert")
        if available < n:
            logger.debug("inverse target %d clamped to %d by input truncation", n, available)
            n = available

    inv_c = c.inverse()
    unit = {k - m: x * inv_c for k, x in u.terms.items()}
    lam_inv = c.nth_root(m).inverse()
    out: Dict[Fraction, Cyclotomic] = {}
    for j in range(n):
        k = r + j
        phi = _unit_power(unit, Fraction(-k, m), j + 1)
        coeff = phi[j] * (lam_inv ** k) * Fraction(r, k)
        if coeff:
            out[Fraction(k, m)] = coeff
    return _from_exponents(out, Fraction(r + n, m), var, m)


# Text

class _Parser:
    """Recursive-descent parser for the series grammar."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.var: Optional[str] = None

    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _expect(self, ch: str):
        if self._peek() != ch:
            raise ParseError(f"Expected {ch!r}", self.pos)
        self.pos += 1

    def _digits(self) -> int:
        self._skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise ParseError("Expected digits", start)
        return int(self.text[start:self.pos])

    def _int(self) -> int:
        if self._peek() == "-":
            self.pos += 1
            return -self._digits()
        return self._digits()

    def _posint(self) -> int:
        start = self.pos
        value = self._digits()
        if value == 0:
            raise ParseError("Denominator must be positive", start)
        return value

    def _exponent(self) -> Fraction:
        if self._peek() == "(":
            self.pos += 1
            num = self._int()
            self._expect("/")
            den = self._posint()
            self._expect(")")
            return Fraction(num, den)
        return Fraction(self._int())

    def _power(self) -> Fraction:
        ch = self._peek()
        if not ch.isalpha():
            raise ParseError("Expected a variable", self.pos)
        if self.var is None:
            self.var = ch
        elif ch != self.var:
            raise ParseError(f"Mixed variables {self.var!r} and {ch!r}", self.pos)
        self.pos += 1
        if self._peek() == "^":
            self.pos += 1
            return self._exponent()
        return Fraction(1)

    def _term(self) -> Tuple[Fraction, Fraction]:
        ch = self._peek()
        if ch.isdigit():
            coeff = Fraction(self._digits())
            if self._peek() == "/":
                self.pos += 1
                coeff /= self._posint()
            nxt = self._peek()
            if nxt == "*":
                self.pos += 1
                return self._power(), coeff
            if nxt.isalpha():
                return self._power(), coeff
            return Fraction(0), coeff
        if ch.isalpha():
            return self._power(), Fraction(1)
        raise ParseError("Expected a coefficient or a variable", self.pos)

    def parse(self) -> Dict[Fraction, Fraction]:
        terms: Dict[Fraction, Fraction] = {}
        if not self._peek():
            raise ParseError("Empty expression", self.pos)
        sign = 1
        if self._peek() in "+-":
            sign = -1 if self._peek() == "-" else 1
            self.pos += 1
        while True:
            exponent, coeff = self._term()
            terms[exponent] = terms.get(exponent, Fraction(0)) + sign * coeff
            ch = self._peek()
            if not ch:
                return terms
            if ch not in "+-":
                raise ParseError(f"Unexpected character {ch!r}", self.pos)
            sign = -1 if ch == "-" else 1
            self.pos += 1


def parse(text: str, var: Optional[str] = None) -> PuiseuxSeries:
    """
    Parse the series grammar into an exact series.

    Returns a Poly when every exponent is a nonnegative integer.
    """
    parser = _Parser(text)
    terms = parser.parse()
    name = parser.var or var or "z"
    if var is not None and parser.var is not None and parser.var != var:
        raise ParseError(f"Expected variable {var!r}, found {parser.var!r}", 0)
    r = 1
    for e in terms:
        r = lcm(r, e.denominator)
    keyed = {int(e * r): c for e, c in terms.items()}
    series = PuiseuxSeries(keyed, r, None, name)
    if all(e.denominator == 1 and e >= 0 for e in series.exponents()):
        return as_poly(series)
    return series


def _power_text(var: str, e: Fraction) -> str:
    if e == 1:
        return var
    if e.denominator == 1:
        return f"{var}^{e.numerator}"
    return f"{var}^({e.numerator}/{e.denominator})"


def _term_text(c: Cyclotomic, e: Fraction, var: str) -> str:
    if e == 0:
        return str(c)
    power = _power_text(var, e)
    if c == 1:
        return power
    if c == -1:
        return "-" + power
    return f"{c}*{power}"


def _ordered(a: PuiseuxSeries, sign: int, ascending: bool) -> List[Tuple[Fraction, Cyclotomic]]:
    return sorted(((sign * e, c) for e, c in a.items()), key=lambda ec: ec[0],
                  reverse=not ascending)


def format_series(a: PuiseuxSeries, reciprocal: bool = False,
                  var: Optional[str] = None, ascending: bool = False) -> str:
    """
    Canonical text, highest exponent first unless ascending is set.

    With reciprocal=True the series is read in 1/var, so each stored exponent
    is printed negated.
    """
    name = var or a.var
    sign = -1 if reciprocal else 1
    parts = [_term_text(c, e, name) for e, c in _ordered(a, sign, ascending)]
    if a.truncation is not None:
        parts.append(f"O({_power_text(name, sign * a.precision)})")
    if not parts:
        return "0"
    text = parts[0]
    for part in parts[1:]:
        text += f" - {part[1:]}" if part.startswith("-") else f" + {part}"
    return text


def series_to_dict(a: PuiseuxSeries, reciprocal: bool = False,
                   ascending: bool = False) -> Dict[str, object]:
    """JSON-ready form with exponents as reduced fractions."""
    sign = -1 if reciprocal else 1
    terms = [{"exp": str(e), "coeff": c.to_json()} for e, c in _ordered(a, sign, ascending)]
    return {
        "ramification": a.ramification,
        "terms": terms,
        "precision": None if a.precision is None else str(sign * a.precision),
    }
