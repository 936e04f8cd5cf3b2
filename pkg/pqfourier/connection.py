"""
Rank-one exponential classes E_{f,r} and their formal direct sums.

A factor holds f in the coordinate zeta = 1/x at the puncture at infinity.
Two factors are isomorphic when their exponents agree after dropping
positive-exponent terms, moving the constant by (1/r)Z and twisting
zeta^(1/r) by an r-th root of unity.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .errors import NotAnOrbitError, NotIrreducibleError, PrecisionExhaustedError
from .series import (
    PuiseuxSeries,
    format_series,
    monomial,
    order,
    reduce_ramification,
    series_to_dict,
    twist,
    zero,
)

logger = logging.getLogger(__name__)

FACTOR_VAR = "ζ"


@dataclass(frozen=True, eq=False)
class ExponentialFactor:
    """The class E_{f,r}; r is the ramification of f."""

    f: PuiseuxSeries

    def __post_init__(self):
        """Use the factor variable."""
        if self.f.var != FACTOR_VAR:
            object.__setattr__(self, "f", self.f.relabel(FACTOR_VAR))

    @property
    def ramification(self) -> int:
        return self.f.ramification

    @property
    def is_regular(self) -> bool:
        return all(e >= 0 for e in self.f.exponents())

    def text(self) -> str:
        return format_series(self.f, ascending=True)

    def to_dict(self, jordan: int = 1) -> Dict[str, Any]:
        """JSON-ready form, most singular term first."""
        data = series_to_dict(self.f, ascending=True)
        return {"ramification": self.ramification, "terms": data["terms"], "jordan": jordan}

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExponentialFactor):
            return NotImplemented
        return self.ramification == other.ramification and self.f == other.f

    def __hash__(self) -> int:
        return hash((self.ramification, self.text()))

    def __str__(self) -> str:
        return f"E[{self.text()}, {self.ramification}]"


def zero_factor() -> ExponentialFactor:
    """The regular class E_{0,1}."""
    return ExponentialFactor(zero(FACTOR_VAR))


def factor(f: Union[PuiseuxSeries, str]) -> ExponentialFactor:
    """Canonical factor of an exponent series or its text."""
    if isinstance(f, str):
        from .series import parse
        f = parse(f, FACTOR_VAR)
    return canonicalize(ExponentialFactor(f))


@dataclass(frozen=True, eq=False)
class ConnectionAtInfinity:
    """
    The connection d/dx + F(x)/x near x = infinity.

    f_over_x holds F(x)/x as an ascending series in xi = 1/x.
    """

    f_over_x: PuiseuxSeries
    var: str = "x"

    @property
    def ramification(self) -> int:
        return self.f_over_x.ramification

    @property
    def F(self) -> PuiseuxSeries:
        """F(x) in the coordinate xi = 1/x."""
        return self.f_over_x.shifted(-1)

    def text(self) -> str:
        return format_series(self.f_over_x, reciprocal=True, var=self.var)

    def to_dict(self) -> Dict[str, Any]:
        data = series_to_dict(self.f_over_x, reciprocal=True)
        return {"variable": self.var, "ramification": self.ramification,
                "f_over_x": data["terms"], "precision": data["precision"]}

    def __str__(self) -> str:
        return f"d/d{self.var} + ({self.text()})"


def canonicalize(e: ExponentialFactor) -> ExponentialFactor:
    """
    Canonical representative of the class of e.

    Positive exponents are dropped, the ramification is made minimal and the
    rational part of the constant moves into [0, 1/r).
    """
    f = e.f
    if f.truncation is not None and f.truncation <= 0:
        raise PrecisionExhaustedError(
            f"Exponent known only below {f.precision}; terms up to 0 are needed")
    kept = {k: c for k, c in f.terms.items() if k <= 0}
    f = reduce_ramification(PuiseuxSeries(kept, f.ramification, None, FACTOR_VAR))
    constant = f.terms.get(0)
    if constant is not None:
        step = Fraction(1, f.ramification)
        rational = constant.rational_part
        shift = step * math.floor(rational / step)
        if shift:
            terms = dict(f.terms)
            terms[0] = constant - shift
            f = PuiseuxSeries(terms, f.ramification, None, FACTOR_VAR)
    return ExponentialFactor(f)


def to_factor(c: ConnectionAtInfinity) -> ExponentialFactor:
    """Canonical factor E_{-F(1/zeta), r} of a connection at infinity."""
    f = -(c.f_over_x.shifted(-1))
    if f.truncation is not None and f.truncation <= 0:
        raise PrecisionExhaustedError(
            f"F/x known only up to 1/{c.var}^{c.f_over_x.precision}; "
            f"need more than 1/{c.var}")
    return canonicalize(ExponentialFactor(f.relabel(FACTOR_VAR)))


def slope(e: ExponentialFactor) -> Fraction:
    """max(0, -ord f)."""
    v = order(e.f)
    if v == math.inf or v >= 0:
        return Fraction(0)
    return -v


def irregularity(e: ExponentialFactor) -> Fraction:
    return e.ramification * slope(e)


def is_irreducible(e: ExponentialFactor) -> bool:
    return reduce_ramification(e.f).ramification == e.ramification


def iso_equal(a: ExponentialFactor,
              b: ExponentialFactor) -> Tuple[bool, Optional[int]]:
    """
    Test whether two factors are isomorphic.

    Returns:
        (True, k) when twisting a by mu_r^k gives b, else (False, None)
    """
    a = canonicalize(a)
    b = canonicalize(b)
    if a.ramification != b.ramification:
        return False, None
    for k in range(a.ramification):
        if canonicalize(ExponentialFactor(twist(a.f, k))).f == b.f:
            logger.debug("factors %s and %s match at twist %d", a, b, k)
            return True, k
    return False, None


def tensor_factor(a: ExponentialFactor, b: ExponentialFactor) -> ExponentialFactor:
    return canonicalize(ExponentialFactor(a.f + b.f))


def galois_orbit(e: ExponentialFactor) -> List[PuiseuxSeries]:
    """The r conjugate scalar exponents of an irreducible factor."""
    if not is_irreducible(e):
        raise NotIrreducibleError(
            f"{e} is presented at ramification {e.ramification} but is not irreducible")
    return [twist(e.f, k) for k in range(e.ramification)]


def orbit_collect(entries: Sequence[PuiseuxSeries]) -> ExponentialFactor:
    """Collect r conjugate scalar exponents back into one factor."""
    if not entries:
        raise NotAnOrbitError("An orbit needs at least one entry")
    canon = [canonicalize(ExponentialFactor(f)) for f in entries]
    r = len(canon)
    if any(c.ramification != r for c in canon):
        raise NotAnOrbitError(
            f"{r} entries with ramifications {[c.ramification for c in canon]}")
    base = canon[0]
    remaining = [c.f for c in canon]
    for k in range(r):
        image = canonicalize(ExponentialFactor(twist(base.f, k))).f
        for i, candidate in enumerate(remaining):
            if candidate == image:
                del remaining[i]
                break
        else:
            raise NotAnOrbitError(f"Entries are not the twists of {base}")
    return base


@dataclass(frozen=True, eq=False)
class LTComponent:
    """A factor with a Jordan multiplicity."""

    factor: ExponentialFactor
    jordan: int = 1

    def __post_init__(self):
        """Validate the component."""
        if self.jordan < 1:
            raise ValueError("Jordan multiplicity must be at least 1")

    def sort_key(self) -> Tuple[Fraction, int, str, int]:
        return slope(self.factor), self.factor.ramification, self.factor.text(), self.jordan

    def to_dict(self) -> Dict[str, Any]:
        return self.factor.to_dict(self.jordan)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LTComponent):
            return NotImplemented
        return self.jordan == other.jordan and self.factor == other.factor

    def __hash__(self) -> int:
        return hash((self.factor, self.jordan))

    def __str__(self) -> str:
        return str(self.factor) if self.jordan == 1 else f"{self.factor} (x) J{self.jordan}"


@dataclass(frozen=True, eq=False)
class LTObject:
    """A formal direct sum of components in a fixed order."""

    components: Tuple[LTComponent, ...] = ()

    def __post_init__(self):
        """Store components sorted."""
        object.__setattr__(self, "components",
                           tuple(sorted(self.components, key=LTComponent.sort_key)))

    @classmethod
    def of(cls, *factors: ExponentialFactor) -> "LTObject":
        return cls(tuple(LTComponent(f) for f in factors))

    @property
    def rank(self) -> int:
        return sum(c.factor.ramification * c.jordan for c in self.components)

    def to_dict(self) -> Dict[str, Any]:
        return {"rank": self.rank, "components": [c.to_dict() for c in self.components]}

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LTObject):
            return NotImplemented
        return self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def __str__(self) -> str:
        if not self.components:
            return "0"
        return " (+) ".join(str(c) for c in self.components)


def direct_sum(parts: Iterable[LTObject]) -> LTObject:
    components: List[LTComponent] = []
    for part in parts:
        components.extend(part.components)
    return LTObject(tuple(components))


def objects_iso(a: LTObject, b: LTObject) -> Tuple[bool, Tuple[int, ...]]:
    """
    Match components of a and b up to isomorphism.

    Returns:
        (True, twists) with the twist used for each component of a, in order,
        or (False, ())
    """
    if len(a) != len(b):
        return False, ()
    left = list(a.components)
    right = list(b.components)
    used = [False] * len(right)
    twists: List[int] = []

    def assign(i: int) -> bool:
        if i == len(left):
            return True
        for j, candidate in enumerate(right):
            if used[j] or candidate.jordan != left[i].jordan:
                continue
            holds, k = iso_equal(left[i].factor, candidate.factor)
            if holds:
                used[j] = True
                twists.append(k)
                if assign(i + 1):
                    return True
                used[j] = False
                twists.pop()
        return False

    if assign(0):
        return True, tuple(twists)
    return False, ()


def monomial_connection(p: int, q: int) -> ConnectionAtInfinity:
    """d/dx - (p-1)/(2p)/x + x^(q/p), stored in xi = 1/x."""
    f_over_x = monomial(1, Fraction(-(p - 1), 2 * p), "ξ") + monomial(Fraction(-q, p), 1, "ξ")
    return ConnectionAtInfinity(f_over_x)
