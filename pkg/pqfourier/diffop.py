"""
Differential operators with Puiseux series coefficients.

An operator is a finite sum of coefficient * D^i, D = d/dvar. Only the
log-derivative of a conjugating factor ever enters, so exponentials never
need to be represented.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd
from typing import Dict, Mapping, Optional, Tuple

from .errors import (
    HigherOrderUnsupportedError,
    NonCoprimeDegreesError,
    VariableMismatchError,
    ZeroDerivativeError,
)
from .models import Chart
from .series import (
    Poly,
    PuiseuxSeries,
    compose,
    derivative,
    format_series,
    monomial,
    mul_inverse,
    zero,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class DifferentialOperator:
    """Sum of coeffs[i] * D^i in the variable var."""

    coeffs: Mapping[int, PuiseuxSeries]
    var: str = "z"

    def __post_init__(self):
        """Drop zero coefficients and check variables."""
        clean: Dict[int, PuiseuxSeries] = {}
        for power, c in self.coeffs.items():
            if power < 0:
                raise ValueError("Derivative powers must be nonnegative")
            if c.var != self.var:
                c = c.relabel(self.var)
            if not c.is_zero:
                clean[int(power)] = c
        object.__setattr__(self, "coeffs", clean)

    @property
    def order(self) -> int:
        return max(self.coeffs) if self.coeffs else 0

    def coefficient(self, power: int) -> PuiseuxSeries:
        return self.coeffs.get(power, zero(self.var))

    def first_order_parts(self) -> Tuple[PuiseuxSeries, PuiseuxSeries]:
        """(a, b) for an operator a*D + b."""
        if self.order > 1:
            raise HigherOrderUnsupportedError(
                f"Only operators of order at most 1 are supported, got order {self.order}")
        return self.coefficient(1), self.coefficient(0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DifferentialOperator):
            return NotImplemented
        if self.var != other.var or set(self.coeffs) != set(other.coeffs):
            return False
        return all(self.coeffs[i] == other.coeffs[i] for i in self.coeffs)

    def __hash__(self) -> int:
        return hash((self.var, tuple(sorted(self.coeffs))))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for power in sorted(self.coeffs, reverse=True):
            text = f"({format_series(self.coeffs[power])})"
            if power == 1:
                text += "*D"
            elif power > 1:
                text += f"*D^{power}"
            parts.append(text)
        return " + ".join(parts)


def first_order(a: PuiseuxSeries, b: PuiseuxSeries) -> DifferentialOperator:
    """The operator a*D + b."""
    return DifferentialOperator({1: a, 0: b.relabel(a.var)}, a.var)


def op_compose(a: DifferentialOperator, b: DifferentialOperator) -> DifferentialOperator:
    """Operator product a o b by the Leibniz rule."""
    if a.var != b.var:
        raise VariableMismatchError(f"Variables {a.var!r} and {b.var!r} differ")
    out: Dict[int, PuiseuxSeries] = {}
    for i, ai in a.coeffs.items():
        for j, bj in b.coeffs.items():
            deriv = bj
            for k in range(i + 1):
                if k:
                    deriv = derivative(deriv)
                term = ai * deriv * comb(i, k)
                power = i - k + j
                out[power] = out[power] + term if power in out else term
    return DifferentialOperator(out, a.var)


def _check_coprime(W: Poly, Q: Poly):
    if gcd(W.degree, Q.degree) != 1:
        raise NonCoprimeDegreesError(
            f"Degrees {W.degree} and {Q.degree} are not coprime")


def _kac_schwarz(X: Poly, Y: Poly, sign: int, chart: Chart,
                 precision: Optional[int]) -> DifferentialOperator:
    """(1/X') D - X''/(2 X'^2) + sign*Y in the requested chart."""
    if X.degree < 1:
        raise ZeroDerivativeError(f"{X} has zero derivative")
    d1 = derivative(X)
    d2 = derivative(d1)
    if Chart(chart) is Chart.ZERO:
        inv = mul_inverse(d1, precision)
        a = inv
        b = -(d2 * inv * inv) * Fraction(1, 2) + Y * sign
        return first_order(a, b.relabel(X.var))

    # In w = 1/z every polynomial becomes an exact Laurent polynomial and
    # D_z = -w^2 D_w.
    w_inv = monomial(-1, 1, "w")
    inv = mul_inverse(compose(d1, w_inv), precision)
    a = -(monomial(2, 1, "w") * inv)
    b = -(compose(d2, w_inv) * inv * inv) * Fraction(1, 2)
    if Y.terms:
        b = b + compose(Y, w_inv) * sign
    return first_order(a, b)


def ks_operator(W: Poly, Q: Poly, chart: Chart = Chart.ZERO,
                precision: Optional[int] = None) -> DifferentialOperator:
    """
    The Kac-Schwarz operator (1/W') D - W''/(2 W'^2) + Q.

    Args:
        W: Polynomial of degree at least 1
        Q: Polynomial
        chart: Expand around z = 0, or around z = infinity in w = 1/z
        precision: Relative keys for coefficients with infinitely many terms

    Returns:
        First-order operator
    """
    return _kac_schwarz(W, Q, 1, chart, precision)


def ks_dual_operator(W: Poly, Q: Poly, chart: Chart = Chart.ZERO,
                     precision: Optional[int] = None) -> DifferentialOperator:
    """The dual operator (1/Q') D - Q''/(2 Q'^2) - W."""
    _check_coprime(W, Q)
    return _kac_schwarz(Q, W, -1, chart, precision)


def conjugate_by_log_derivative(op: DifferentialOperator,
                                lam: PuiseuxSeries) -> DifferentialOperator:
    """Substitute D -> D + lam in an operator of order at most 1."""
    a, b = op.first_order_parts()
    if a.is_zero:
        return op
    return first_order(a, a * lam.relabel(op.var) + b)


def rho_log_derivative(p: int, q: int, var: str = "z") -> PuiseuxSeries:
    """(p-1)/(2z) - p z^(p+q-1), the log-derivative of the monomial correction factor."""
    return monomial(-1, Fraction(p - 1, 2), var) + monomial(p + q - 1, -p, var)


def verify_rho_identity(p: int, q: int) -> bool:
    """Check that the correction factor turns A^(z^p, z^q) into (1/(p z^(p-1))) D."""
    if p < 1 or q < 1:
        raise ValueError("Degrees must be positive")
    if gcd(p, q) != 1:
        raise NonCoprimeDegreesError(f"Degrees {p} and {q} are not coprime")
    W = Poly({p: 1})
    Q = Poly({q: 1})
    conjugated = conjugate_by_log_derivative(ks_operator(W, Q), rho_log_derivative(p, q))
    expected = DifferentialOperator({1: monomial(1 - p, Fraction(1, p))})
    holds = conjugated == expected
    logger.debug("rho identity for (%d, %d): %s", p, q, holds)
    return holds


def change_variable(op: DifferentialOperator, phi: PuiseuxSeries,
                    precision: Optional[int] = None) -> DifferentialOperator:
    """
    Substitute op.var = phi(x) in a*D + b.

    Returns (a(phi)/phi') D_x + b(phi) in the variable of phi.
    """
    a, b = op.first_order_parts()
    var = phi.var
    b_new = compose(b, phi, precision) if not b.is_zero else zero(var)
    if a.is_zero:
        return DifferentialOperator({0: b_new}, var)
    a_new = compose(a, phi, precision) * mul_inverse(derivative(phi), precision)
    return first_order(a_new, b_new)

