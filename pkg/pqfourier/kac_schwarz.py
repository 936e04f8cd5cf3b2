"""
Kac-Schwarz connections of a (W, Q) model and the W-Q duality check.

The operator is written in w = 1/z, the coordinate is changed to xi = 1/x
with x = W(z) (or Q(z) for the dual), and the derivative coefficient is
normalized so the result reads d/dx + F(x)/x.
"""

import logging
from typing import Callable, Optional, Tuple

from .config import adaptive_targets
from .connection import ConnectionAtInfinity, ExponentialFactor, LTObject, iso_equal, to_factor
from .diffop import DifferentialOperator, change_variable, ks_dual_operator, ks_operator
from .errors import EvenPError, PrecisionExhaustedError
from .fourier import transform_factor
from .models import Chart, DualityReport, ModelPair
from .series import Poly, PuiseuxSeries, compose, comp_inverse, monomial, mul_inverse

logger = logging.getLogger(__name__)

XI = "ξ"

# F/x must be known past this exponent of 1/x.
_REQUIRED_PRECISION = 2


def _w_chart(X: Poly) -> PuiseuxSeries:
    """X(1/w) as an exact Laurent polynomial in w."""
    return compose(X, monomial(-1, 1, "w"))


def inverse_coordinate(X: Poly, target: int) -> PuiseuxSeries:
    """w = 1/z as a series in xi = 1/x, where x = X(z) near infinity."""
    return comp_inverse(mul_inverse(_w_chart(X), target), target, var=XI)


def _normalize(build: Callable[[int], DifferentialOperator], X: Poly, start: int,
               precision: Optional[int]) -> Tuple[ConnectionAtInfinity, int]:
    """The normalized connection and the target that determined it."""
    for target in adaptive_targets(precision or start):
        op = build(target)
        phi = inverse_coordinate(X, target)
        a, b = change_variable(op, phi, target).first_order_parts()
        # D_xi = -xi^(-2) D_x, so F/x = b * (-xi^2) / a.
        f_over_x = b * monomial(2, -1, XI) * mul_inverse(a, target)
        logger.debug("normalized connection at target %d: %s", target, f_over_x)
        if f_over_x.precision is None or f_over_x.precision > _REQUIRED_PRECISION:
            return ConnectionAtInfinity(f_over_x), target
    raise PrecisionExhaustedError("Normalized connection not determined within the target cap")


def ks_connection(W: Poly, Q: Poly, precision: Optional[int] = None) -> ConnectionAtInfinity:
    """
    The Kac-Schwarz connection of the (W, Q) model in x = W(z).

    Args:
        W: Polynomial of degree p
        Q: Polynomial of degree q, coprime to p
        precision: Initial target for the coordinate inversion

    Returns:
        Connection at infinity of ramification p
    """
    return _ks_connection(W, Q, precision)[0]


def _ks_connection(W: Poly, Q: Poly,
                   precision: Optional[int]) -> Tuple[ConnectionAtInfinity, int]:
    pair = ModelPair(W, Q)
    return _normalize(lambda target: ks_operator(W, Q, Chart.INFINITY, target),
                      W, pair.p + pair.q + 4, precision)


def ks_dual_connection(W: Poly, Q: Poly,
                       precision: Optional[int] = None) -> ConnectionAtInfinity:
    """The dual Kac-Schwarz connection in x = Q(z), of ramification q."""
    return _ks_dual_connection(W, Q, precision)[0]


def _ks_dual_connection(W: Poly, Q: Poly,
                        precision: Optional[int]) -> Tuple[ConnectionAtInfinity, int]:
    pair = ModelPair(W, Q)
    return _normalize(lambda target: ks_dual_operator(W, Q, Chart.INFINITY, target),
                      Q, pair.p + pair.q + 4, precision)


def check_wq_duality(W: Poly, Q: Poly, force: bool = False,
                     precision: Optional[int] = None) -> DualityReport:
    """
    Compare the Fourier transform of the dual connection of (Q, W) with the
    connection of (Q, W).

    Requires deg W odd unless force is set. The report carries the largest
    target used by the normalizations and the transform.
    """
    pair = ModelPair(W, Q)
    notes = []
    if pair.p % 2 == 0:
        if not force:
            raise EvenPError(f"deg W = {pair.p} is even; the duality is stated for odd degree")
        notes.append(f"deg W = {pair.p} is even; computed without the odd-degree hypothesis")
    if not pair.is_monic:
        notes.append("non-monic model")
    dual, dual_target = _ks_dual_connection(Q, W, precision)
    lhs, transform_target = transform_factor(to_factor(dual), precision)
    connection, target = _ks_connection(Q, W, precision)
    rhs = to_factor(connection)
    holds, k = iso_equal(lhs, rhs)
    logger.info("W-Q duality for (%s, %s): %s", W, Q, holds)
    return DualityReport(
        holds=holds,
        lhs=LTObject.of(lhs),
        rhs=LTObject.of(rhs),
        twists=(k,) if holds else (),
        precision=max(dual_target, transform_target, target),
        notes=notes,
    )


def check_inverse_profile(W: Poly, Q: Poly, precision: Optional[int] = None) -> bool:
    """
    Check that (-F/x)^(-1) of the dual connection of (Q, W) is W o Q^(-1)
    up to O(1/x_hat).
    """
    pair = ModelPair(W, Q)
    c = ks_dual_connection(Q, W, precision)
    for target in adaptive_targets(precision or pair.p + pair.q + 4):
        u = mul_inverse(-c.f_over_x, target)
        h = mul_inverse(comp_inverse(u, target), target)
        profile = compose(_w_chart(W), inverse_coordinate(Q, target), target)
        diff = h - profile
        if diff.precision is None or diff.precision > 1:
            holds = all(e >= 1 for e in diff.exponents())
            logger.debug("inverse profile difference %s", diff)
            return holds
    raise PrecisionExhaustedError("Inverse profile not determined within the target cap")


def monomial_dual_factor(p: int, q: int) -> ExponentialFactor:
    """Factor of the dual connection of the (z^q, z^p) model."""
    return to_factor(ks_dual_connection(Poly({q: 1}), Poly({p: 1})))

