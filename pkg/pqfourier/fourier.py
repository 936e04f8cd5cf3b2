"""
Local Fourier transform between slopes above one at infinity.

E_{f,p} of slope s/p > 1 goes to E_{g,s-p}: the dual coordinate satisfies
f(zeta) = 1/(zeta * zeta_hat) and g(zeta_hat) = -f(zeta(zeta_hat)) + s/(2(s-p)).
"""

import logging
from fractions import Fraction
from typing import Optional, Tuple

from .config import adaptive_targets
from .connection import (
    FACTOR_VAR,
    ConnectionAtInfinity,
    ExponentialFactor,
    LTComponent,
    LTObject,
    canonicalize,
    is_irreducible,
    slope,
    to_factor,
)
from .errors import (
    JordanNotSupportedError,
    NotIrreducibleError,
    PrecisionExhaustedError,
    SlopeNotGreaterThanOneError,
)
from .series import PuiseuxSeries, compose, comp_inverse, monomial, mul_inverse

logger = logging.getLogger(__name__)

# zeta = root^p, so f has integer exponents in root.
ROOT_VAR = "w"


def _admissible(e: ExponentialFactor) -> Tuple[int, int]:
    """(s, p) for a factor the transform accepts."""
    if not is_irreducible(e):
        raise NotIrreducibleError(f"{e} is not irreducible")
    sl = slope(e)
    if sl <= 1:
        raise SlopeNotGreaterThanOneError(f"Slope {sl} of {e} is not greater than 1")
    p = e.ramification
    return int(p * sl), p


def residue(s: int, p: int) -> Fraction:
    """The constant s/(2(s-p)) added by the transform."""
    return Fraction(s, 2 * (s - p))


def fourier_factor(e: ExponentialFactor, precision: Optional[int] = None) -> ExponentialFactor:
    """
    Transform an irreducible factor of slope above one.

    Args:
        e: Factor E_{f,p}
        precision: Initial inversion target, doubled until the result is determined

    Returns:
        Canonical factor of ramification s - p and slope s/(s - p)
    """
    return transform_factor(e, precision)[0]


def transform_factor(e: ExponentialFactor,
                     precision: Optional[int] = None) -> Tuple[ExponentialFactor, int]:
    """
    fourier_factor together with the inversion target that determined it.

    The inversion runs in root = zeta^(1/p), where f has integer exponents,
    so the only root extracted is the one comp_inverse takes for zeta_hat.
    Any choice of that root changes the result by a twist only.
    """
    if not is_irreducible(e):
        raise NotIrreducibleError(f"{e} is not irreducible")
    e = canonicalize(e)
    s, p = _admissible(e)
    f_root = PuiseuxSeries(e.f.terms, 1, None, ROOT_VAR)
    zeta_f = monomial(p, 1, ROOT_VAR) * f_root
    start = precision or s + p + 4
    for target in adaptive_targets(start):
        logger.debug("fourier transform of %s at target %d", e, target)
        u = mul_inverse(zeta_f, target)
        root_of_hat = comp_inverse(u, target, var=FACTOR_VAR)
        g = -compose(f_root, root_of_hat, target) + residue(s, p)
        if g.truncation is None or g.truncation > 0:
            result = canonicalize(ExponentialFactor(g))
            logger.debug("fourier transform of %s is %s", e, result)
            return result, target
    raise PrecisionExhaustedError(f"Fourier transform of {e} not determined within the target cap")


def fourier_connection_at_infinity(c: ConnectionAtInfinity, residue_sign: int = 1,
                                   precision: Optional[int] = None) -> ConnectionAtInfinity:
    """
    The transformed connection d/dx_hat + s/(2(s-p))/x_hat + (-F(x)/x)^(-1)(x_hat).

    residue_sign = -1 picks the other residue sign; both give the same class.
    """
    if residue_sign not in (1, -1):
        raise ValueError("residue_sign must be 1 or -1")
    s, p = _admissible(to_factor(c))
    xi_var = c.f_over_x.var
    minus_f = -c.f_over_x
    constant_part = monomial(1, residue(s, p) * residue_sign, xi_var)
    start = precision or s + p + 4
    for target in adaptive_targets(start):
        logger.debug("connection transform at target %d", target)
        u = mul_inverse(minus_f, target)
        xi_of_hat = comp_inverse(u, target)
        x_of_hat = mul_inverse(xi_of_hat, target)
        out = x_of_hat + constant_part
        if out.precision is None or out.precision > 1:
            return ConnectionAtInfinity(out, c.var)
    raise PrecisionExhaustedError("Transformed connection not determined within the target cap")


def fourier_object(o: LTObject, precision: Optional[int] = None) -> LTObject:
    """Componentwise transform of an object without Jordan blocks."""
    for component in o.components:
        if component.jordan > 1:
            raise JordanNotSupportedError(
                f"Component {component} has Jordan multiplicity {component.jordan}")
    return LTObject(tuple(LTComponent(fourier_factor(c.factor, precision))
                          for c in o.components))
