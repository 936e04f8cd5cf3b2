"""
Exceptions for the pqfourier engine.

Every domain error is a ValueError so callers that validate input the usual
way keep working.
"""


class PqFourierError(ValueError):
    """Base class for all engine errors."""


class VariableMismatchError(PqFourierError):
    """Two series or operators use different variables."""


class ZeroLeadingTermError(PqFourierError):
    """A series with no nonzero leading term was inverted."""


class UnknownOrderError(PqFourierError):
    """The order of a series cannot be read off its known terms."""


class IllFormedCompositionError(PqFourierError):
    """A substitution would need infinitely many terms at one exponent."""


class RootNotInFieldError(PqFourierError):
    """A required root is not rational times a root of unity."""


class ZeroOrderError(PqFourierError):
    """Compositional inverse of a series of order zero."""


class PrecisionExhaustedError(PqFourierError):
    """The requested terms are not determined by the available precision."""


class ParseError(PqFourierError):
    """Text does not match the series grammar."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class ZeroDerivativeError(PqFourierError):
    """A constant polynomial was used where W' or Q' must be inverted."""


class NonCoprimeDegreesError(PqFourierError):
    """The degrees p and q are not coprime."""


class HigherOrderUnsupportedError(PqFourierError):
    """Only operators of order at most one are supported here."""


class NotIrreducibleError(PqFourierError):
    """The exponential factor is presented at a non-minimal ramification."""


class NotAnOrbitError(PqFourierError):
    """The entries do not form a single twist orbit."""


class SlopeNotGreaterThanOneError(PqFourierError):
    """The local Fourier transform needs slope greater than one."""


class JordanNotSupportedError(PqFourierError):
    """Components with a Jordan block of size above one are rejected."""


class EvenPError(PqFourierError):
    """The duality statement is only asserted for odd p."""


class EigenvaluesNotDistinctError(PqFourierError):
    """The leading coefficient matrix has a repeated eigenvalue."""


class ResonantResidueError(PqFourierError):
    """Residue eigenvalues differ by an integer where the gauge has an obstruction."""
