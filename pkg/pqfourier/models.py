"""
Shared data models for the pqfourier engine.

This module contains the enums and report structures used by several modules.
"""

from dataclasses import dataclass, field
from enum import Enum
from math import gcd
from typing import TYPE_CHECKING, Any, Dict, List, Optional, Tuple

if TYPE_CHECKING:
    from .connection import LTObject
    from .series import Poly


class Chart(Enum):
    """Where a Kac-Schwarz operator is expanded."""
    ZERO = "zero"
    INFINITY = "infinity"


class Convention(Enum):
    """How diagonal exponents of a matrix connection are read."""
    DUAL = "dual"
    SECTION = "section"

    @property
    def sign(self) -> int:
        """Sign applied to eta when forming F/x."""
        return 1 if self is Convention.DUAL else -1


@dataclass(frozen=True)
class ModelPair:
    """A pair of polynomials (W, Q) of coprime degrees."""

    W: "Poly"
    Q: "Poly"

    def __post_init__(self):
        """Validate the pair."""
        from .errors import NonCoprimeDegreesError

        if self.p < 1 or self.q < 1:
            raise ValueError("W and Q must have degree at least 1")
        if gcd(self.p, self.q) != 1:
            raise NonCoprimeDegreesError(
                f"Degrees {self.p} and {self.q} are not coprime")

    @property
    def p(self) -> int:
        return self.W.degree

    @property
    def q(self) -> int:
        return self.Q.degree

    @property
    def is_monic(self) -> bool:
        return self.W.is_monic and self.Q.is_monic

    def swapped(self) -> "ModelPair":
        """The (Q, W) model."""
        return ModelPair(W=self.Q, Q=self.W)


@dataclass(frozen=True)
class DualityReport:
    """Verdict of a duality check with both canonical sides."""

    holds: bool
    lhs: "LTObject"
    rhs: "LTObject"
    twists: Tuple[int, ...] = ()
    precision: Optional[int] = None
    notes: List[str] = field(default_factory=list)

    @property
    def twist(self) -> Optional[int]:
        """Twist index of a single matched pair, if any."""
        if self.holds and len(self.twists) == 1:
            return self.twists[0]
        return None

    def to_dict(self) -> Dict[str, Any]:
        """Deterministic JSON-ready form."""
        return {
            "holds": self.holds,
            "lhs": self.lhs.to_dict(),
            "rhs": self.rhs.to_dict(),
            "twists": list(self.twists),
            "precision": self.precision,
            "notes": list(self.notes),
        }
