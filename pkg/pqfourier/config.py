"""
Precision policy and run settings.
"""

from dataclasses import dataclass
from typing import Iterator, Optional

from .models import Convention

# Terms produced when an exact input expands into an infinite series.
DEFAULT_TERMS = 24

# Hard cap for adaptive precision targets.
MAX_TARGET = 2 ** 10

# Smallest initial target accepted from the command line.
MIN_PRECISION = 8


def adaptive_targets(start: int, cap: int = MAX_TARGET) -> Iterator[int]:
    """Yield start, 2*start, 4*start, ... while not above cap."""
    if start < 1:
        raise ValueError("Precision target must be positive")
    target = start
    while target <= cap:
        yield target
        target *= 2


@dataclass(frozen=True)
class Settings:
    """Options shared by every CLI subcommand."""

    precision: Optional[int] = None
    convention: Convention = Convention.DUAL
    json_output: bool = False

    def __post_init__(self):
        """Validate settings after creation."""
        if self.precision is not None and self.precision < MIN_PRECISION:
            raise ValueError(f"Precision must be at least {MIN_PRECISION}")
        if not isinstance(self.convention, Convention):
            object.__setattr__(self, "convention", Convention(self.convention))
