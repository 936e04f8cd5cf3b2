"""
pqfourier

Exact local Fourier transforms of formal connections at infinity, with
executable checks of the W-Q and p-q dualities for Kac-Schwarz models.
"""

__version__ = "0.1.0"
__author__ = "Developer"
__email__ = "dev@example.com"

from .cyclotomic import Cyclotomic
from .series import PuiseuxSeries, Poly, parse, format_series
from .diffop import DifferentialOperator, ks_operator, ks_dual_operator, verify_rho_identity
from .connection import (
    ConnectionAtInfinity,
    ExponentialFactor,
    LTComponent,
    LTObject,
    canonicalize,
    iso_equal,
    to_factor,
)
from .fourier import fourier_factor, fourier_connection_at_infinity, fourier_object
from .kac_schwarz import check_wq_duality, ks_connection, ks_dual_connection
from .companion import MatrixConnection, check_pq_duality, nabla, nabla_hat, object_of
from .config import Settings
from .models import Convention, DualityReport, ModelPair
from .errors import PqFourierError
from .cli import PqFourierCLI, main


def create_cli(precision: int = None, convention: str = "dual",
               json_output: bool = False) -> PqFourierCLI:
    """
    Create a PqFourierCLI instance with settings.

    Args:
        precision: Initial precision target
        convention: Reading of matrix-connection exponents
        json_output: Print every report as JSON

    Returns:
        PqFourierCLI instance
    """
    settings = Settings(precision=precision, convention=Convention(convention),
                        json_output=json_output)
    return PqFourierCLI(settings)


__all__ = [
    "Cyclotomic",
    "PuiseuxSeries",
    "Poly",
    "parse",
    "format_series",
    "DifferentialOperator",
    "ks_operator",
    "ks_dual_operator",
    "verify_rho_identity",
    "ConnectionAtInfinity",
    "ExponentialFactor",
    "LTComponent",
    "LTObject",
    "canonicalize",
    "iso_equal",
    "to_factor",
    "fourier_factor",
    "fourier_connection_at_infinity",
    "fourier_object",
    "check_wq_duality",
    "ks_connection",
    "ks_dual_connection",
    "MatrixConnection",
    "check_pq_duality",
    "nabla",
    "nabla_hat",
    "object_of",
    "Settings",
    "Convention",
    "DualityReport",
    "ModelPair",
    "PqFourierError",
    "PqFourierCLI",
    "create_cli",
    "main",
]
