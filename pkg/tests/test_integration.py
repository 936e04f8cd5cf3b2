"""
Integration tests for pqfourier.

This module checks that the scalar and matrix routes agree: Kac-Schwarz
connections, their transforms and the companion connections describe the
same formal objects.
"""

import pytest
from pqfourier import create_cli
from pqfourier.companion import nabla, nabla_hat, object_of
from pqfourier.connection import LTObject, iso_equal, objects_iso, to_factor
from pqfourier.fourier import fourier_connection_at_infinity, fourier_factor, fourier_object
from pqfourier.kac_schwarz import check_wq_duality, ks_connection, ks_dual_connection
from pqfourier.series import Poly


def power(n):
    return Poly({n: 1})


class TestSystemIntegration:
    """Test the full (3, 2) chain."""

    @pytest.fixture
    def model(self):
        """The model W = z^3, Q = z^2."""
        return power(3), power(2)

    def test_scalar_route(self, model):
        """Transform of the dual connection of (Q, W) is the connection of (Q, W)."""
        W, Q = model
        e = to_factor(ks_dual_connection(Q, W))
        assert iso_equal(fourier_factor(e), to_factor(ks_connection(Q, W)))[0]

    def test_connection_route(self, model):
        """Transforming the connection itself gives the same class."""
        W, Q = model
        c = ks_connection(W, Q)
        assert iso_equal(to_factor(fourier_connection_at_infinity(c)),
                         fourier_factor(to_factor(c)))[0]

    def test_matrix_route(self, model):
        """The companion connection carries the scalar factor."""
        W, Q = model
        scalar = LTObject.of(to_factor(ks_connection(W, Q)))
        assert objects_iso(object_of(nabla(3, 2)), scalar)[0]

    def test_matrix_duality(self):
        """Transform of nabla_hat(2,3) is the object of nabla(2,3)."""
        lhs = fourier_object(object_of(nabla_hat(2, 3)))
        rhs = object_of(nabla(2, 3))
        assert objects_iso(lhs, rhs)[0]

    def test_wq_report_agrees_with_matrix_side(self, model):
        """The W-Q report matches the companion side."""
        report = check_wq_duality(*model)
        assert report.holds
        assert objects_iso(report.rhs, object_of(nabla(2, 3)))[0]

    @pytest.mark.parametrize("p,q", [
        (1, 2), (1, 3), (3, 1), (3, 2), (3, 4), (5, 2)
    ])
    def test_routes_agree_on_grid(self, p, q):
        """Scalar and matrix sides agree for small monomial models."""
        scalar = LTObject.of(to_factor(ks_connection(power(p), power(q))))
        assert objects_iso(object_of(nabla(p, q)), scalar)[0]


class TestFactory:
    """Test the package-level factory."""

    def test_create_cli_defaults(self):
        """Test default settings through the factory."""
        pq_cli = create_cli()
        assert pq_cli.settings.precision is None
        assert not pq_cli.settings.json_output
