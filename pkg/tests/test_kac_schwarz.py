"""
Tests for the kac_schwarz module.

This module contains tests for normalized Kac-Schwarz connections and the
W-Q duality check.
"""

import pytest
from fractions import Fraction
from math import gcd

from pqfourier.connection import factor, iso_equal, monomial_connection, slope, to_factor
from pqfourier.errors import EvenPError, NonCoprimeDegreesError, RootNotInFieldError
from pqfourier.kac_schwarz import (
    check_inverse_profile,
    check_wq_duality,
    inverse_coordinate,
    ks_connection,
    ks_dual_connection,
    monomial_dual_factor,
)
from pqfourier.series import Poly, PuiseuxSeries, parse


def xi(terms, r=1):
    """Exact series in 1/x."""
    return PuiseuxSeries(terms, r, None, "ξ")


def power(n, coeff=1):
    """The polynomial coeff * z^n."""
    return Poly({n: coeff})


class TestInverseCoordinate:
    """Test w = 1/z written in xi = 1/x."""

    def test_monomial(self):
        """Test x = z^3, so w = xi^(1/3)."""
        assert inverse_coordinate(power(3), 8) == xi({1: 1}, 3)

    def test_non_monic_square(self):
        """Test x = 4 z^2, so w = 2 xi^(1/2)."""
        assert inverse_coordinate(power(2, 4), 8) == xi({1: 2}, 2)

    def test_root_not_in_field(self):
        """Test that x = 2 z^3 needs a cube root of 2."""
        with pytest.raises(RootNotInFieldError):
            inverse_coordinate(power(3, 2), 8)


class TestKsConnection:
    """Test the normalized Kac-Schwarz connection."""

    def test_cubic_model(self):
        """Test (z^3, z^2) giving -1/(3x) + x^(2/3)."""
        c = ks_connection(power(3), power(2))
        assert c.f_over_x == xi({3: Fraction(-1, 3), -2: 1}, 3)
        assert str(c) == "d/dx + (x^(2/3) - 1/3*x^-1)"

    def test_quadratic_model(self):
        """Test (z^2, z^3) giving -1/(4x) + x^(3/2)."""
        c = ks_connection(power(2), power(3))
        assert c.f_over_x == xi({2: Fraction(-1, 4), -3: 1}, 2)

    @pytest.mark.parametrize("p,q", [(1, 2), (3, 4), (5, 2), (4, 7)])
    def test_monomial_display(self, p, q):
        """Test term-by-term agreement with -(p-1)/(2p)/x + x^(q/p)."""
        assert ks_connection(power(p), power(q)).f_over_x == monomial_connection(p, q).f_over_x

    def test_general_polynomial(self):
        """Test (z^3 + z, z^2) up to its canonical class."""
        c = ks_connection(parse("z^3 + z"), power(2))
        e = to_factor(c)
        assert c.ramification == 3
        assert e.ramification == 3
        assert slope(e) == Fraction(5, 3)

    def test_explicit_precision(self):
        """Test that a larger starting target gives the same class."""
        W, Q = parse("z^3 + z"), parse("z^2 + 1")
        assert to_factor(ks_connection(W, Q, 32)) == to_factor(ks_connection(W, Q))

    def test_non_coprime(self):
        """Test degree validation."""
        with pytest.raises(NonCoprimeDegreesError):
            ks_connection(power(2), power(4))

    def test_constant_polynomial(self):
        """Test that degree 0 is refused."""
        with pytest.raises(ValueError, match="degree at least 1"):
            ks_connection(power(0), power(2))


class TestKsDualConnection:
    """Test the dual connection."""

    def test_cubic_model(self):
        """Test (z^3, z^2) giving -1/(4x) - x^(3/2)."""
        c = ks_dual_connection(power(3), power(2))
        assert c.f_over_x == xi({2: Fraction(-1, 4), -3: -1}, 2)

    def test_quadratic_model(self):
        """Test (z^2, z^3) giving -1/(3x) - x^(2/3)."""
        c = ks_dual_connection(power(2), power(3))
        assert c.f_over_x == xi({3: Fraction(-1, 3), -2: -1}, 3)
        assert to_factor(c) == factor("ζ^(-5/3)")

    def test_non_coprime(self):
        """Test degree validation."""
        with pytest.raises(NonCoprimeDegreesError, match="not coprime"):
            ks_dual_connection(power(2), power(4))

    @pytest.mark.parametrize("p,q", [(1, 2), (3, 2), (5, 3), (7, 4), (9, 2)])
    def test_monomial_dual_factor(self, p, q):
        """Test that the residue is gauged away for odd p."""
        e = monomial_dual_factor(p, q)
        expected = factor(f"ζ^(-{p + q}/{p})")
        assert iso_equal(e, expected)[0]


class TestWQDuality:
    """Test the W-Q duality check."""

    def test_cubic_model(self):
        """Test (z^3, z^2) with both sides in canonical form."""
        report = check_wq_duality(power(3), power(2))
        assert report.holds
        assert report.twist == 0
        assert report.lhs.components[0].factor == factor("-ζ^(-5/2) + 1/4")
        assert report.lhs == report.rhs
        assert report.notes == []

    @pytest.mark.parametrize("w,q", [
        ("z^3 + z", "z^2"),
        ("z^3 + z^2 + z", "z^2 + 1"),
        ("z^5 + z", "z^2"),
        ("z^3", "z^4 + z"),
    ])
    def test_general_polynomial(self, w, q):
        """Test models with lower-order terms."""
        assert check_wq_duality(parse(w), parse(q)).holds

    @pytest.mark.parametrize("p,q", [
        (p, q) for p in (1, 3, 5, 7, 9) for q in range(1, 10) if gcd(p, q) == 1
    ])
    def test_monomial_grid(self, p, q):
        """Test every coprime monomial pair with odd p in the grid."""
        assert check_wq_duality(power(p), power(q)).holds

    def test_even_degree_refused(self):
        """Test that even deg W needs force."""
        with pytest.raises(EvenPError, match="even"):
            check_wq_duality(power(2), power(3))

    def test_even_degree_forced(self):
        """Test that forcing (z^2, z^3) computes both sides and records a note."""
        report = check_wq_duality(power(2), power(3), force=True)
        assert report.holds
        assert report.twist is not None
        assert any("even" in note for note in report.notes)
        assert report.lhs.components[0].factor.ramification == 3

    def test_non_monic_model(self):
        """Test (z^3, 4 z^2), which only needs square roots of 4."""
        report = check_wq_duality(power(3), power(2, 4))
        assert report.holds
        assert "non-monic model" in report.notes
        assert report.rhs.components[0].factor == factor("-1/8*ζ^(-5/2) + 1/4")

    def test_report_dict(self):
        """Test the JSON-ready report."""
        data = check_wq_duality(power(3), power(2)).to_dict()
        assert data["holds"] is True
        assert data["twists"] == [0]
        assert data["lhs"]["components"][0]["terms"][0] == {"exp": "-5/2", "coeff": "-1"}
        assert data["precision"] >= 12

    def test_report_precision_follows_start(self):
        """Test that the report carries the target actually used."""
        report = check_wq_duality(power(3), power(2), precision=16)
        assert report.precision >= 16
        assert report.holds


class TestInverseProfile:
    """Test that the inverted dual exponent is W composed with Q^(-1)."""

    def test_monomial(self):
        """Test (z^3, z^2)."""
        assert check_inverse_profile(power(3), power(2))

    def test_general_polynomial(self):
        """Test (z^3 + z, z^2)."""
        assert check_inverse_profile(parse("z^3 + z"), power(2))

