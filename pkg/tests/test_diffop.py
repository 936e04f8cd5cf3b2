"""
Tests for the diffop module.

This module contains tests for first-order differential operators, the
Kac-Schwarz operators in both charts and the monomial correction factor.
"""

import random
import pytest
from fractions import Fraction
from math import gcd

from pqfourier.config import DEFAULT_TERMS
from pqfourier.diffop import (
    DifferentialOperator,
    change_variable,
    conjugate_by_log_derivative,
    first_order,
    ks_dual_operator,
    ks_operator,
    op_compose,
    rho_log_derivative,
    verify_rho_identity,
)
from pqfourier.errors import (
    HigherOrderUnsupportedError,
    NonCoprimeDegreesError,
    VariableMismatchError,
    ZeroDerivativeError,
)
from pqfourier.models import Chart
from pqfourier.series import Poly, PuiseuxSeries, compose, constant, monomial, parse, zero


def z(exponent, coeff=1):
    """Exact monomial in z."""
    return monomial(exponent, coeff, "z")


class TestDifferentialOperator:
    """Test the operator value type."""

    def test_drops_zero_coefficients(self):
        """Test that zero coefficients vanish on construction."""
        op = DifferentialOperator({1: z(1), 0: zero()})
        assert op.coeffs.keys() == {1}
        assert op.order == 1
        assert op.coefficient(0).is_zero

    def test_negative_power_rejected(self):
        """Test validation of derivative powers."""
        with pytest.raises(ValueError, match="nonnegative"):
            DifferentialOperator({-1: z(1)})

    def test_relabels_coefficients(self):
        """Test that coefficients take the operator variable."""
        op = DifferentialOperator({0: monomial(1, 1, "w")}, "z")
        assert op.coefficient(0) == z(1)

    def test_first_order_parts(self):
        """Test splitting a*D + b."""
        a, b = first_order(z(2), z(0, 3)).first_order_parts()
        assert a == z(2)
        assert b == 3

    def test_higher_order_refused(self):
        """Test that second-order operators are refused where order 1 is needed."""
        op = DifferentialOperator({2: constant(1)})
        with pytest.raises(HigherOrderUnsupportedError, match="order at most 1"):
            op.first_order_parts()

    def test_text(self):
        """Test the printed form."""
        op = first_order(z(-1, Fraction(1, 2)), parse("z - 1/4*z^-2"))
        assert str(op) == "(1/2*z^-1)*D + (z - 1/4*z^-2)"
        assert str(DifferentialOperator({})) == "0"


class TestOpCompose:
    """Test operator products by the Leibniz rule."""

    def test_derivative_after_multiplication(self):
        """Test D o z = z D + 1."""
        D = DifferentialOperator({1: constant(1)})
        mult = DifferentialOperator({0: z(1)})
        assert op_compose(D, mult) == DifferentialOperator({1: z(1), 0: constant(1)})

    def test_euler_operator_squared(self):
        """Test (z D) o (z D) = z^2 D^2 + z D."""
        euler = DifferentialOperator({1: z(1)})
        assert op_compose(euler, euler) == DifferentialOperator({2: z(2), 1: z(1)})

    def test_multiplication_operators_commute(self):
        """Test products of order-zero operators."""
        a = DifferentialOperator({0: z(2)})
        b = DifferentialOperator({0: z(-1, 3)})
        assert op_compose(a, b) == op_compose(b, a) == DifferentialOperator({0: z(1, 3)})

    def test_variable_mismatch(self):
        """Test that operators in different variables do not compose."""
        a = DifferentialOperator({1: constant(1)}, "z")
        b = DifferentialOperator({1: constant(1, "w")}, "w")
        with pytest.raises(VariableMismatchError):
            op_compose(a, b)


class TestKacSchwarzOperator:
    """Test the Kac-Schwarz operator and its dual."""

    def test_quadratic_model_at_zero(self):
        """Test W = z^2, Q = z."""
        op = ks_operator(Poly({2: 1}), Poly({1: 1}))
        assert op == first_order(z(-1, Fraction(1, 2)), z(-2, Fraction(-1, 4)) + z(1))

    def test_quadratic_model_at_infinity(self):
        """Test the same model in w = 1/z, where D_z = -w^2 D_w."""
        op = ks_operator(Poly({2: 1}), Poly({1: 1}), Chart.INFINITY)
        assert op.var == "w"
        a, b = op.first_order_parts()
        assert a == monomial(3, Fraction(-1, 2), "w")
        assert b == monomial(-1, 1, "w") + monomial(2, Fraction(-1, 4), "w")

    def test_chart_accepts_value(self):
        """Test that the chart can be given by its value."""
        op = ks_operator(Poly({2: 1}), Poly({1: 1}), "infinity")
        assert op.var == "w"

    def test_nonmonomial_derivative_is_truncated(self):
        """Test that 1/W' is expanded to the requested precision."""
        W = parse("z^2 + z")
        a, _ = ks_operator(W, Poly({3: 1})).first_order_parts()
        assert a.precision == DEFAULT_TERMS
        assert a * parse("2*z + 1") == PuiseuxSeries({0: 1}, 1, DEFAULT_TERMS)
        a, _ = ks_operator(W, Poly({3: 1}), precision=10).first_order_parts()
        assert a.precision == 10

    def test_constant_w_refused(self):
        """Test that W' = 0 cannot be inverted."""
        with pytest.raises(ZeroDerivativeError):
            ks_operator(Poly({0: 1}), Poly({1: 1}))

    def test_dual_operator(self):
        """Test that the dual operator swaps roles and negates."""
        op = ks_dual_operator(Poly({1: 1}), Poly({2: 1}))
        assert op == first_order(z(-1, Fraction(1, 2)), z(-2, Fraction(-1, 4)) - z(1))

    def test_dual_needs_coprime_degrees(self):
        """Test the coprimality check on the dual operator."""
        with pytest.raises(NonCoprimeDegreesError, match="not coprime"):
            ks_dual_operator(Poly({2: 1}), Poly({4: 1}))


class TestCorrectionFactor:
    """Test conjugation by the monomial correction factor."""

    def test_log_derivative(self):
        """Test (p-1)/(2z) - p z^(p+q-1)."""
        assert rho_log_derivative(3, 2) == z(-1, 1) + z(4, -3)

    def test_conjugation_example(self):
        """Test W = z^2, Q = z with lambda = 1/(2z) - 2z^2."""
        op = ks_operator(Poly({2: 1}), Poly({1: 1}))
        lam = z(-1, Fraction(1, 2)) + z(2, -2)
        assert conjugate_by_log_derivative(op, lam) == DifferentialOperator(
            {1: z(-1, Fraction(1, 2))})

    def test_conjugating_order_zero_operator(self):
        """Test that an operator with no D part is unchanged."""
        op = DifferentialOperator({0: z(1)})
        assert conjugate_by_log_derivative(op, z(-1)) == op

    @pytest.mark.parametrize("p,q", [
        (p, q) for p in range(1, 8) for q in range(1, 8) if gcd(p, q) == 1
    ])
    def test_identity_grid(self, p, q):
        """Test the identity on every coprime pair up to 7."""
        assert verify_rho_identity(p, q)

    def test_identity_refuses_bad_degrees(self):
        """Test degree validation."""
        with pytest.raises(ValueError, match="positive"):
            verify_rho_identity(0, 1)
        with pytest.raises(NonCoprimeDegreesError):
            verify_rho_identity(2, 4)


class TestChangeVariable:
    """Test substitution of the operator variable."""

    def test_square_substitution(self):
        """Test z = x^2 in z D_z + 1, giving (x/2) D_x + 1."""
        op = first_order(z(1), constant(1))
        result = change_variable(op, monomial(2, 1, "x"))
        assert result.var == "x"
        assert result == first_order(monomial(1, Fraction(1, 2), "x"), constant(1, "x"))

    def test_reciprocal_substitution(self):
        """Test z = 1/w in D_z, giving -w^2 D_w."""
        op = DifferentialOperator({1: constant(1)})
        result = change_variable(op, monomial(-1, 1, "w"))
        assert result == DifferentialOperator({1: monomial(2, -1, "w")}, "w")

    def test_order_zero_operator(self):
        """Test substitution into a multiplication operator."""
        op = DifferentialOperator({0: z(3)})
        result = change_variable(op, monomial(Fraction(1, 3), 1, "x"))
        assert result == DifferentialOperator({0: monomial(1, 1, "x")}, "x")


class TestOperatorLaws:
    """Test algebraic laws of operators on random exact coefficients."""

    @pytest.fixture
    def rng(self):
        """Seeded generator so failures reproduce."""
        return random.Random(4242)

    @staticmethod
    def laurent(rng, var="z"):
        """A random exact Laurent polynomial with a nonzero leading term."""
        terms = {k: rng.randint(-2, 2) for k in range(-1, 3)}
        terms[rng.randint(-1, 2)] = rng.choice([1, -1])
        return PuiseuxSeries(terms, 1, None, var)

    def operator(self, rng, max_order=2):
        """A random operator of order at most max_order."""
        return DifferentialOperator({i: self.laurent(rng)
                                     for i in range(rng.randint(0, max_order) + 1)})

    def test_composition_is_associative(self, rng):
        """Test (a b) c = a (b c) for orders up to 2."""
        for _ in range(10):
            a, b, c = self.operator(rng), self.operator(rng), self.operator(rng)
            assert op_compose(op_compose(a, b), c) == op_compose(a, op_compose(b, c))

    def test_conjugation_round_trip(self, rng):
        """Test that D -> D + lam followed by D -> D - lam is the identity."""
        for _ in range(20):
            op = first_order(self.laurent(rng), self.laurent(rng))
            lam = self.laurent(rng)
            there = conjugate_by_log_derivative(op, lam)
            assert conjugate_by_log_derivative(there, -lam) == op

    @pytest.mark.parametrize("phi_exp,psi_exp", [
        (2, 3), (3, Fraction(1, 2)), (-1, 2), (2, -1), (Fraction(1, 3), 3),
    ])
    def test_change_variable_chain_rule(self, rng, phi_exp, psi_exp):
        """Test that substituting phi then psi equals substituting phi(psi)."""
        phi = monomial(phi_exp, 1, "x")
        psi = monomial(psi_exp, 1, "y")
        for _ in range(5):
            op = first_order(self.laurent(rng), self.laurent(rng))
            stepwise = change_variable(change_variable(op, phi), psi)
            assert stepwise == change_variable(op, compose(phi, psi))
