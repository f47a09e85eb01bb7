"""Tests for sparse polynomials, splittings and the expression parser."""

from fractions import Fraction

import pytest

from ekldeg.exceptions import ContextMismatchError, ParseError
from ekldeg.extensions import SimpleExtension
from ekldeg.fields import FieldContext
from ekldeg.poly import (
    GLOBAL,
    LOCAL,
    Monomial,
    Polynomial,
    determinant,
    evaluate,
    gradient,
    hessian_det,
    jacobian_det,
    linear_splitting,
    parse_polynomial,
    translate,
)

QQ = FieldContext.rationals()
XY = ["x1", "x2"]


def p(text, variables=XY, context=QQ):
    return parse_polynomial(text, context, variables)


class TestMonomialOrders:
    """Test the local and global degree reverse lexicographic orders."""

    def test_local_order_puts_one_first(self):
        """Test that lower degree is larger in the local order."""
        monomials = [Monomial((2, 0)), Monomial((0, 0)), Monomial((0, 1)), Monomial((1, 0))]
        assert LOCAL.sorted(monomials) == [(0, 0), (1, 0), (0, 1), (2, 0)]

    def test_global_order_puts_high_degree_first(self):
        """Test that higher degree is larger in the global order."""
        monomials = [Monomial((0, 0)), Monomial((1, 1)), Monomial((0, 2)), Monomial((2, 0))]
        assert GLOBAL.sorted(monomials) == [(2, 0), (1, 1), (0, 2), (0, 0)]

    def test_leading_monomial_depends_on_order(self):
        """Test leading monomials of x1 + x2^3."""
        f = p("x1 + x2^3")
        assert f.leading_monomial(LOCAL) == (1, 0)
        assert f.leading_monomial(GLOBAL) == (0, 3)
        assert f.ecart(LOCAL) == 2

    def test_monomial_arithmetic(self):
        """Test divisibility, quotients and lcms."""
        a, b = Monomial((2, 1)), Monomial((1, 3))
        assert a.lcm(b) == (2, 3)
        assert Monomial((1, 0)).divides(a)
        assert a.quotient(Monomial((1, 1))) == (1, 0)
        assert Monomial((2, 0)).is_coprime(Monomial((0, 4)))
        assert Monomial((0, 4)).pure_power_index() == 1


class TestPolynomialArithmetic:
    """Test ring operations and printing."""

    def test_parse_and_print(self):
        """Test that (x-1)(x+1) prints expanded."""
        assert str(p("(x-1)*(x+1)", ["x"])) == "x^2 - 1"

    def test_rational_coefficients(self):
        """Test printing of rational coefficients."""
        assert str(p("x/2 - 3", ["x"])) == "1/2*x - 3"

    def test_addition_with_zero(self):
        """Test that adding zero changes nothing."""
        f = p("x1^2 + 3*x2")
        assert f + Polynomial.zero(QQ, XY) == f

    def test_frobenius_in_characteristic_two(self):
        """Test (x + y)^2 = x^2 + y^2 over F2."""
        F2 = FieldContext.prime_field(2)
        f = p("(x + y)^2", ["x", "y"], F2)
        assert f == p("x^2 + y^2", ["x", "y"], F2)

    def test_coefficients_reduced_mod_p(self):
        """Test that 8*x is x over F7."""
        F7 = FieldContext.prime_field(7)
        assert p("8*x", ["x"], F7) == p("x", ["x"], F7)

    def test_constant_comparison(self):
        """Test comparison against plain numbers."""
        assert p("3") == 3
        assert p("1/2") == Fraction(1, 2)
        assert p("x1") != 0

    def test_degrees(self):
        """Test total and low degree."""
        f = p("x1^3*x2 + x1")
        assert f.total_degree == 4
        assert f.low_degree == 1
        assert Polynomial.zero(QQ, XY).total_degree == -1

    def test_truncate(self):
        """Test dropping terms above a degree."""
        assert p("1 + x1 + x1*x2 + x2^3").truncate(1) == p("1 + x1")

    def test_different_rings_rejected(self):
        """Test that polynomials in different variables do not mix."""
        with pytest.raises(ContextMismatchError):
            p("x1") + p("y", ["y"])


class TestDerivativesAndDeterminants:
    """Test gradients, Jacobians and Hessians."""

    def test_gradient(self):
        """Test the gradient of the cusp."""
        assert [str(g) for g in gradient(p("x1^2 + x2^3"))] == ["2*x1", "3*x2^2"]

    def test_gradient_in_positive_characteristic(self):
        """Test that d/dx x^5 vanishes over F5."""
        F5 = FieldContext.prime_field(5)
        assert gradient(p("x^5", ["x"], F5))[0].is_zero()

    def test_jacobian_det(self):
        """Test Jacobian determinants of small systems."""
        assert jacobian_det([p("2*x1"), p("3*x2^2")]) == p("12*x2")
        assert jacobian_det([p("x1"), p("x2")]) == 1
        assert jacobian_det([p("x2"), p("x1")]) == -1

    def test_hessian_det(self):
        """Test the Hessian determinant of a sum of squares."""
        assert hessian_det(p("x1^2 + x2^2")) == 4
        assert hessian_det(p("x1^2 + 2*x1*x2 + 3*x2^2")) == 8

    def test_bareiss_on_five_variables(self):
        """Test the fraction-free determinant on a 5x5 Jacobian."""
        names = ["x1", "x2", "x3", "x4", "x5"]
        f = [p(text, names) for text in ("x1^2", "x2", "x3", "x4", "x5 + x1")]
        assert jacobian_det(f) == p("2*x1", names)

    def test_bareiss_diagonal(self):
        """Test the determinant of a diagonal polynomial matrix."""
        names = ["x1", "x2", "x3", "x4", "x5"]
        zero = Polynomial.zero(QQ, names)
        rows = [
            [Polynomial.variable(QQ, names, i) if i == j else zero for j in range(5)]
            for i in range(5)
        ]
        assert determinant(rows) == p("x1*x2*x3*x4*x5", names)

    def test_determinant_in_positive_characteristic(self):
        """Test that the determinant is reduced mod p."""
        F5 = FieldContext.prime_field(5)
        f = [p("3*x1^2", context=F5), p("4*x2^2", context=F5)]
        assert jacobian_det(f) == p("3*x1*x2", context=F5)


class TestLinearSplitting:
    """Test the telescoping splitting f_i = sum a_ij x_j."""

    def test_each_term_goes_to_its_last_variable(self):
        """Test the splitting of (2x1, 3x2^2)."""
        rows = linear_splitting([p("2*x1"), p("3*x2^2")])
        assert [[str(a) for a in row] for row in rows] == [["2", "0"], ["0", "3*x2"]]

    def test_mixed_term(self):
        """Test that x1*x2 goes to the x2 column by default."""
        rows = linear_splitting([p("x1*x2"), p("x1")])
        assert [[str(a) for a in row] for row in rows] == [["0", "x1"], ["1", "0"]]

    def test_reverse_order(self):
        """Test that the reversed splitting sends x1*x2 to the x1 column."""
        rows = linear_splitting([p("x1*x2"), p("x1")], reverse=True)
        assert [[str(a) for a in row] for row in rows] == [["x2", "0"], ["1", "0"]]

    def test_splitting_reconstructs_f(self):
        """Test sum a_ij x_j = f_i - f_i(0)."""
        f = [p("1 + x1^2*x2 + 3*x2 - x1"), p("x1*x2^2 + x2^5")]
        x = [Polynomial.variable(QQ, XY, i) for i in range(2)]
        for fi, row in zip(f, linear_splitting(f), strict=True):
            total = Polynomial.zero(QQ, XY)
            for a, xj in zip(row, x, strict=True):
                total = total + a * xj
            assert total == fi - fi.constant_term


class TestEvaluateAndTranslate:
    """Test evaluation at points and moving points to the origin."""

    def test_evaluate_rational(self):
        """Test f(1, 2) for a rational point."""
        assert evaluate(p("x1^2 + x2"), [1, 2]).value == 3

    def test_evaluate_in_extension(self):
        """Test that x^2 + 1 vanishes at i."""
        ext = SimpleExtension.from_coefficients(QQ, [1, 0, 1])
        assert evaluate(p("x^2 + 1", ["x"]), [ext.generator]).is_zero()
        assert str(evaluate(p("6*x2"), [0, ext.generator])) == "6*t"

    def test_translate(self):
        """Test f(x + a)."""
        assert translate(p("x^2", ["x"]), [1]) == p("x^2 + 2*x + 1", ["x"])
        assert translate(p("(x - 3)^2", ["x"]), [3]) == p("x^2", ["x"])
        f = p("x1*x2 + 1")
        assert translate(f, [0, 0]) == f

    def test_translate_in_prime_field(self):
        """Test translation over F5."""
        F5 = FieldContext.prime_field(5)
        f = p("x^2 - 4", ["x"], F5)
        assert translate(f, [2]) == p("x^2 + 4*x", ["x"], F5)


class TestParser:
    """Test the polynomial expression grammar."""

    @pytest.mark.parametrize("text", ["", "   ", "x1 +", "x1 & 2", "1/x1", "x1 + y"])
    def test_invalid_expressions(self, text):
        """Test that malformed or non-polynomial input raises ParseError."""
        with pytest.raises(ParseError):
            p(text)

    def test_no_variables(self):
        """Test that at least one variable is required."""
        with pytest.raises(ParseError):
            parse_polynomial("1", QQ, [])

    def test_caret_means_power(self):
        """Test that ^ and ** agree."""
        assert p("x1^3") == p("x1**3")

    def test_rational_literals(self):
        """Test that rational literals are read exactly."""
        assert p("1/2*x1") == p("x1/2")
        assert p("x1/2").coefficient((1, 0)).value == Fraction(1, 2)
