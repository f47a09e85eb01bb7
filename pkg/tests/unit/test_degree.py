"""Tests for local degrees, Milnor numbers, fibers and obstructions."""

import pytest

from ekldeg.degree import (
    ClosedPoint,
    bifurcation_fiber,
    bifurcation_obstruction,
    conservation_check,
    fiber_sum,
    fiber_sum_univariate,
    local_degree_etale,
    milnor_number,
    node_arithmetic_type,
)
from ekldeg.exceptions import (
    Char2UnsupportedError,
    ContextMismatchError,
    DegenerateCriticalPointError,
    NonRationalImageError,
    NotEtaleError,
    UnresolvedFiberError,
)
from ekldeg.extensions import SimpleExtension
from ekldeg.fields import FieldContext
from ekldeg.gw import diagonal_form, equals, hyperbolic, invariants, present
from ekldeg.poly import parse_polynomial

QQ = FieldContext.rationals()
XY = ["x1", "x2"]


def p(text, variables=XY, context=QQ):
    return parse_polynomial(text, context, variables)


class TestClosedPoint:
    """Test rational and non-rational closed points."""

    def setup_method(self):
        """Set up Q(i)."""
        self.gaussian = SimpleExtension.from_coefficients(QQ, [1, 0, 1])

    def test_rational_point(self):
        """Test a rational point."""
        point = ClosedPoint.rational(QQ, [1, "1/2"])
        assert point.is_rational
        assert point.residue_degree == 1
        assert str(point) == "(1, 1/2)"

    def test_point_over_extension(self):
        """Test a point with residue field Q(i)."""
        point = ClosedPoint.in_extension(self.gaussian, [self.gaussian.generator, 0])
        assert not point.is_rational
        assert point.residue_degree == 2
        assert str(point) == "(t, 0) in QQ[t]/(t^2 + 1)"

    def test_coordinates_must_generate(self):
        """Test that rational coordinates cannot name a degree two point."""
        with pytest.raises(ContextMismatchError):
            ClosedPoint.in_extension(self.gaussian, [1, 0])


class TestMilnorNumber:
    """Test arithmetic Milnor numbers."""

    def test_cusp(self):
        """Test that the cusp has class H."""
        mu = milnor_number(p("x1^2 + x2^3"))
        gw = invariants(mu)
        assert gw.rank == 2
        assert str(gw.disc) == "-1"
        assert equals(mu, hyperbolic(QQ))

    def test_e8(self):
        """Test that E8 has class 4H."""
        assert str(present(milnor_number(p("x1^3 + x2^5")))) == "4*H"

    def test_sum_of_three_squares(self):
        """Test that a node in three variables has class <8> = <2>."""
        g = p("x1^2 + x2^2 + x3^2", ["x1", "x2", "x3"])
        assert equals(milnor_number(g), diagonal_form(QQ, [2]))

    @pytest.mark.parametrize("text,rank", [("x1^2 + x2^3 + x2^4", 3), ("x1^2 + x2^3 + x2^7", 6)])
    def test_rank_in_characteristic_three(self, text, rank):
        """Test that adding x2^(p+1) or x2^(2p+1) to x2^p changes the rank over F3."""
        mu = milnor_number(p(text, context=FieldContext.prime_field(3)))
        assert mu.size == rank
        assert mu.is_nondegenerate


class TestLocalDegreeEtale:
    """Test Tr<J(x)> at etale points."""

    def setup_method(self):
        """Set up Q(i)."""
        self.gaussian = SimpleExtension.from_coefficients(QQ, [1, 0, 1])

    def test_rational_point(self):
        """Test <J(x)> for x^2 at 1."""
        form = local_degree_etale([p("x^2", ["x"])], ClosedPoint.rational(QQ, [1]))
        assert str(form) == "[[2]]"

    def test_gaussian_point(self):
        """Test that x^2 + 1 at i has class H."""
        point = ClosedPoint.in_extension(self.gaussian, [self.gaussian.generator])
        form = local_degree_etale([p("x^2 + 1", ["x"])], point, [0])
        assert str(form) == "[[0, -4], [-4, 0]]"
        assert equals(form, hyperbolic(QQ))

    def test_not_etale(self):
        """Test that a vanishing Jacobian is refused."""
        with pytest.raises(NotEtaleError):
            local_degree_etale([p("x^2", ["x"])], ClosedPoint.rational(QQ, [0]))

    def test_non_rational_image(self):
        """Test that f(x) must be rational."""
        point = ClosedPoint.in_extension(self.gaussian, [self.gaussian.generator])
        with pytest.raises(NonRationalImageError):
            local_degree_etale([p("x", ["x"])], point)


class TestNodeArithmeticType:
    """Test arithmetic types of nondegenerate critical points."""

    def test_diagonal_nodes(self):
        """Test <2^n u_1 ... u_n> for diagonal equations."""
        assert equals(node_arithmetic_type(p("x1^2 + x2^2")), diagonal_form(QQ, [1]))
        assert equals(node_arithmetic_type(p("x1^2 + 2*x2^2")), diagonal_form(QQ, [2]))
        assert equals(node_arithmetic_type(p("3*x1^2 + 5*x2^2")), diagonal_form(QQ, [15]))

    def test_linear_change_keeps_type(self):
        """Test that a coordinate change does not alter the type in two variables."""
        changed = p("x1^2 + 2*x1*x2 + 3*x2^2")
        assert equals(node_arithmetic_type(changed), node_arithmetic_type(p("x1^2 + 2*x2^2")))

    def test_sign_matters_in_odd_dimension(self):
        """Test that g and -g have different types in one variable."""
        plus = node_arithmetic_type(p("x^2", ["x"]))
        minus = node_arithmetic_type(p("-x^2", ["x"]))
        assert not equals(plus, minus)
        assert equals(minus, diagonal_form(QQ, [-2]))

    def test_sign_matters_in_three_variables(self):
        """Test that g and -g differ by <-1> when n = 3."""
        xyz = ["x1", "x2", "x3"]
        plus = node_arithmetic_type(p("x1^2 + x2^2 + x3^2", xyz))
        minus = node_arithmetic_type(p("-x1^2 - x2^2 - x3^2", xyz))
        assert equals(plus, diagonal_form(QQ, [2]))
        assert equals(minus, diagonal_form(QQ, [-2]))

    def test_node_away_from_origin(self):
        """Test a node at (1, 0)."""
        g = p("(x1 - 1)^2 + x2^2")
        node = node_arithmetic_type(g, ClosedPoint.rational(QQ, [1, 0]))
        assert equals(node, diagonal_form(QQ, [1]))

    def test_node_over_extension(self):
        """Test a node with residue field Q(i)."""
        ext = SimpleExtension.from_coefficients(QQ, [1, 0, 1])
        g = p("x1^3/3 + x1 + x2^2")
        point = ClosedPoint.in_extension(ext, [ext.generator, 0])
        assert equals(node_arithmetic_type(g, point), hyperbolic(QQ))

    def test_degenerate_critical_point(self):
        """Test that the cusp is not a node."""
        with pytest.raises(DegenerateCriticalPointError):
            node_arithmetic_type(p("x1^2 + x2^3"))

    def test_characteristic_two(self):
        """Test that node types are refused in characteristic 2."""
        with pytest.raises(Char2UnsupportedError):
            node_arithmetic_type(p("x1^2 + x2^2", context=FieldContext.prime_field(2)))


class TestFiberSumUnivariate:
    """Test fibers of one-variable maps."""

    def setup_method(self):
        """Set up f = x^2."""
        self.f = p("x^2", ["x"])

    def test_split_fiber(self):
        """Test the two rational points over 1."""
        report = fiber_sum_univariate(self.f, 1)
        assert [str(e.point) for e in report.entries] == ["(-1)", "(1)"]
        assert report.rank == 2
        assert equals(report.total, hyperbolic(QQ))

    def test_ramified_fiber(self):
        """Test the double point over 0."""
        report = fiber_sum_univariate(self.f, 0)
        assert len(report.entries) == 1
        assert report.entries[0].multiplicity == 2
        assert str(report.total) == "[[0, 1], [1, 0]]"

    def test_inert_fiber(self):
        """Test the closed point of degree two over 2."""
        report = fiber_sum_univariate(self.f, 2)
        (entry,) = report.entries
        assert str(entry.point.extension) == "QQ[t]/(t^2 - 2)"
        assert str(entry.form) == "[[0, 8], [8, 0]]"

    def test_constant_map(self):
        """Test that constant maps have no finite fibers."""
        with pytest.raises(UnresolvedFiberError):
            fiber_sum_univariate(p("3", ["x"]), 3)

    def test_multiple_irrational_root(self):
        """Test that non-etale irrational points are refused."""
        with pytest.raises(UnresolvedFiberError):
            fiber_sum_univariate(p("(x^2 - 2)^2", ["x"]), 0)


class TestFiberSum:
    """Test fibers of maps in several variables."""

    def test_rational_points(self):
        """Test the fiber of (x1^2, x2) over (1, 0)."""
        report = fiber_sum([p("x1^2"), p("x2")], [1, 0])
        assert [str(e.point) for e in report.entries] == ["(-1, 0)", "(1, 0)"]
        assert equals(report.total, hyperbolic(QQ))

    def test_double_point(self):
        """Test the fiber of (x1^2, x2) over the origin."""
        report = fiber_sum([p("x1^2"), p("x2")], [0, 0])
        assert report.entries[0].multiplicity == 2
        assert equals(report.total, hyperbolic(QQ))

    def test_non_rational_point(self):
        """Test a fiber point over Q(i)."""
        report = fiber_sum([p("x1^2 + 1"), p("x2")], [0, 0])
        (entry,) = report.entries
        assert entry.point.residue_degree == 2
        assert equals(report.total, hyperbolic(QQ))

    def test_shape_position(self):
        """Test a point whose first coordinate is a polynomial in the last."""
        report = fiber_sum([p("x1 - x2"), p("x2^2 - 2")], [0, 0])
        (entry,) = report.entries
        assert [str(c) for c in entry.point.coordinates] == ["t", "t"]
        assert str(entry.form) == "[[0, 8], [8, 0]]"

    def test_empty_fiber(self):
        """Test a fiber with no points."""
        report = fiber_sum([p("x1"), p("0")], [0, 1])
        assert report.entries == ()
        assert report.rank == 0

    def test_shape_mismatch(self):
        """Test that the target must have n coordinates."""
        with pytest.raises(ContextMismatchError):
            fiber_sum([p("x1"), p("x2")], [0])


class TestConservation:
    """Test comparison of fiber totals."""

    def test_agreeing_fibers(self):
        """Test that x^2 has the same total over 1, 2 and -1."""
        report = conservation_check([p("x^2", ["x"])], [[1], [2], [-1]])
        assert report.passed
        assert [str(r.y[0]) for r in report.reports] == ["-1", "1", "2"]

    def test_rank_jump(self):
        """Test that (x1^3*x2 + x1 - x1^3, x2) loses rank over x2 = 1."""
        f = [p("x1^3*x2 + x1 - x1^3"), p("x2")]
        report = conservation_check(f, [[0, 0], [0, 1]])
        assert not report.passed
        ((k, diff),) = report.witnesses
        assert k == 1
        assert str(diff) == "rank: 3 vs 1"

    def test_real_classifier(self):
        """Test that totals can be compared over RR."""
        RR = FieldContext.real()
        report = conservation_check([p("x^2", ["x"])], [[1], [-1]], RR)
        assert report.passed
        assert report.classifier == RR


class TestBifurcation:
    """Test the obstruction to bifurcating into nodes."""

    def setup_method(self):
        """Set up the cusp and two nodes."""
        self.cusp = p("x1^2 + x2^3")
        self.nodes = [
            node_arithmetic_type(p("x1^2 + x2^2")),
            node_arithmetic_type(p("x1^2 + 2*x2^2")),
        ]

    def test_obstructed_over_q5(self):
        """Test that <1> + <2> cannot come from the cusp over Q5."""
        outcome = bifurcation_obstruction(self.cusp, self.nodes, FieldContext.padic(5))
        assert outcome.obstructed
        assert str(outcome.witness) == "disc: 1 vs 2"

    def test_not_obstructed_over_q11(self):
        """Test that over Q11 the invariants agree."""
        outcome = bifurcation_obstruction(self.cusp, self.nodes, FieldContext.padic(11))
        assert not outcome.obstructed
        assert outcome.witness is None

    def test_bifurcation_fiber(self):
        """Test that a perturbation of the cusp has two nodes summing to H."""
        report = bifurcation_fiber(self.cusp, [0, -3])
        assert len(report.entries) == 2
        assert equals(report.total, milnor_number(self.cusp))

    def test_bifurcation_into_closed_point(self):
        """Test that g + 15*x2 has one node at the closed point x2^2 + 5."""
        report = bifurcation_fiber(self.cusp, [0, 15])
        (entry,) = report.entries
        assert entry.point.residue_degree == 2
        assert equals(report.total, milnor_number(self.cusp))
