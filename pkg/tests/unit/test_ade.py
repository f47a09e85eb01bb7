"""Tests for the ADE corpus and its Milnor number table."""

import pytest

from ekldeg.ade import (
    E_SERIES,
    a_series,
    ade_table,
    corpus,
    d_series,
    evaluate_row,
    singularity,
)
from ekldeg.fields import FieldContext
from ekldeg.gw import equals


class TestCorpus:
    """Test the corpus entries and their formula classes."""

    def test_order(self):
        """Test that the corpus lists A, D and E types in order."""
        names = [entry.name for entry in corpus()]
        expected = [f"A{n}" for n in range(1, 7)] + [f"D{n}" for n in range(4, 7)]
        assert names == expected + ["E6", "E7", "E8"]

    def test_a_series_formulas(self):
        """Test the A_n formula classes."""
        assert a_series(1).residual == (4,)
        assert a_series(3).h_multiplicity == 1
        assert a_series(3).residual == (8,)
        assert a_series(4).h_multiplicity == 2
        assert a_series(4).residual == ()
        assert a_series(5).equation == "x1^2 + x2^6"

    def test_d_series_formulas(self):
        """Test the D_n formula classes."""
        assert d_series(4).h_multiplicity == 1
        assert d_series(4).residual == (-2, 6)
        assert d_series(5).residual == (-2,)
        assert d_series(6).residual == (-2, 10)
        assert d_series(5).equation == "x2*(x1^2 + x2^3)"

    def test_milnor_is_rank(self):
        """Test that the classical Milnor number is the rank of the formula class."""
        assert [entry.milnor for entry in corpus()] == [1, 2, 3, 4, 5, 6, 4, 5, 6, 6, 7, 8]

    def test_e_series(self):
        """Test the exceptional entries."""
        assert [entry.formula for entry in E_SERIES] == ["3*H", "3*H + <-3>", "4*H"]

    def test_lookup(self):
        """Test lookup by name."""
        assert singularity("D5").equation == "x2*(x1^2 + x2^3)"
        with pytest.raises(KeyError):
            singularity("A9")


class TestADETable:
    """Test computed Milnor numbers against the formulas."""

    @pytest.mark.parametrize("name", ["A1", "A2", "A3", "D4", "E6", "E7"])
    def test_row_passes(self, name):
        """Test single rows over QQ."""
        row = evaluate_row(singularity(name))
        assert row.passed
        assert row.witness is None
        assert equals(row.computed, row.expected)

    def test_e7_presentation(self):
        """Test the presentation of the E7 row."""
        row = evaluate_row(singularity("E7"))
        assert str(row.computed_presentation) == "3*H + <-3>"
        assert str(row.expected_presentation) == "3*H + <-3>"

    def test_d4_presentation(self):
        """Test the presentation of the D4 row."""
        row = evaluate_row(singularity("D4"))
        assert str(row.expected_presentation) == "1*H + <-2,6>"

    @pytest.mark.slow
    def test_full_table(self):
        """Test that every row passes over QQ."""
        rows = ade_table()
        assert len(rows) == 12
        assert all(row.passed for row in rows)

    def test_other_field(self):
        """Test A2 over F7."""
        row = evaluate_row(singularity("A2"), FieldContext.prime_field(7))
        assert row.passed
