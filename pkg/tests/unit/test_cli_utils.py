"""Tests for CLI utility functions."""

import json
from fractions import Fraction

import pytest

from ekldeg.cli_utils import (
    build_job,
    infer_variables,
    load_job_file,
    parse_extension,
    parse_field,
    parse_form,
    parse_point,
    parse_scalar,
    split_rows,
    split_values,
)
from ekldeg.exceptions import ContextMismatchError, InvalidFieldSpecError, ParseError
from ekldeg.fields import FieldContext, FieldKind

QQ = FieldContext.rationals()
F7 = FieldContext.prime_field(7)


class TestParseField:
    """Test field spec parsing."""

    @pytest.mark.parametrize(
        "spec,kind,p",
        [
            ("QQ", FieldKind.RATIONALS, None),
            ("RR", FieldKind.REAL, None),
            ("Fp:7", FieldKind.PRIME_FIELD, 7),
            (" Qp:5 ", FieldKind.PADIC, 5),
        ],
    )
    def test_valid_specs(self, spec, kind, p):
        """Test parsing valid field specs."""
        ctx = parse_field(spec)
        assert ctx.kind is kind
        assert ctx.p == p

    @pytest.mark.parametrize("spec", ["ZZ", "Fp:4", "Qp:x", "Fp", "QQ:3"])
    def test_invalid_specs(self, spec):
        """Test that invalid specs are rejected."""
        with pytest.raises(InvalidFieldSpecError):
            parse_field(spec)

    def test_empty_spec(self):
        """Test that an empty spec is a parse error."""
        with pytest.raises(ParseError):
            parse_field("  ")


class TestParseValues:
    """Test scalar, list and matrix parsing."""

    def test_scalars(self):
        """Test integers, fractions and decimals."""
        assert parse_scalar("3", QQ) == 3
        assert parse_scalar(" -1/6 ", QQ) == Fraction(-1, 6)
        assert parse_scalar("0.5", QQ) == Fraction(1, 2)

    def test_scalar_reduced_mod_p(self):
        """Test that scalars are reduced in F_p."""
        assert parse_scalar("1/2", F7) == 4

    @pytest.mark.parametrize("text", ["", "abc", "1/0"])
    def test_invalid_scalars(self, text):
        """Test that malformed scalars are rejected."""
        with pytest.raises(ParseError):
            parse_scalar(text, QQ)

    def test_split_values(self):
        """Test splitting a comma separated list."""
        assert split_values("1, 2/3 ,0") == ["1", "2/3", "0"]

    @pytest.mark.parametrize("text", ["", "1,,2", "1,"])
    def test_split_values_invalid(self, text):
        """Test that empty entries are rejected."""
        with pytest.raises(ParseError):
            split_values(text)

    def test_split_rows(self):
        """Test splitting a matrix into rows."""
        assert split_rows("0,1;1,0") == [["0", "1"], ["1", "0"]]

    def test_parse_form(self):
        """Test building a form from string entries."""
        q = parse_form([["0", "1/6"], ["1/6", "0"]], QQ)
        assert str(q) == "[[0, 1/6], [1/6, 0]]"

    def test_parse_form_not_symmetric(self):
        """Test that an asymmetric matrix is a parse error."""
        with pytest.raises(ParseError):
            parse_form([["1", "2"], ["3", "4"]], QQ)


class TestParsePoints:
    """Test point and residue field parsing."""

    def test_rational_point(self):
        """Test a rational point."""
        point = parse_point(["1", "1/2"], QQ, 2)
        assert point.is_rational
        assert str(point) == "(1, 1/2)"

    def test_wrong_length(self):
        """Test that the coordinate count must match the variables."""
        with pytest.raises(ParseError, match="need 2"):
            parse_point(["1"], QQ, 2)

    def test_extension(self):
        """Test parsing the residue field Q(i)."""
        ext = parse_extension("t^2 + 1", QQ)
        assert ext.degree == 2
        assert str(ext) == "QQ[t]/(t^2 + 1)"

    def test_extension_is_made_monic(self):
        """Test that the modulus is normalised."""
        assert str(parse_extension("2*t^2 - 4", QQ)) == "QQ[t]/(t^2 - 2)"

    def test_point_in_extension(self):
        """Test coordinates written in the generator."""
        ext = parse_extension("t^2 + 1", QQ)
        point = parse_point(["t", "0"], QQ, 2, ext)
        assert point.residue_degree == 2
        assert str(point) == "(t, 0) in QQ[t]/(t^2 + 1)"

    def test_point_must_generate_extension(self):
        """Test that rational coordinates cannot name a point over Q(i)."""
        ext = parse_extension("t^2 + 1", QQ)
        with pytest.raises(ContextMismatchError):
            parse_point(["1", "0"], QQ, 2, ext)


class TestInferVariables:
    """Test variable inference from expressions."""

    def test_natural_order(self):
        """Test that x2 sorts before x10."""
        assert infer_variables(["x10 + x2", "x1^2"]) == ["x1", "x2", "x10"]

    def test_letters(self):
        """Test plain letter names."""
        assert infer_variables(["y^2 - x^3"]) == ["x", "y"]

    def test_constants_only(self):
        """Test expressions without variables."""
        assert infer_variables(["3", "1/2"]) == []


class TestJobFiles:
    """Test job file loading and merging."""

    def test_load_job_file(self, tmp_path):
        """Test reading a JSON object."""
        path = tmp_path / "job.json"
        path.write_text(json.dumps({"field": "Fp:7", "polys": ["x1"]}))
        assert load_job_file(path) == {"field": "Fp:7", "polys": ["x1"]}

    def test_missing_file(self, tmp_path):
        """Test that a missing file is a parse error."""
        with pytest.raises(ParseError, match="Cannot read"):
            load_job_file(tmp_path / "missing.json")

    def test_invalid_json(self, tmp_path):
        """Test that malformed JSON is a parse error."""
        path = tmp_path / "job.json"
        path.write_text("{field: QQ")
        with pytest.raises(ParseError, match="Invalid JSON"):
            load_job_file(path)

    def test_not_an_object(self, tmp_path):
        """Test that the top level must be an object."""
        path = tmp_path / "job.json"
        path.write_text("[1, 2]")
        with pytest.raises(ParseError, match="JSON object"):
            load_job_file(path)

    def test_build_job_infers_variables(self):
        """Test that missing variables are inferred from the polynomials."""
        job = build_job(polys=["2*x1", "3*x2^2"])
        assert job.vars == ["x1", "x2"]
        assert job.field == "QQ"

    def test_options_override_file(self, tmp_path):
        """Test that command-line options win over the job file."""
        path = tmp_path / "job.json"
        path.write_text(json.dumps({"field": "QQ", "poly": "x^2 + y^3", "vars": ["x", "y"]}))
        job = build_job(path, field="Qp:5", poly=None)
        assert job.field == "Qp:5"
        assert job.poly == "x^2 + y^3"
        assert job.vars == ["x", "y"]

    def test_nodes_contribute_variables(self):
        """Test that node equations are used for inference."""
        job = build_job(poly="x1^2 + x2^3", nodes=["x1^2 + 2*x2^2"])
        assert job.vars == ["x1", "x2"]

    def test_invalid_job(self):
        """Test that validation errors become parse errors."""
        with pytest.raises(ParseError, match="Invalid job"):
            build_job(polys=["x1"], unknown="value")
