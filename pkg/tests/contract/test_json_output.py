"""Contract tests for the JSON documents written by the CLI."""

import json

import pytest
from typer.testing import CliRunner

from ekldeg.cli import app

GW_CLASS_KEYS = ["disc", "hasse", "presentation", "rank", "signature"]

COMMANDS = {
    "ekl": ["ekl", "2*x1", "3*x2^2"],
    "milnor": ["milnor", "x1^2 + x2^3"],
    "node-type": ["node-type", "x1^2 + 2*x2^2"],
    "degree-etale": ["degree-etale", "x^2 + 1", "--modulus", "t^2 + 1", "--point", "t"],
    "fiber-sum": ["fiber-sum", "x^2", "--y", "2"],
    "classify": ["classify", "--gram", "0,1;1,0", "--field", "Qp:5"],
    "conservation": ["conservation", "x^2", "--y", "1", "--y", "-1"],
    "obstruction": ["obstruction", "x1^2 + x2^3", "--node-form", "1", "--node-form", "2"],
}


def run(args):
    result = CliRunner().invoke(app, args)
    return result, json.loads(result.stdout)


def assert_gw_class(doc):
    assert sorted(doc) == GW_CLASS_KEYS
    assert isinstance(doc["rank"], int)
    assert isinstance(doc["hasse"], dict)
    assert all(isinstance(v, int) and v in (1, -1) for v in doc["hasse"].values())


@pytest.mark.contract
class TestJSONContract:
    """Test that every command emits one sorted JSON object on stdout."""

    @pytest.mark.parametrize("name", sorted(COMMANDS))
    def test_keys_are_sorted(self, name):
        """Test that output is json.dumps(..., sort_keys=True)."""
        result, data = run(COMMANDS[name])
        assert result.exit_code == 0
        assert result.stdout == json.dumps(data, sort_keys=True) + "\n"

    @pytest.mark.parametrize("name", ["ekl", "milnor", "node-type", "degree-etale", "classify"])
    def test_form_documents(self, name):
        """Test the field, gram and gw_class members of form results."""
        _, data = run(COMMANDS[name])
        assert isinstance(data["field"], str)
        assert all(isinstance(v, str) for row in data["gram"] for v in row)
        assert len(data["gram"]) == data["gw_class"]["rank"]
        assert_gw_class(data["gw_class"])

    def test_ekl_document(self):
        """Test the members specific to ekl."""
        _, data = run(COMMANDS["ekl"])
        assert sorted(data) == [
            "dimension",
            "field",
            "functional",
            "gram",
            "gw_class",
            "socle",
            "staircase",
        ]

    def test_fiber_document(self):
        """Test the per-point members of fiber-sum."""
        _, data = run(COMMANDS["fiber-sum"])
        assert sorted(data) == ["field", "gram", "gw_class", "points", "y"]
        for point in data["points"]:
            assert sorted(point) == ["gram", "gw_class", "multiplicity", "point", "residue_field"]
            assert_gw_class(point["gw_class"])

    def test_conservation_document(self):
        """Test the conservation report."""
        _, data = run(COMMANDS["conservation"])
        assert sorted(data) == ["classifier", "fibers", "field", "passed", "witnesses"]
        assert isinstance(data["passed"], bool)

    def test_obstruction_document(self):
        """Test the obstruction report."""
        _, data = run(COMMANDS["obstruction"])
        assert sorted(data) == ["field", "milnor", "nodes", "obstructed", "witness"]
        assert_gw_class(data["milnor"])
        assert_gw_class(data["nodes"])

    def test_characteristic_two_class(self):
        """Test that only the rank is reported in characteristic 2."""
        _, data = run(["classify", "--gram", "0,1;1,0", "--field", "Fp:2"])
        assert data["gw_class"] == {
            "disc": None,
            "hasse": {},
            "presentation": None,
            "rank": 2,
            "signature": None,
        }

    @pytest.mark.parametrize(
        "args,code",
        [
            (["milnor", "x^2", "--field", "ZZ"], 1),
            (["ekl", "x1^2", "x1*x2"], 2),
        ],
    )
    def test_error_document(self, args, code):
        """Test the error object and exit code."""
        result, data = run(args)
        assert result.exit_code == code
        assert sorted(data) == ["error", "message"]
