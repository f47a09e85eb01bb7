"""Job files and JSON result documents of the command line interface.

A job is a JSON object such as::

    {"field": "QQ", "vars": ["x1", "x2"], "polys": ["2*x1", "3*x2^2"]}

Numbers may be given as JSON numbers or as strings ("1/6"). Results are
pydantic models whose ``model_dump()`` is serialised with sorted keys.
"""

from __future__ import annotations

import re
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator

from .gw import GWClass, SymmetricForm

_IDENTIFIER = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")


def _as_text(value: Any) -> Any:
    if isinstance(value, bool):
        raise ValueError("Booleans are not field elements")
    if isinstance(value, int | float):
        return str(value)
    return value


def _as_rows(v: Any) -> Any:
    if isinstance(v, list):
        return [[_as_text(c) for c in row] if isinstance(row, list) else row for row in v]
    return v


class JobSpec(BaseModel):
    """One invocation of a command, read from ``--input`` or built from options."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    field: str = Field(default="QQ", description="Field spec: QQ, RR, Fp:<p> or Qp:<p>")
    vars: list[str] = Field(default_factory=list, description="Variable names, in order")
    polys: list[str] | None = Field(default=None, description="Components f_1, ..., f_n")
    poly: str | None = Field(default=None, description="A single function g")
    point: list[str] | None = Field(default=None, description="Point coordinates")
    modulus: str | None = Field(default=None, description="Residue field modulus m(t)")
    generator: str = Field(default="t", description="Variable of the modulus")
    y: list[str] | None = Field(default=None, description="Target value f(x)")
    ys: list[list[str]] | None = Field(default=None, description="Targets for conservation")
    classifier: str | None = Field(default=None, description="Field used to compare totals")
    gram: list[list[str]] | None = Field(default=None, description="Explicit Gram matrix")
    nodes: list[str] | None = Field(default=None, description="Node equations at the origin")
    node_forms: list[list[list[str]]] | None = Field(
        default=None, description="Node arithmetic types as Gram matrices"
    )

    @field_validator("field", mode="before")
    @classmethod
    def strip_field(cls, v: Any) -> Any:
        return v.strip() if isinstance(v, str) else v

    @field_validator("vars")
    @classmethod
    def check_identifiers(cls, v: list[str]) -> list[str]:
        """Variable names must be identifiers and pairwise distinct."""
        for name in v:
            if not _IDENTIFIER.match(name):
                raise ValueError(f"Invalid variable name '{name}'")
        if len(set(v)) != len(v):
            raise ValueError("Variable names must be distinct")
        return v

    @field_validator("point", "y", mode="before")
    @classmethod
    def coerce_vector(cls, v: Any) -> Any:
        if isinstance(v, list):
            return [_as_text(c) for c in v]
        return v

    @field_validator("ys", "gram", mode="before")
    @classmethod
    def coerce_rows(cls, v: Any) -> Any:
        return _as_rows(v)

    @field_validator("node_forms", mode="before")
    @classmethod
    def coerce_forms(cls, v: Any) -> Any:
        if isinstance(v, list):
            return [_as_rows(form) for form in v]
        return v

    @field_validator("generator")
    @classmethod
    def check_generator(cls, v: str) -> str:
        if not _IDENTIFIER.match(v):
            raise ValueError(f"Invalid generator name '{v}'")
        return v


class GWClassModel(BaseModel):
    """JSON form of a GW class."""

    rank: int
    disc: str | None
    signature: int | None
    hasse: dict[str, int]
    presentation: str | None

    @classmethod
    def from_class(cls, gw: GWClass) -> GWClassModel:
        return cls(**gw.to_dict())


def gram_rows(q: SymmetricForm) -> list[list[str]]:
    return [[q.context.format(v) for v in row] for row in q.gram]


class FormResult(BaseModel):
    """A Gram matrix with its class."""

    field: str
    gram: list[list[str]]
    gw_class: GWClassModel


class EKLResult(FormResult):
    """Output of ``ekl``: the EKL form plus the local algebra it was read from."""

    dimension: int
    staircase: list[str]
    socle: str
    functional: str


class FiberPointModel(BaseModel):
    point: list[str]
    residue_field: str | None
    multiplicity: int
    gram: list[list[str]]
    gw_class: GWClassModel


class FiberResult(FormResult):
    """Output of ``fiber-sum``: every closed point over y and the total."""

    y: list[str]
    points: list[FiberPointModel]


class ConservationResult(BaseModel):
    field: str
    classifier: str
    passed: bool
    fibers: list[FiberResult]
    witnesses: list[str]


class ObstructionModel(BaseModel):
    field: str
    milnor: GWClassModel
    nodes: GWClassModel
    obstructed: bool
    witness: str | None


class ADERowModel(BaseModel):
    name: str
    equation: str
    formula: str
    computed: str
    expected: str
    passed: bool


class ADETableResult(BaseModel):
    field: str
    passed: bool
    rows: list[ADERowModel]


class ErrorResult(BaseModel):
    error: str
    message: str
