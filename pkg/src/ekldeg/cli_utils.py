"""CLI utility functions for ekldeg: reading jobs, fields, points and forms."""

from __future__ import annotations

import json
import re
from collections.abc import Sequence
from fractions import Fraction
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from .degree import ClosedPoint
from .exceptions import ParseError
from .extensions import ExtensionElement, SimpleExtension
from .fields import FieldContext, Raw
from .gw import SymmetricForm
from .models import JobSpec
from .poly import Polynomial
from .poly import parse_polynomial as _parse_polynomial

_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


def parse_field(spec: str) -> FieldContext:
    """Parse a field spec like 'QQ', 'RR', 'Fp:7' or 'Qp:5'."""
    if not spec or not spec.strip():
        raise ParseError("Empty field spec")
    return FieldContext.parse(spec)


def parse_polynomial(text: str, context: FieldContext, variables: Sequence[str]) -> Polynomial:
    return _parse_polynomial(text, context, list(variables))


def parse_scalar(text: str, context: FieldContext) -> Raw:
    """Parse an integer, fraction 'p/q' or decimal into the field."""
    value = text.strip()
    if not value:
        raise ParseError("Empty value")
    try:
        return context.convert(Fraction(value))
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"Invalid value: {text}") from e


def split_values(text: str) -> list[str]:
    """Split '1, 2/3, 0' into its entries."""
    parts = [p.strip() for p in text.split(",")]
    if not text.strip() or any(not p for p in parts):
        raise ParseError(f"Invalid value list: '{text}'")
    return parts


def split_rows(text: str) -> list[list[str]]:
    """Split a matrix written as '0,1;1,0' into rows."""
    return [split_values(row) for row in text.split(";")]


def parse_extension(modulus: str, context: FieldContext, generator: str = "t") -> SimpleExtension:
    """The residue field context[generator]/(modulus)."""
    m = _parse_polynomial(modulus, context, [generator])
    coefficients = [m.coefficient((k,)).value for k in range(m.total_degree + 1)]
    return SimpleExtension.from_coefficients(context, coefficients, variable=generator)


def _extension_coordinate(text: str, extension: SimpleExtension) -> ExtensionElement:
    ctx = extension.base
    value = _parse_polynomial(text, ctx, [extension.variable])
    t = extension.generator
    result = extension.zero
    for (e,), c in value.terms.items():
        result = result + (t**e) * c
    return result


def parse_point(
    coordinates: Sequence[str],
    context: FieldContext,
    nvars: int,
    extension: SimpleExtension | None = None,
) -> ClosedPoint:
    """Read point coordinates, rational or polynomials in the extension generator.

    Raises:
        ParseError: If the number of coordinates is wrong or a value does not parse
    """
    if len(coordinates) != nvars:
        raise ParseError(f"Point has {len(coordinates)} coordinates, need {nvars}")
    if extension is None:
        return ClosedPoint(tuple(context.element(parse_scalar(c, context)) for c in coordinates))
    return ClosedPoint.in_extension(
        extension, [_extension_coordinate(c, extension) for c in coordinates]
    )


def parse_form(rows: Sequence[Sequence[str]], context: FieldContext) -> SymmetricForm:
    """A Gram matrix from its entries; must be square and symmetric."""
    return SymmetricForm(
        context, tuple(tuple(parse_scalar(v, context) for v in row) for row in rows)
    )


def _natural_key(name: str) -> list[Any]:
    return [(0, int(part)) if part.isdigit() else (1, part) for part in re.split(r"(\d+)", name)]


def infer_variables(expressions: Sequence[str]) -> list[str]:
    """Identifiers used in the expressions, x2 before x10."""
    names = {name for text in expressions for name in _NAME.findall(text)}
    return sorted(names, key=_natural_key)


def load_job_file(path: Path) -> dict[str, Any]:
    """Read a JSON job file into a dict."""
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise ParseError(f"Cannot read job file {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ParseError(f"Invalid JSON in {path}: {e}") from e
    if not isinstance(data, dict):
        raise ParseError(f"Job file {path} must contain a JSON object")
    return data


def build_job(input_file: Path | None = None, **options: Any) -> JobSpec:
    """Merge a job file with command-line options into a validated JobSpec.

    Options that are None are ignored; given options override the file.
    Missing variable names are inferred from the expressions.

    Raises:
        ParseError: If the file or the merged job is invalid
    """
    data: dict[str, Any] = load_job_file(input_file) if input_file is not None else {}
    data.update({key: value for key, value in options.items() if value is not None})
    if not data.get("vars"):
        expressions = list(data.get("polys") or [])
        if data.get("poly"):
            expressions.append(data["poly"])
        expressions.extend(data.get("nodes") or [])
        data["vars"] = infer_variables(expressions)
    try:
        return JobSpec.model_validate(data)
    except ValidationError as e:
        details = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'job'}: {err['msg']}" for err in e.errors()
        )
        raise ParseError(f"Invalid job: {details}") from e
