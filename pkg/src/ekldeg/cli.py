"""Command-line interface for ekldeg."""

from __future__ import annotations

import json
import logging
from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import NoReturn

import typer
from pydantic import BaseModel
from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape
from rich.table import Table

from . import __version__
from .ade import ade_table
from .cli_utils import (
    build_job,
    parse_extension,
    parse_field,
    parse_form,
    parse_point,
    parse_polynomial,
    parse_scalar,
    split_rows,
    split_values,
)
from .config import Config
from .degree import (
    ClosedPoint,
    FiberReport,
    bifurcation_obstruction,
    conservation_check,
    fiber_sum,
    local_degree_etale,
    milnor_number,
    node_arithmetic_type,
)
from .ekl import ekl_computation
from .exceptions import EKLDegError, ParseError
from .fields import FieldContext, Raw
from .gw import SymmetricForm, invariants
from .models import (
    ADERowModel,
    ADETableResult,
    ConservationResult,
    EKLResult,
    ErrorResult,
    FiberPointModel,
    FiberResult,
    FormResult,
    GWClassModel,
    JobSpec,
    ObstructionModel,
    gram_rows,
)
from .poly import Polynomial

app = typer.Typer(
    name="ekldeg",
    help="Compute EKL forms, local A1-degrees and arithmetic Milnor numbers",
    no_args_is_help=True,
)

console = Console()
logger = logging.getLogger("ekldeg")

_INPUT = typer.Option(None, "--input", "-i", help="JSON job file")
_FIELD = typer.Option(
    None, "--field", "-f", help=f"Base field ({Config.get_field_spec_help()}), default QQ"
)
_VARS = typer.Option(None, "--vars", help="Comma separated variable names (default: inferred)")
_PRETTY = typer.Option(False, "--pretty", help="Render results as rich tables")
_JSON = typer.Option(False, "--json", help="Emit JSON (the default)")
_POLYS = typer.Argument(None, help="Components f_1, ..., f_n")
_POLY = typer.Argument(None, help="The function g")


def _version_callback(value: bool) -> None:
    """Print the package version and exit."""
    if value:
        typer.echo(f"ekldeg {__version__}")
        raise typer.Exit()


def _configure_logging(verbose: bool) -> None:
    handler = RichHandler(console=Console(stderr=True), show_path=False)
    handler.setFormatter(logging.Formatter(Config.LOG_FORMAT))
    logger.handlers.clear()
    logger.addHandler(handler)
    logger.setLevel(logging.DEBUG if verbose else Config.get_log_level())


@app.callback()
def main(
    version: bool = typer.Option(
        False,
        "--version",
        help="Show the version and exit.",
        callback=_version_callback,
        is_eager=True,
    ),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log progress to stderr"),
) -> None:
    """Compute EKL forms, local A1-degrees and arithmetic Milnor numbers."""
    _configure_logging(verbose)


def _fail(error: Exception, code: int, pretty: bool) -> NoReturn:
    if pretty:
        console.print(f"✗ Error: {escape(str(error))}", style="red")
    else:
        result = ErrorResult(error=type(error).__name__, message=str(error))
        typer.echo(json.dumps(result.model_dump(), sort_keys=True))
    raise typer.Exit(code) from error


@contextmanager
def _reporting(pretty: bool) -> Iterator[None]:
    """Turn library errors into error JSON and the matching exit code."""
    try:
        yield
    except typer.Exit:
        raise
    except EKLDegError as e:
        _fail(e, e.exit_code, pretty)
    except Exception as e:
        logger.debug("Unexpected failure", exc_info=True)
        _fail(e, 3, pretty)


def _emit(result: BaseModel) -> None:
    typer.echo(json.dumps(result.model_dump(), sort_keys=True))


def _split(value: str | None) -> list[str] | None:
    return split_values(value) if value is not None else None


def _context(job: JobSpec) -> FieldContext:
    return parse_field(job.field)


def _system(job: JobSpec, ctx: FieldContext) -> list[Polynomial]:
    if not job.polys:
        raise ParseError("No polynomials given")
    if len(job.polys) != len(job.vars):
        raise ParseError(f"{len(job.polys)} polynomials in {len(job.vars)} variables")
    return [parse_polynomial(text, ctx, job.vars) for text in job.polys]


def _single(job: JobSpec, ctx: FieldContext) -> Polynomial:
    if not job.poly:
        raise ParseError("No polynomial given")
    return parse_polynomial(job.poly, ctx, job.vars)


def _point(job: JobSpec, ctx: FieldContext) -> ClosedPoint | None:
    if job.point is None:
        return None
    extension = parse_extension(job.modulus, ctx, job.generator) if job.modulus else None
    return parse_point(job.point, ctx, len(job.vars), extension)


def _target(job: JobSpec, ctx: FieldContext) -> list[Raw] | None:
    if job.y is None:
        return None
    return [parse_scalar(v, ctx) for v in job.y]


def _form_result(ctx: FieldContext, q: SymmetricForm) -> FormResult:
    return FormResult(
        field=ctx.spec, gram=gram_rows(q), gw_class=GWClassModel.from_class(invariants(q))
    )


def _fiber_result(ctx: FieldContext, report: FiberReport) -> FiberResult:
    points = [
        FiberPointModel(
            point=[str(c) for c in entry.point.coordinates],
            residue_field=None if entry.point.extension is None else str(entry.point.extension),
            multiplicity=entry.multiplicity,
            gram=gram_rows(entry.form),
            gw_class=GWClassModel.from_class(invariants(entry.form)),
        )
        for entry in report.entries
    ]
    return FiberResult(
        field=ctx.spec,
        y=[str(v) for v in report.y],
        points=points,
        gram=gram_rows(report.total),
        gw_class=GWClassModel.from_class(report.total_class),
    )


def _class_table(title: str, gw: GWClassModel) -> Table:
    table = Table(title=title)
    table.add_column("Invariant", style="cyan")
    table.add_column("Value", style="green")
    table.add_row("presentation", str(gw.presentation))
    table.add_row("rank", str(gw.rank))
    table.add_row("disc", str(gw.disc))
    if gw.signature is not None:
        table.add_row("signature", str(gw.signature))
    for place, eps in gw.hasse.items():
        table.add_row(escape(f"hasse[{place}]"), f"{eps:+d}")
    return table


def _show_form(result: FormResult, title: str) -> None:
    console.print(f"\n[bold]{escape(title)} over {result.field}[/bold]")
    console.print(f"Gram matrix: {escape(str(result.gram))}")
    console.print(_class_table("GW class", result.gw_class))


def _show_fiber(result: FiberResult) -> None:
    table = Table(title=f"Fiber over y = ({', '.join(result.y)})")
    table.add_column("Point", style="cyan")
    table.add_column("Residue field", style="blue")
    table.add_column("Mult", justify="right")
    table.add_column("Local class", style="green")
    for entry in result.points:
        table.add_row(
            escape(", ".join(entry.point)),
            escape(entry.residue_field or result.field),
            str(entry.multiplicity),
            escape(str(entry.gw_class.presentation)),
        )
    console.print(table)
    console.print(_class_table("Total", result.gw_class))


@app.command()
def ekl(
    polys: list[str] | None = _POLYS,
    vars: str | None = _VARS,
    point: str | None = typer.Option(None, "--point", "-x", help="Rational point, e.g. '1,0'"),
    y: str | None = typer.Option(None, "--y", help="Expected value f(x), checked when given"),
    input_file: Path | None = _INPUT,
    field: str | None = _FIELD,
    pretty: bool = _PRETTY,
    json_output: bool = _JSON,
):
    """Compute the EKL form of f at an isolated zero (the origin by default)."""
    pretty = pretty and not json_output
    with _reporting(pretty):
        job = build_job(
            input_file,
            field=field,
            polys=polys or None,
            vars=_split(vars),
            point=_split(point),
            y=_split(y),
        )
        ctx = _context(job)
        f = _system(job, ctx)
        x = _point(job, ctx)
        computation = ekl_computation(f, None if x is None else x.coordinates, _target(job, ctx))
        algebra = computation.algebra
        result = EKLResult(
            field=ctx.spec,
            gram=gram_rows(computation.gram),
            gw_class=GWClassModel.from_class(invariants(computation.gram)),
            dimension=algebra.dimension,
            staircase=[algebra.format_monomial(m) for m in algebra.staircase],
            socle=str(computation.socle),
            functional=algebra.format_monomial(computation.phi.monomial),
        )
        if pretty:
            staircase = ", ".join(result.staircase)
            console.print(f"Staircase: {staircase} (dimension {result.dimension})")
            console.print(f"E = {result.socle}, phi reads the coefficient of {result.functional}")
            _show_form(result, "EKL form")
        else:
            _emit(result)


@app.command()
def milnor(
    poly: str | None = _POLY,
    vars: str | None = _VARS,
    input_file: Path | None = _INPUT,
    field: str | None = _FIELD,
    pretty: bool = _PRETTY,
    json_output: bool = _JSON,
):
    """Compute the arithmetic Milnor number of g at the origin."""
    pretty = pretty and not json_output
    with _reporting(pretty):
        job = build_job(input_file, field=field, poly=poly, vars=_split(vars))
        ctx = _context(job)
        result = _form_result(ctx, milnor_number(_single(job, ctx)))
        if pretty:
            _show_form(result, "Arithmetic Milnor number")
        else:
            _emit(result)


@app.command("node-type")
def node_type(
    poly: str | None = _POLY,
    vars: str | None = _VARS,
    point: str | None = typer.Option(None, "--point", "-x", help="Critical point (default origin)"),
    modulus: str | None = typer.Option(None, "--modulus", "-m", help="Residue field modulus m(t)"),
    input_file: Path | None = _INPUT,
    field: str | None = _FIELD,
    pretty: bool = _PRETTY,
    json_output: bool = _JSON,
):
    """Compute the arithmetic type of a node of g."""
    pretty = pretty and not json_output
    with _reporting(pretty):
        job = build_job(
            input_file,
            field=field,
            poly=poly,
            vars=_split(vars),
            point=_split(point),
            modulus=modulus,
        )
        ctx = _context(job)
        result = _form_result(ctx, node_arithmetic_type(_single(job, ctx), _point(job, ctx)))
        if pretty:
            _show_form(result, "Node arithmetic type")
        else:
            _emit(result)


@app.command("degree-etale")
def degree_etale(
    polys: list[str] | None = _POLYS,
    vars: str | None = _VARS,
    point: str | None = typer.Option(None, "--point", "-x", help="Point, e.g. 't' or '1,0'"),
    modulus: str | None = typer.Option(None, "--modulus", "-m", help="Residue field modulus m(t)"),
    y: str | None = typer.Option(None, "--y", help="Expected value f(x), checked when given"),
    input_file: Path | None = _INPUT,
    field: str | None = _FIELD,
    pretty: bool = _PRETTY,
    json_output: bool = _JSON,
):
    """Compute the local degree Tr<J(x)> of f at an etale closed point."""
    pretty = pretty and not json_output
    with _reporting(pretty):
        job = build_job(
            input_file,
            field=field,
            polys=polys or None,
            vars=_split(vars),
            point=_split(point),
            modulus=modulus,
            y=_split(y),
        )
        ctx = _context(job)
        f = _system(job, ctx)
        x = _point(job, ctx)
        if x is None:
            raise ParseError("degree-etale needs --point")
        result = _form_result(ctx, local_degree_etale(f, x, _target(job, ctx)))
        if pretty:
            _show_form(result, "Local degree")
        else:
            _emit(result)


@app.command("fiber-sum")
def fiber_sum_command(
    polys: list[str] | None = _POLYS,
    vars: str | None = _VARS,
    y: str | None = typer.Option(None, "--y", help="Rational base point, e.g. '0,2'"),
    input_file: Path | None = _INPUT,
    field: str | None = _FIELD,
    pretty: bool = _PRETTY,
    json_output: bool = _JSON,
):
    """Sum the local degrees of f over every point of the fiber over y."""
    pretty = pretty and not json_output
    with _reporting(pretty):
        job = build_job(
            input_file, field=field, polys=polys or None, vars=_split(vars), y=_split(y)
        )
        ctx = _context(job)
        f = _system(job, ctx)
        target = _target(job, ctx)
        if target is None:
            raise ParseError("fiber-sum needs --y")
        result = _fiber_result(ctx, fiber_sum(f, target))
        if pretty:
            _show_fiber(result)
        else:
            _emit(result)


@app.command()
def classify(
    gram: str | None = typer.Option(None, "--gram", "-g", help="Gram matrix, e.g. '0,1;1,0'"),
    input_file: Path | None = _INPUT,
    field: str | None = _FIELD,
    pretty: bool = _PRETTY,
    json_output: bool = _JSON,
):
    """Classify a symmetric bilinear form given by its Gram matrix."""
    pretty = pretty and not json_output
    with _reporting(pretty):
        job = build_job(
            input_file, field=field, gram=split_rows(gram) if gram is not None else None
        )
        ctx = _context(job)
        if not job.gram:
            raise ParseError("classify needs a Gram matrix")
        q = parse_form(job.gram, ctx)
        if not q.is_nondegenerate:
            raise ParseError(f"Gram matrix {q} is degenerate")
        result = _form_result(ctx, q)
        if pretty:
            _show_form(result, "Symmetric form")
        else:
            _emit(result)


@app.command("ade-table")
def ade_table_command(
    field: str | None = _FIELD,
    pretty: bool = _PRETTY,
    json_output: bool = _JSON,
):
    """Compare computed Milnor numbers of A1-A6, D4-D6, E6-E8 with their formulas."""
    pretty = pretty and not json_output
    with _reporting(pretty):
        ctx = parse_field(field or "QQ")
        rows = ade_table(ctx)
        result = ADETableResult(
            field=ctx.spec,
            passed=all(row.passed for row in rows),
            rows=[
                ADERowModel(
                    name=row.singularity.name,
                    equation=row.singularity.equation,
                    formula=row.singularity.formula,
                    computed=str(row.computed_presentation),
                    expected=str(row.expected_presentation),
                    passed=row.passed,
                )
                for row in rows
            ],
        )
        if not pretty:
            _emit(result)
            return
        table = Table(title=f"Arithmetic Milnor numbers over {ctx.spec}")
        table.add_column("Type", style="cyan")
        table.add_column("Equation")
        table.add_column("Formula", style="blue")
        table.add_column("Computed", style="green")
        table.add_column("Expected", style="green")
        table.add_column("Status", justify="center")
        for row_model in result.rows:
            status = "[green]✓ PASS[/green]" if row_model.passed else "[red]✗ FAIL[/red]"
            table.add_row(
                row_model.name,
                row_model.equation,
                escape(row_model.formula),
                escape(row_model.computed),
                escape(row_model.expected),
                status,
            )
        console.print(table)


@app.command()
def conservation(
    polys: list[str] | None = _POLYS,
    vars: str | None = _VARS,
    y: list[str] | None = typer.Option(None, "--y", help="Base point; repeat for each fiber"),
    classifier: str | None = typer.Option(
        None, "--classifier", "-c", help="Compare totals over this field (e.g. RR)"
    ),
    input_file: Path | None = _INPUT,
    field: str | None = _FIELD,
    pretty: bool = _PRETTY,
    json_output: bool = _JSON,
):
    """Check that fiber totals of f agree over several base points."""
    pretty = pretty and not json_output
    with _reporting(pretty):
        job = build_job(
            input_file,
            field=field,
            polys=polys or None,
            vars=_split(vars),
            ys=[split_values(v) for v in y] if y else None,
            classifier=classifier,
        )
        ctx = _context(job)
        f = _system(job, ctx)
        if not job.ys:
            raise ParseError("conservation needs at least one --y")
        ys = [[parse_scalar(v, ctx) for v in row] for row in job.ys]
        compare = parse_field(job.classifier) if job.classifier else ctx
        report = conservation_check(f, ys, compare)
        result = ConservationResult(
            field=ctx.spec,
            classifier=compare.spec,
            passed=report.passed,
            fibers=[_fiber_result(ctx, r) for r in report.reports],
            witnesses=[
                f"y = ({', '.join(str(v) for v in report.reports[k].y)}): {diff}"
                for k, diff in report.witnesses
            ],
        )
        if not pretty:
            _emit(result)
            return
        for fiber in result.fibers:
            _show_fiber(fiber)
        if result.passed:
            console.print(f"✓ Fiber totals agree over {result.classifier}")
        else:
            console.print(f"✗ Fiber totals differ over {result.classifier}", style="red")
            for witness in result.witnesses:
                console.print(f"  {escape(witness)}")


@app.command()
def obstruction(
    poly: str | None = _POLY,
    vars: str | None = _VARS,
    node: list[str] | None = typer.Option(
        None, "--node", "-n", help="Node equation at the origin; repeat for each node"
    ),
    node_form: list[str] | None = typer.Option(
        None, "--node-form", help="Node arithmetic type as a Gram matrix, e.g. '2'"
    ),
    input_file: Path | None = _INPUT,
    field: str | None = _FIELD,
    pretty: bool = _PRETTY,
    json_output: bool = _JSON,
):
    """Decide whether g can bifurcate into nodes of the given arithmetic types."""
    pretty = pretty and not json_output
    with _reporting(pretty):
        job = build_job(
            input_file,
            field=field,
            poly=poly,
            vars=_split(vars),
            nodes=node,
            node_forms=[split_rows(q) for q in node_form] if node_form else None,
        )
        ctx = _context(job)
        g = _single(job, ctx)
        types = [
            node_arithmetic_type(parse_polynomial(text, ctx, job.vars)) for text in job.nodes or []
        ]
        types.extend(parse_form(rows, ctx) for rows in job.node_forms or [])
        if not types:
            raise ParseError("obstruction needs at least one node")
        outcome = bifurcation_obstruction(g, types, ctx)
        result = ObstructionModel(
            field=ctx.spec,
            milnor=GWClassModel.from_class(invariants(outcome.milnor)),
            nodes=GWClassModel.from_class(invariants(outcome.nodes)),
            obstructed=outcome.obstructed,
            witness=None if outcome.witness is None else str(outcome.witness),
        )
        if not pretty:
            _emit(result)
            return
        console.print(_class_table("Milnor number", result.milnor))
        console.print(_class_table("Sum of node types", result.nodes))
        if result.obstructed:
            console.print(f"✗ Obstructed ({escape(str(result.witness))})", style="red")
        else:
            console.print("✓ Not obstructed")


if __name__ == "__main__":
    app()
