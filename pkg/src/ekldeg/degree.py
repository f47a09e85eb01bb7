"""Local degrees, arithmetic Milnor numbers and fiber sums.

Rational points of a fiber are handled by the EKL form; non-rational points
must be etale and contribute the trace form Tr_{k(x)/k}<J(x)>. Fibers are
found with sympy: univariate fibers by factoring f - y, multivariate fibers
by back-substitution through a lexicographic Groebner basis.

Example:
    >>> from ekldeg.fields import FieldContext
    >>> from ekldeg.gw import present
    >>> from ekldeg.poly import parse_polynomial
    >>> QQ = FieldContext.rationals()
    >>> g = parse_polynomial("x1^3 + x2^4", QQ, ["x1", "x2"])
    >>> str(present(milnor_number(g)))
    '3*H'
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

import sympy

from .ekl import ekl_class
from .exceptions import (
    Char2UnsupportedError,
    ContextMismatchError,
    DegenerateCriticalPointError,
    NonRationalImageError,
    NotEtaleError,
    NotIsolatedZeroError,
    UnresolvedFiberError,
)
from .extensions import ExtensionElement, SimpleExtension
from .fields import FieldContext, FieldElement, Raw, Scalar
from .gw import (
    Difference,
    GWClass,
    SymmetricForm,
    diagonal_form,
    direct_sum,
    first_difference,
    invariants,
    trace_form,
)
from .poly import Polynomial, evaluate, gradient, hessian_det, jacobian_det

logger = logging.getLogger(__name__)

Coordinate = FieldElement | ExtensionElement


@dataclass(frozen=True)
class ClosedPoint:
    """A closed point of affine space: rational, or a point over k[t]/(m).

    Attributes:
        coordinates: Coordinates in k, or in the extension
        extension: Residue field for non-rational points
    """

    coordinates: tuple[Coordinate, ...]
    extension: SimpleExtension | None = None

    def __post_init__(self) -> None:
        if self.extension is None:
            if any(isinstance(c, ExtensionElement) for c in self.coordinates):
                raise ContextMismatchError("Rational point with extension coordinates")
            return
        if any(c.field != self.extension for c in self.coordinates):  # type: ignore[union-attr]
            raise ContextMismatchError("Coordinates outside the declared residue field")
        if not _generates(self.extension, self.coordinates):  # type: ignore[arg-type]
            raise ContextMismatchError(
                f"Coordinates do not generate the residue field {self.extension}"
            )

    @classmethod
    def rational(cls, context: FieldContext, coordinates: Sequence[Scalar | str]) -> ClosedPoint:
        return cls(tuple(context.element(c) for c in coordinates))

    @classmethod
    def in_extension(
        cls,
        extension: SimpleExtension,
        coordinates: Sequence[ExtensionElement | Scalar],
    ) -> ClosedPoint:
        coords = tuple(
            c if isinstance(c, ExtensionElement) else extension.embed(c) for c in coordinates
        )
        return cls(coords, extension)

    @property
    def is_rational(self) -> bool:
        return self.extension is None

    @property
    def residue_degree(self) -> int:
        return 1 if self.extension is None else self.extension.degree

    def __str__(self) -> str:
        body = "(" + ", ".join(str(c) for c in self.coordinates) + ")"
        return body if self.extension is None else f"{body} in {self.extension}"


def _generates(extension: SimpleExtension, coordinates: Sequence[ExtensionElement]) -> bool:
    d = extension.degree
    if d == 1:
        return True
    for c in coordinates:
        powers = [extension.one]
        for _ in range(d - 1):
            powers.append(powers[-1] * c)
        if extension.base.matrix([list(p.coefficients) for p in powers]).rank() == d:
            return True
    return False


@dataclass(frozen=True)
class FiberEntry:
    point: ClosedPoint
    multiplicity: int
    form: SymmetricForm


@dataclass(frozen=True)
class FiberReport:
    """All points over y with their local degrees and the total.

    Attributes:
        y: The base point
        entries: One entry per closed point of the fiber
        total: Orthogonal sum of the local forms
    """

    y: tuple[FieldElement, ...]
    entries: tuple[FiberEntry, ...]
    total: SymmetricForm

    @property
    def total_class(self) -> GWClass:
        return invariants(self.total)

    @property
    def rank(self) -> int:
        return self.total.size


def _empty_form(context: FieldContext) -> SymmetricForm:
    return SymmetricForm(context, ())


def _point_key(point: ClosedPoint) -> list[Fraction]:
    return [c.context.to_fraction(c.value) for c in point.coordinates]  # type: ignore[union-attr]


def _sum_forms(context: FieldContext, forms: Sequence[SymmetricForm]) -> SymmetricForm:
    return direct_sum(*forms) if forms else _empty_form(context)


def milnor_number(g: Polynomial) -> SymmetricForm:
    """The arithmetic Milnor number: the EKL form of grad(g) at the origin."""
    return ekl_class(gradient(g))


def _image(
    f: Sequence[Polynomial], x: ClosedPoint, y: Sequence[Scalar] | None
) -> list[FieldElement]:
    ctx = f[0].context
    values = []
    for fi in f:
        v = evaluate(fi, list(x.coordinates))
        if isinstance(v, ExtensionElement):
            if not v.is_rational():
                raise NonRationalImageError(f"f(x) = {v} is not rational")
            v = v.rational_part()
        values.append(v)
    if y is not None and [v.value for v in values] != [ctx.convert(t) for t in y]:
        raise NotIsolatedZeroError(
            f"Point {x} maps to {[str(v) for v in values]}, not to the requested y"
        )
    return values


def local_degree_etale(
    f: Sequence[Polynomial], x: ClosedPoint, y: Sequence[Scalar] | None = None
) -> SymmetricForm:
    """Tr_{k(x)/k}<J(x)> at an etale point; <J(x)> for rational points.

    Raises:
        NonRationalImageError: If f(x) is not rational
        NotEtaleError: If J(x) = 0
    """
    ctx = f[0].context
    _image(f, x, y)
    jac = evaluate(jacobian_det(f), list(x.coordinates))
    if jac.is_zero():
        raise NotEtaleError(f"Jacobian vanishes at {x}")
    if x.extension is None:
        return diagonal_form(ctx, [jac])  # type: ignore[list-item]
    return trace_form(x.extension, jac)  # type: ignore[arg-type]


def node_arithmetic_type(g: Polynomial, x: ClosedPoint | None = None) -> SymmetricForm:
    """Arithmetic type of a node of g: the local degree of grad(g) at x.

    Raises:
        Char2UnsupportedError: In characteristic 2
        DegenerateCriticalPointError: If the Hessian determinant vanishes at x
    """
    ctx = g.context
    if ctx.is_char2:
        raise Char2UnsupportedError("Node types are not defined in characteristic 2")
    if x is None:
        x = ClosedPoint.rational(ctx, [0] * g.nvars)
    grad = gradient(g)
    _image(grad, x, [0] * g.nvars)
    if evaluate(hessian_det(g), list(x.coordinates)).is_zero():
        raise DegenerateCriticalPointError(f"Hessian of g is degenerate at {x}")
    return local_degree_etale(grad, x)


def _coefficients(poly: sympy.Poly, context: FieldContext) -> list[Raw]:
    """Constant-first coefficients of a univariate sympy polynomial."""
    return [context.from_sympy(c) for c in reversed(poly.all_coeffs())]


def fiber_sum_univariate(f: Polynomial, y: Scalar) -> FiberReport:
    """All local degrees of a one-variable f over y and their sum.

    Raises:
        UnresolvedFiberError: If f is constant or f - y has a multiple irrational root
    """
    ctx = f.context
    if f.nvars != 1:
        raise ContextMismatchError("fiber_sum_univariate needs one variable")
    if f.is_constant():
        raise UnresolvedFiberError("A constant map has no finite fibers")
    target = ctx.element(y)
    t = sympy.Symbol(f.variables[0])
    difference = sympy.Poly((f - target).to_sympy(), t, **ctx.sympy_options())
    _, factors = difference.factor_list()

    roots: list[tuple[Fraction, Raw]] = []
    closed: list[FiberEntry] = []
    for factor, multiplicity in factors:
        coeffs = _coefficients(factor, ctx)
        if factor.degree() == 1:
            root = ctx.div(ctx.neg(coeffs[0]), coeffs[1])
            roots.append((ctx.to_fraction(root), root))
            continue
        if multiplicity > 1:
            raise UnresolvedFiberError(
                f"Irrational multiple root: ({factor.as_expr()})^{multiplicity}"
            )
        extension = SimpleExtension.from_coefficients(ctx, coeffs, assume_irreducible=True)
        point = ClosedPoint.in_extension(extension, [extension.generator])
        closed.append(FiberEntry(point, 1, local_degree_etale([f], point, [target])))

    rational: list[FiberEntry] = []
    for _, root in sorted(roots):
        form = ekl_class([f], [root], [target])
        rational.append(FiberEntry(ClosedPoint.rational(ctx, [root]), form.size, form))

    entries = tuple(rational + closed)
    logger.debug("Fiber over %s: %d closed points", target, len(entries))
    return FiberReport((target,), entries, _sum_forms(ctx, [e.form for e in entries]))


def _groebner(
    polys: list[sympy.Expr], symbols: list[sympy.Symbol], context: FieldContext
) -> list[sympy.Expr]:
    basis = sympy.groebner(polys, *symbols, order="lex", **context.sympy_options())
    return list(basis.exprs)


def _shape_coordinates(
    polys: list[sympy.Expr],
    symbols: list[sympy.Symbol],
    factor: sympy.Poly,
    extension: SimpleExtension,
) -> list[ExtensionElement]:
    """Coordinates x_i = q_i(t) of the point cut out by polys and factor(last)."""
    ctx = extension.base
    last = symbols[-1]
    basis = _groebner(polys + [factor.as_expr()], symbols, ctx)
    coords: dict[sympy.Symbol, ExtensionElement] = {last: extension.generator}
    for g in basis:
        free = g.free_symbols & set(symbols)
        if free <= {last}:
            continue
        lead = next(s for s in symbols if s in free)
        if sympy.degree(g, lead) != 1 or lead in coords:
            raise UnresolvedFiberError(f"Fiber is not in shape position: {g}")
        c1 = sympy.expand(g).coeff(lead, 1)
        c0 = sympy.expand(g - c1 * lead)
        if c1.free_symbols or (c0.free_symbols & set(symbols)) - {last}:
            raise UnresolvedFiberError(f"Fiber is not in shape position: {g}")
        scale = ctx.neg(ctx.inv(ctx.from_sympy(c1)))
        rest = _coefficients(sympy.Poly(c0, last, domain="QQ"), ctx)
        coords[lead] = extension.element([ctx.mul(scale, c) for c in rest])
    if len(coords) != len(symbols):
        raise UnresolvedFiberError("Fiber is not zero-dimensional")
    return [coords[s] for s in symbols]


def _solve(
    polys: list[sympy.Expr], symbols: list[sympy.Symbol], context: FieldContext
) -> list[tuple[list[Raw | ExtensionElement], SimpleExtension | None]]:
    """Closed points of a zero-dimensional system, by back-substitution."""
    basis = _groebner(polys, symbols, context)
    if basis == [1] or sympy.Integer(1) in basis:
        return []
    last = symbols[-1]
    eliminant = next((g for g in basis if g.free_symbols & set(symbols) <= {last} and g != 0), None)
    if eliminant is None or not (eliminant.free_symbols & {last}):
        raise UnresolvedFiberError("Fiber is not zero-dimensional")
    _, factors = sympy.Poly(eliminant, last, **context.sympy_options()).factor_list()
    points: list[tuple[list[Raw | ExtensionElement], SimpleExtension | None]] = []
    for factor, _ in factors:
        coeffs = _coefficients(factor, context)
        if factor.degree() == 1:
            root = context.div(context.neg(coeffs[0]), coeffs[1])
            if len(symbols) == 1:
                points.append(([root], None))
                continue
            value = context.to_sympy(root)
            reduced = [sympy.expand(p.subs(last, value)) for p in basis]
            reduced = [p for p in reduced if p != 0]
            if not reduced:
                raise UnresolvedFiberError("Fiber is not zero-dimensional")
            for coords, extension in _solve(reduced, symbols[:-1], context):
                lifted = extension.embed(root) if extension is not None else root
                points.append(([*coords, lifted], extension))
            continue
        extension = SimpleExtension.from_coefficients(context, coeffs, assume_irreducible=True)
        points.append((list(_shape_coordinates(basis, symbols, factor, extension)), extension))
    return points


def fiber_sum(f: Sequence[Polynomial], y: Sequence[Scalar]) -> FiberReport:
    """All local degrees of f over the rational point y and their sum.

    Rational points use the EKL form. Non-rational points must be etale and
    in shape position over the last variable.

    Raises:
        UnresolvedFiberError: If a point cannot be resolved exactly
    """
    first = f[0]
    ctx = first.context
    n = first.nvars
    if len(f) != n or len(y) != n:
        raise ContextMismatchError(f"Need {n} equations and {n} target coordinates")
    if n == 1:
        return fiber_sum_univariate(first, y[0])

    target = tuple(ctx.element(v) for v in y)
    symbols = first.symbols()
    system = [(fi - t).to_sympy() for fi, t in zip(f, target, strict=True)]
    if all(sympy.expand(p) == 0 for p in system):
        raise UnresolvedFiberError("Fiber is the whole space")

    rational: list[FiberEntry] = []
    closed: list[FiberEntry] = []
    for coords, extension in _solve(system, symbols, ctx):
        if extension is None:
            form = ekl_class(f, coords, list(target))  # type: ignore[arg-type]
            point = ClosedPoint.rational(ctx, coords)  # type: ignore[arg-type]
            rational.append(FiberEntry(point, form.size, form))
            continue
        point = ClosedPoint.in_extension(extension, coords)
        try:
            form = local_degree_etale(f, point, list(target))
        except NotEtaleError as e:
            raise UnresolvedFiberError(f"Non-rational point {point} is not etale") from e
        closed.append(FiberEntry(point, 1, form))

    rational.sort(key=lambda e: _point_key(e.point))
    entries = tuple(rational + closed)
    logger.debug("Fiber over %s: %d closed points", [str(t) for t in target], len(entries))
    return FiberReport(target, entries, _sum_forms(ctx, [e.form for e in entries]))


@dataclass(frozen=True)
class ConservationReport:
    """Fiber totals over several y and whether they agree.

    Attributes:
        reports: Fiber reports sorted by y
        classifier: Field whose classification rules were applied
        witnesses: Differences against the first fiber total
    """

    reports: tuple[FiberReport, ...]
    classifier: FieldContext
    witnesses: tuple[tuple[int, Difference], ...] = ()

    @property
    def passed(self) -> bool:
        return not self.witnesses


def conservation_check(
    f: Sequence[Polynomial],
    ys: Sequence[Sequence[Scalar]],
    classifier: FieldContext | None = None,
) -> ConservationReport:
    """Compare the fiber totals of f over every y in ys.

    Args:
        f: The map
        ys: Rational base points
        classifier: Read the totals over this field instead (e.g. RR for QQ input)
    """
    ctx = f[0].context
    classifier = classifier or ctx
    reports = sorted(
        (fiber_sum(f, y) for y in ys),
        key=lambda r: [ctx.to_fraction(t.value) for t in r.y],
    )
    forms = [r.total.with_context(classifier) for r in reports]
    witnesses = []
    for k, form in enumerate(forms[1:], start=1):
        diff = first_difference(forms[0], form)
        if diff is not None:
            witnesses.append((k, diff))
    return ConservationReport(tuple(reports), classifier, tuple(witnesses))


@dataclass(frozen=True)
class ObstructionResult:
    """Outcome of comparing the Milnor number with a sum of node types."""

    milnor: SymmetricForm
    nodes: SymmetricForm
    witness: Difference | None

    @property
    def obstructed(self) -> bool:
        return self.witness is not None


def bifurcation_obstruction(
    g: Polynomial,
    node_types: Sequence[SymmetricForm],
    field: FieldContext | None = None,
) -> ObstructionResult:
    """Whether g can bifurcate into nodes of the given arithmetic types.

    The bifurcation is obstructed when the Milnor number of g and the sum of
    node types differ over the classifier field; the witness names the first
    differing invariant.
    """
    classifier = field or g.context
    mu = milnor_number(g).with_context(classifier)
    nodes = _sum_forms(classifier, [q.with_context(classifier) for q in node_types])
    return ObstructionResult(mu, nodes, first_difference(mu, nodes))


def bifurcation_fiber(g: Polynomial, a: Sequence[Scalar]) -> FiberReport:
    """Critical points of g + sum a_i x_i, i.e. the fiber of grad(g) over -a."""
    ctx = g.context
    return fiber_sum(gradient(g), [ctx.neg(ctx.convert(v)) for v in a])
