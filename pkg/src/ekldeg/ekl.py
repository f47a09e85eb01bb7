"""The EKL form of an isolated zero.

Pipeline: move the point to the origin, compute the local algebra Q, take
the distinguished socle element E = det(a_ij) of a linear splitting, pick a
functional phi with phi(E) = 1 and build the Gram matrix of
(a, b) -> phi(a * b) on the staircase basis.

Example:
    >>> from ekldeg.fields import FieldContext
    >>> from ekldeg.gw import present
    >>> from ekldeg.poly import parse_polynomial
    >>> QQ = FieldContext.rationals()
    >>> f = [parse_polynomial(s, QQ, ["x1", "x2"]) for s in ("2*x1", "3*x2^2")]
    >>> str(present(ekl_class(f)))
    '1*H'
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass

from .exceptions import (
    ContextMismatchError,
    DegenerateFormError,
    InternalContradictionError,
    NonRationalPointError,
    NotIsolatedZeroError,
    ZeroElementError,
)
from .extensions import ExtensionElement
from .fields import FieldContext, FieldElement, Raw, Scalar
from .gw import SymmetricForm
from .poly import Monomial, Polynomial, determinant, jacobian_det, linear_splitting, translate
from .standard_basis import LocalAlgebra, standard_basis

logger = logging.getLogger(__name__)

PointLike = Sequence[Scalar | ExtensionElement]


@dataclass(frozen=True)
class Functional:
    """A linear functional on Q given by its values on the staircase basis."""

    context: FieldContext
    coefficients: tuple[Raw, ...]
    monomial: Monomial

    def __call__(self, coordinates: Sequence[Raw]) -> Raw:
        ctx = self.context
        total = ctx.zero
        for c, v in zip(self.coefficients, coordinates, strict=True):
            if c and v:
                total = ctx.add(total, ctx.mul(c, v))
        return total


@dataclass(frozen=True)
class EKLComputation:
    """Everything computed on the way to the EKL form.

    Attributes:
        algebra: The local algebra at the origin
        socle: Normal form of E as a polynomial
        e_coordinates: Staircase coordinates of NF(E)
        phi: The functional with phi(E) = 1
        gram: The Gram matrix of the EKL form
    """

    algebra: LocalAlgebra
    socle: Polynomial
    e_coordinates: tuple[Raw, ...]
    phi: Functional
    gram: SymmetricForm


def socle_element(
    f: Sequence[Polynomial], algebra: LocalAlgebra, reverse: bool = False
) -> Polynomial:
    """NF(det(a_ij)) for the telescoping splitting of f.

    Raises:
        NotIsolatedZeroError: If the origin is not a zero of f
        InternalContradictionError: If the normal form of E vanishes
    """
    if algebra.dimension == 0:
        raise NotIsolatedZeroError("The origin is not a zero of f")
    e = determinant(linear_splitting(f, reverse=reverse))
    nf = algebra.normal_form(e)
    if nf.is_zero():
        raise InternalContradictionError("Socle element E reduces to zero")
    return nf


def choose_functional(
    algebra: LocalAlgebra, e_coordinates: Sequence[Raw], monomial: Monomial | None = None
) -> Functional:
    """phi = (1/c) * (coefficient of m*), with phi(E) = 1.

    By default m* is the largest staircase monomial (local order) whose
    coefficient c in NF(E) is nonzero. An explicit monomial may be passed.

    Raises:
        ZeroElementError: If the chosen monomial has coefficient zero in E
    """
    ctx = algebra.context
    if monomial is None:
        index = next((k for k, c in enumerate(e_coordinates) if c != 0), None)
        if index is None:
            raise InternalContradictionError("Socle element has no nonzero coordinate")
    else:
        monomial = Monomial(monomial)
        index = algebra.staircase.index(monomial) if monomial in algebra.staircase else None
        if index is None or e_coordinates[index] == 0:
            raise ZeroElementError(
                f"Coefficient of {algebra.format_monomial(monomial)} in E is zero"
            )
    coefficients = [ctx.zero] * algebra.dimension
    coefficients[index] = ctx.inv(e_coordinates[index])
    chosen = algebra.staircase[index]
    logger.debug("Functional reads the coefficient of %s", algebra.format_monomial(chosen))
    return Functional(ctx, tuple(coefficients), chosen)


def gram_matrix(algebra: LocalAlgebra, phi: Functional) -> SymmetricForm:
    """G_kl = phi(NF(B_k * B_l)) on the staircase basis.

    Raises:
        DegenerateFormError: If the Gram matrix is singular
    """
    ctx = algebra.context
    n = algebra.dimension
    values: dict[Monomial, Raw] = {}
    rows = [[ctx.zero] * n for _ in range(n)]
    for k in range(n):
        for l in range(k, n):  # noqa: E741
            product = algebra.staircase[k].times(algebra.staircase[l])
            if product not in values:
                values[product] = phi(algebra.coordinates(algebra.monomial(product)))
            rows[k][l] = rows[l][k] = values[product]
    if ctx.determinant(rows) == 0:
        raise DegenerateFormError("EKL Gram matrix is singular")
    return SymmetricForm(ctx, tuple(tuple(row) for row in rows))


def jacobian_element(f: Sequence[Polynomial], algebra: LocalAlgebra) -> list[Raw]:
    """Staircase coordinates of NF(det(df_i/dx_j))."""
    return algebra.coordinates(jacobian_det(f))


def _rational_point(context: FieldContext, point: PointLike) -> list[Raw]:
    coords = []
    for value in point:
        if isinstance(value, ExtensionElement):
            if not value.is_rational():
                raise NonRationalPointError(f"Point coordinate {value} is not rational")
            value = value.rational_part()
        coords.append(context.convert(value))
    return coords


def _centered(
    f: Sequence[Polynomial], x: PointLike | None, y: PointLike | None
) -> list[Polynomial]:
    first = f[0]
    n = first.nvars
    if len(f) != n:
        raise ContextMismatchError(f"{len(f)} equations in {n} variables")
    ctx = first.context
    point = _rational_point(ctx, x) if x is not None else [ctx.zero] * n
    if len(point) != n:
        raise ContextMismatchError(f"Point has {len(point)} coordinates, need {n}")
    moved = [translate(fi, point) for fi in f]
    values = [g.constant_term for g in moved]
    if y is not None:
        target = _rational_point(ctx, y)
        if [v.value for v in values] != target:
            raise NotIsolatedZeroError(
                f"f(x) = {[str(v) for v in values]} differs from y = {[str(t) for t in y]}"
            )
    return [g - v for g, v in zip(moved, values, strict=True)]


def ekl_computation(
    f: Sequence[Polynomial],
    x: PointLike | None = None,
    y: PointLike | None = None,
    monomial: Monomial | None = None,
    reverse_splitting: bool = False,
) -> EKLComputation:
    """Run the whole pipeline and keep the intermediate data.

    Args:
        f: n polynomials in n variables
        x: Rational point, the origin by default
        y: Expected value f(x); checked when given
        monomial: Staircase monomial for phi instead of the default choice
        reverse_splitting: Split f by eliminating variables in reverse order

    Raises:
        NonRationalPointError: If x has non-rational coordinates
        NotIsolatedZeroError: If x is not an isolated zero of f - f(x)
    """
    centered = _centered(f, x, y)
    algebra = standard_basis(centered)
    socle = socle_element(centered, algebra, reverse=reverse_splitting)
    e_coordinates = tuple(algebra.coordinates(socle))
    phi = choose_functional(algebra, e_coordinates, monomial)
    gram = gram_matrix(algebra, phi)
    return EKLComputation(algebra, socle, e_coordinates, phi, gram)


def ekl_class(
    f: Sequence[Polynomial],
    x: PointLike | None = None,
    y_shift: PointLike | None = None,
) -> SymmetricForm:
    """The EKL form representing the local degree of f at x."""
    return ekl_computation(f, x, y_shift).gram


def socle_check(computation: EKLComputation) -> bool:
    """True when x_i * E vanishes in Q for every variable."""
    algebra = computation.algebra
    variables = [
        Polynomial.variable(algebra.context, algebra.variables, i) for i in range(algebra.nvars)
    ]
    return all(algebra.contains(computation.socle * x) for x in variables)


def functional_value(computation: EKLComputation) -> FieldElement:
    """phi(E); equal to one by construction."""
    return FieldElement(computation.algebra.context, computation.phi(computation.e_coordinates))


