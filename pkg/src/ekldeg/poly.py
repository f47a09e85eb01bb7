"""Sparse multivariate polynomials over a base field.

A polynomial is a map from exponent tuples (``Monomial``) to nonzero raw
coefficients of its ``FieldContext``. Polynomials are immutable; arithmetic
returns new objects in canonical sparse form.

Expressions are read with sympy's parser restricted to the grammar
integers, p/q rationals, identifiers ``[A-Za-z][A-Za-z0-9_]*``, ``+ - * ^``,
parentheses and unary minus.

Example:
    >>> from ekldeg.fields import FieldContext
    >>> QQ = FieldContext.rationals()
    >>> f = parse_polynomial("x1^2 + x2^3", QQ, ["x1", "x2"])
    >>> [str(g) for g in gradient(f)]
    ['2*x1', '3*x2^2']
"""

from __future__ import annotations

import logging
import re
from collections.abc import Iterable, Iterator, Mapping, Sequence
from enum import Enum
from fractions import Fraction
from math import comb
from typing import Union

import sympy
from sympy.parsing.sympy_parser import (
    convert_xor,
    parse_expr,
    standard_transformations,
)
from sympy.polys.polyerrors import BasePolynomialError

from .exceptions import ContextMismatchError, EKLDegError, ParseError
from .extensions import ExtensionElement
from .fields import FieldContext, FieldElement, Raw, Scalar

logger = logging.getLogger(__name__)

Value = Union[FieldElement, ExtensionElement]
PolyMatrix = list[list["Polynomial"]]

_IDENTIFIER = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_ALLOWED_CHARS = re.compile(r"^[0-9A-Za-z_+\-*/^()\s]*$")
_TRANSFORMATIONS = standard_transformations + (convert_xor,)


class Monomial(tuple):
    """Exponent vector of a monomial."""

    __slots__ = ()

    def __new__(cls, exponents: Iterable[int]) -> Monomial:
        return super().__new__(cls, tuple(int(e) for e in exponents))

    @classmethod
    def one(cls, n: int) -> Monomial:
        return cls((0,) * n)

    @classmethod
    def variable(cls, n: int, i: int) -> Monomial:
        return cls(1 if k == i else 0 for k in range(n))

    @property
    def degree(self) -> int:
        return sum(self)

    def times(self, other: Monomial) -> Monomial:
        return Monomial(a + b for a, b in zip(self, other, strict=True))

    def divides(self, other: Monomial) -> bool:
        return all(a <= b for a, b in zip(self, other, strict=True))

    def quotient(self, divisor: Monomial) -> Monomial:
        return Monomial(a - b for a, b in zip(self, divisor, strict=True))

    def lcm(self, other: Monomial) -> Monomial:
        return Monomial(max(a, b) for a, b in zip(self, other, strict=True))

    def is_coprime(self, other: Monomial) -> bool:
        return all(a == 0 or b == 0 for a, b in zip(self, other, strict=True))

    def pure_power_index(self) -> int | None:
        """Index i when the monomial is x_i^d with d >= 1, else None."""
        support = [i for i, e in enumerate(self) if e]
        return support[0] if len(support) == 1 else None


class MonomialOrder(str, Enum):
    """Monomial orders. Larger ``key`` means larger monomial."""

    LOCAL_DEGREVLEX = "ds"
    GLOBAL_DEGREVLEX = "dp"

    def key(self, m: Monomial) -> tuple[int, tuple[int, ...]]:
        tie = tuple(-e for e in reversed(m))
        if self is MonomialOrder.LOCAL_DEGREVLEX:
            return (-m.degree, tie)
        return (m.degree, tie)

    def sorted(self, monomials: Iterable[Monomial], descending: bool = True) -> list[Monomial]:
        return sorted(monomials, key=self.key, reverse=descending)


LOCAL = MonomialOrder.LOCAL_DEGREVLEX
GLOBAL = MonomialOrder.GLOBAL_DEGREVLEX


class Polynomial:
    """An immutable sparse polynomial.

    Attributes:
        context: Base field of the coefficients
        variables: Ordered variable names
        terms: Monomial to nonzero raw coefficient
    """

    __slots__ = ("context", "variables", "terms", "_hash")

    def __init__(
        self,
        context: FieldContext,
        variables: Sequence[str],
        terms: Mapping[Monomial, Raw] | None = None,
    ):
        self.context = context
        self.variables = tuple(variables)
        n = len(self.variables)
        clean: dict[Monomial, Raw] = {}
        for mono, coeff in (terms or {}).items():
            if len(mono) != n:
                raise ContextMismatchError(
                    f"Monomial {tuple(mono)} does not match {n} variables"
                )
            if coeff != 0:
                clean[Monomial(mono)] = coeff
        self.terms: dict[Monomial, Raw] = clean
        self._hash: int | None = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, context: FieldContext, variables: Sequence[str]) -> Polynomial:
        return cls(context, variables)

    @classmethod
    def constant(
        cls, context: FieldContext, variables: Sequence[str], value: Scalar
    ) -> Polynomial:
        return cls(context, variables, {Monomial.one(len(variables)): context.convert(value)})

    @classmethod
    def variable(
        cls, context: FieldContext, variables: Sequence[str], name: str | int
    ) -> Polynomial:
        index = name if isinstance(name, int) else list(variables).index(name)
        return cls(context, variables, {Monomial.variable(len(variables), index): context.one})

    @classmethod
    def monomial(
        cls,
        context: FieldContext,
        variables: Sequence[str],
        exponents: Sequence[int],
        coefficient: Scalar = 1,
    ) -> Polynomial:
        return cls(context, variables, {Monomial(exponents): context.convert(coefficient)})

    def _like(self, terms: Mapping[Monomial, Raw]) -> Polynomial:
        return Polynomial(self.context, self.variables, terms)

    # -- inspection -------------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(m.degree == 0 for m in self.terms)

    @property
    def total_degree(self) -> int:
        return max((m.degree for m in self.terms), default=-1)

    @property
    def low_degree(self) -> int:
        """Smallest total degree of a term (order at the origin)."""
        return min((m.degree for m in self.terms), default=-1)

    def coefficient(self, monomial: Sequence[int]) -> FieldElement:
        return FieldElement(self.context, self.terms.get(Monomial(monomial), self.context.zero))

    @property
    def constant_term(self) -> FieldElement:
        return self.coefficient(Monomial.one(self.nvars))

    def leading_monomial(self, order: MonomialOrder) -> Monomial:
        return max(self.terms, key=order.key)

    def leading_coefficient(self, order: MonomialOrder) -> Raw:
        return self.terms[self.leading_monomial(order)]

    def ecart(self, order: MonomialOrder = LOCAL) -> int:
        """Total degree minus the degree of the leading monomial."""
        return self.total_degree - self.leading_monomial(order).degree

    def monomials(self, order: MonomialOrder = GLOBAL) -> list[Monomial]:
        return order.sorted(self.terms)

    def __iter__(self) -> Iterator[tuple[Monomial, Raw]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: Polynomial) -> None:
        if other.context != self.context or other.variables != self.variables:
            raise ContextMismatchError(
                f"Polynomials over {self.context}{list(self.variables)} and "
                f"{other.context}{list(other.variables)}"
            )

    def _lift(self, other: Polynomial | Scalar) -> Polynomial:
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(self.context, self.variables, other)

    def __add__(self, other: Polynomial | Scalar) -> Polynomial:
        o = self._lift(other)
        ctx = self.context
        terms = dict(self.terms)
        for mono, coeff in o.terms.items():
            terms[mono] = ctx.add(terms[mono], coeff) if mono in terms else coeff
        return self._like(terms)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        ctx = self.context
        return self._like({m: ctx.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other: Polynomial | Scalar) -> Polynomial:
        return self + (-self._lift(other))

    def __rsub__(self, other: Polynomial | Scalar) -> Polynomial:
        return self._lift(other) + (-self)

    def __mul__(self, other: Polynomial | Scalar) -> Polynomial:
        if not isinstance(other, Polynomial):
            return self.scalar_mul(other)
        self._check(other)
        ctx = self.context
        terms: dict[Monomial, Raw] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = m1.times(m2)
                prod = ctx.mul(c1, c2)
                terms[mono] = ctx.add(terms[mono], prod) if mono in terms else prod
        return self._like(terms)

    def __rmul__(self, other: Scalar) -> Polynomial:
        return self.scalar_mul(other)

    def scalar_mul(self, scalar: Scalar) -> Polynomial:
        ctx = self.context
        c = ctx.convert(scalar)
        if c == 0:
            return self._like({})
        return self._like({m: ctx.mul(c, v) for m, v in self.terms.items()})

    def monomial_mul(self, monomial: Monomial, coefficient: Raw) -> Polynomial:
        """coefficient * monomial * self."""
        ctx = self.context
        return self._like(
            {m.times(monomial): ctx.mul(coefficient, c) for m, c in self.terms.items()}
        )

    def __pow__(self, exponent: int) -> Polynomial:
        if exponent < 0:
            raise ValueError("Negative powers of polynomials are not polynomials")
        result = Polynomial.constant(self.context, self.variables, 1)
        square = self
        while exponent:
            if exponent & 1:
                result = result * square
            square = square * square
            exponent >>= 1
        return result

    def truncate(self, max_degree: int) -> Polynomial:
        """Drop every term of total degree above max_degree."""
        return self._like({m: c for m, c in self.terms.items() if m.degree <= max_degree})

    def derivative(self, index: int) -> Polynomial:
        ctx = self.context
        terms: dict[Monomial, Raw] = {}
        for mono, coeff in self.terms.items():
            e = mono[index]
            if e == 0:
                continue
            lowered = Monomial(x - 1 if k == index else x for k, x in enumerate(mono))
            terms[lowered] = ctx.mul(ctx.convert(e), coeff)
        return self._like(terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Polynomial):
            return (
                self.context == other.context
                and self.variables == other.variables
                and self.terms == other.terms
            )
        if isinstance(other, int | Fraction):
            return self.is_constant() and self.constant_term.value == self.context.convert(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.context, self.variables, frozenset(self.terms.items())))
        return self._hash

    def _format_monomial(self, mono: Monomial) -> str:
        parts = []
        for name, e in zip(self.variables, mono, strict=True):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        pieces: list[str] = []
        for mono in self.monomials(GLOBAL):
            coeff = self.context.to_fraction(self.terms[mono])
            negative = self.context.is_rational_type and coeff < 0
            magnitude = -coeff if negative else coeff
            body = self._format_monomial(mono)
            if not body:
                text = str(magnitude)
            elif magnitude == 1:
                text = body
            else:
                text = f"{magnitude}*{body}"
            if not pieces:
                pieces.append(f"-{text}" if negative else text)
            else:
                pieces.append(f"- {text}" if negative else f"+ {text}")
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"Polynomial({self}, over={self.context}, vars={list(self.variables)})"

    # -- sympy bridge -----------------------------------------------------

    def symbols(self) -> list[sympy.Symbol]:
        return [sympy.Symbol(name) for name in self.variables]

    def to_sympy(self) -> sympy.Expr:
        syms = self.symbols()
        expr = sympy.Integer(0)
        for mono, coeff in self.terms.items():
            term = self.context.to_sympy(coeff)
            for s, e in zip(syms, mono, strict=True):
                if e:
                    term *= s**e
            expr += term
        return expr

    @classmethod
    def from_sympy(
        cls, expr: sympy.Expr, context: FieldContext, variables: Sequence[str]
    ) -> Polynomial:
        syms = [sympy.Symbol(name) for name in variables]
        poly = sympy.Poly(expr, *syms, domain="QQ")
        return cls(
            context,
            variables,
            {Monomial(m): context.from_sympy(c) for m, c in poly.terms()},
        )


# ---------------------------------------------------------------------------
# Operations


def add(f: Polynomial, g: Polynomial) -> Polynomial:
    return f + g


def mul(f: Polynomial, g: Polynomial) -> Polynomial:
    return f * g


def scalar_mul(f: Polynomial, c: Scalar) -> Polynomial:
    return f.scalar_mul(c)


def power(f: Polynomial, e: int) -> Polynomial:
    return f**e


def gradient(f: Polynomial) -> list[Polynomial]:
    """Formal partial derivatives (df/dx_1, ..., df/dx_n)."""
    return [f.derivative(i) for i in range(f.nvars)]


def jacobian_matrix(f: Sequence[Polynomial]) -> PolyMatrix:
    return [[fi.derivative(j) for j in range(fi.nvars)] for fi in f]


def hessian(g: Polynomial) -> PolyMatrix:
    return jacobian_matrix(gradient(g))


def _check_square(rows: PolyMatrix) -> None:
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise ContextMismatchError("Determinant needs a square system")


def determinant(rows: PolyMatrix) -> Polynomial:
    """Determinant of a square polynomial matrix, by sympy's fraction-free Bareiss."""
    _check_square(rows)
    if not rows:
        raise ContextMismatchError("Determinant of an empty matrix")
    first = rows[0][0]
    matrix = sympy.Matrix([[entry.to_sympy() for entry in row] for row in rows])
    det = sympy.expand(matrix.det(method="bareiss"))
    return Polynomial.from_sympy(det, first.context, first.variables)


def jacobian_det(f: Sequence[Polynomial]) -> Polynomial:
    """det(df_i/dx_j), expanded exactly."""
    if len(f) != f[0].nvars:
        raise ContextMismatchError(f"{len(f)} equations in {f[0].nvars} variables")
    return determinant(jacobian_matrix(f))


def hessian_det(g: Polynomial) -> Polynomial:
    return determinant(hessian(g))


def linear_splitting(f: Sequence[Polynomial], reverse: bool = False) -> PolyMatrix:
    """Coefficients a_ij with f_i - f_i(0) = sum_j a_ij x_j.

    Uses the telescoping rule a_ij = (f_i(x_1..x_j,0..) - f_i(x_1..x_{j-1},0..)) / x_j,
    i.e. each term goes to the column of its last variable. With
    ``reverse=True`` the variables are eliminated in the opposite order, so
    each term goes to the column of its first variable.
    """
    n = f[0].nvars
    matrix: PolyMatrix = []
    for fi in f:
        columns: list[dict[Monomial, Raw]] = [{} for _ in range(n)]
        for mono, coeff in fi.terms.items():
            support = [k for k, e in enumerate(mono) if e]
            if not support:
                continue
            j = support[0] if reverse else support[-1]
            columns[j][mono.quotient(Monomial.variable(n, j))] = coeff
        matrix.append([Polynomial(fi.context, fi.variables, col) for col in columns])
    return matrix


def _embed_point(
    context: FieldContext, point: Sequence[Value | Scalar]
) -> tuple[list[Value], Value]:
    target = next((v for v in point if isinstance(v, ExtensionElement)), None)
    if target is not None:
        ext = target.field
        if ext.base != context:
            raise ContextMismatchError(f"Point over {ext.base} for polynomial over {context}")
        coords: list[Value] = [
            v if isinstance(v, ExtensionElement) else ext.embed(v) for v in point
        ]
        return coords, ext.zero
    return [context.element(v) for v in point], context.element(0)  # type: ignore[arg-type]


def evaluate(f: Polynomial, point: Sequence[Value | Scalar]) -> Value:
    """Exact value of f at a point of the base field or of a simple extension."""
    if len(point) != f.nvars:
        raise ContextMismatchError(f"Point has {len(point)} coordinates, need {f.nvars}")
    coords, zero = _embed_point(f.context, point)
    total = zero
    powers: dict[tuple[int, int], Value] = {}
    for mono, coeff in f.terms.items():
        term: Value = zero + FieldElement(f.context, coeff)  # type: ignore[operator]
        for i, e in enumerate(mono):
            if e:
                if (i, e) not in powers:
                    powers[(i, e)] = coords[i] ** e
                term = term * powers[(i, e)]  # type: ignore[operator]
        total = total + term  # type: ignore[operator]
    return total


def translate(f: Polynomial, a: Sequence[Scalar]) -> Polynomial:
    """f(x + a): moves the point a to the origin."""
    if len(a) != f.nvars:
        raise ContextMismatchError(f"Shift has {len(a)} coordinates, need {f.nvars}")
    ctx = f.context
    shift = [ctx.convert(v) for v in a]
    if all(s == 0 for s in shift):
        return f
    # (x_i + a_i)^e expanded once per (i, e)
    expansions: dict[tuple[int, int], dict[int, Raw]] = {}

    def expansion(i: int, e: int) -> dict[int, Raw]:
        if (i, e) not in expansions:
            expansions[(i, e)] = {
                k: ctx.mul(ctx.convert(comb(e, k)), ctx.power(shift[i], e - k))
                for k in range(e + 1)
            }
        return expansions[(i, e)]

    result: dict[Monomial, Raw] = {}
    for mono, coeff in f.terms.items():
        partial: dict[Monomial, Raw] = {Monomial.one(f.nvars): coeff}
        for i, e in enumerate(mono):
            if e == 0 or shift[i] == 0:
                if e:
                    partial = {
                        Monomial(x + e if k == i else x for k, x in enumerate(m)): c
                        for m, c in partial.items()
                    }
                continue
            grown: dict[Monomial, Raw] = {}
            for m, c in partial.items():
                for k, b in expansion(i, e).items():
                    if b == 0:
                        continue
                    key = Monomial(x + k if j == i else x for j, x in enumerate(m))
                    value = ctx.mul(c, b)
                    grown[key] = ctx.add(grown[key], value) if key in grown else value
            partial = grown
        for m, c in partial.items():
            result[m] = ctx.add(result[m], c) if m in result else c
    return Polynomial(ctx, f.variables, result)


def parse_polynomial(
    text: str, context: FieldContext, variables: Sequence[str]
) -> Polynomial:
    """Read a polynomial expression over the given variables.

    Raises:
        ParseError: On syntax errors, unknown identifiers or non-polynomial input

    Example:
        >>> from ekldeg.fields import FieldContext
        >>> str(parse_polynomial("(x-1)*(x+1)", FieldContext.rationals(), ["x"]))
        'x^2 - 1'
    """
    if not variables:
        raise ParseError("At least one variable is required")
    if not text or not text.strip():
        raise ParseError("Empty polynomial expression")
    if not _ALLOWED_CHARS.match(text):
        raise ParseError(f"Unexpected character in '{text}'")
    unknown = sorted(set(_IDENTIFIER.findall(text)) - set(variables))
    if unknown:
        raise ParseError(f"Unknown variables {unknown} in '{text}'")
    local_dict = {name: sympy.Symbol(name) for name in variables}
    try:
        expr = parse_expr(text, local_dict=local_dict, transformations=_TRANSFORMATIONS)
        return Polynomial.from_sympy(expr, context, variables)
    except EKLDegError:
        raise
    except (SyntaxError, TypeError, ValueError, sympy.SympifyError, BasePolynomialError) as e:
        raise ParseError(f"Cannot read polynomial '{text}': {e}") from e
    except Exception as e:
        # tokenizer errors and division by zero surface with assorted types
        raise ParseError(f"Cannot read polynomial '{text}': {e}") from e
