"""Exact base fields, square classes and local symbols.

A ``FieldContext`` says which field the numbers live in and how forms over it
are classified. Elements of QQ, RR and Qp:<p> are exact rationals; the three
contexts differ only in how square classes and Hilbert symbols are decided.
Elements of Fp:<p> are residues in ``range(p)``.

Example:
    >>> from ekldeg.fields import FieldContext, reduce_square_class
    >>> QQ = FieldContext.parse("QQ")
    >>> str(reduce_square_class(QQ.element(8)))
    '2'
    >>> hilbert_symbol(2, 5, 5)
    -1
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from collections.abc import Sequence
from functools import cached_property
from typing import Any, Literal, Union

import sympy
from sympy.functions.combinatorial.numbers import legendre_symbol as _sympy_legendre
from sympy.ntheory.factor_ import core
from sympy.polys.domains import GF, QQ, Domain
from sympy.polys.matrices import DomainMatrix

from .exceptions import ContextMismatchError, InvalidFieldSpecError, ZeroElementError

logger = logging.getLogger(__name__)

Raw = Union[Fraction, int]
Scalar = Union[int, Fraction, "FieldElement"]

INFINITY: Literal["inf"] = "inf"
Place = Union[int, Literal["inf"]]


class FieldKind(str, Enum):
    """Kinds of base field."""

    RATIONALS = "QQ"
    REAL = "RR"
    PRIME_FIELD = "Fp"
    PADIC = "Qp"


@dataclass(frozen=True)
class FieldContext:
    """A base field together with its classification regime.

    Attributes:
        kind: Which field this is
        p: The prime for Fp and Qp contexts, None otherwise
    """

    kind: FieldKind
    p: int | None = None

    def __post_init__(self) -> None:
        if self.kind in (FieldKind.PRIME_FIELD, FieldKind.PADIC):
            if self.p is None or not sympy.isprime(self.p):
                raise InvalidFieldSpecError(
                    f"{self.kind.value} needs a prime, got {self.p}"
                )
        elif self.p is not None:
            raise InvalidFieldSpecError(f"{self.kind.value} takes no prime")

    @classmethod
    def rationals(cls) -> FieldContext:
        return cls(FieldKind.RATIONALS)

    @classmethod
    def real(cls) -> FieldContext:
        return cls(FieldKind.REAL)

    @classmethod
    def prime_field(cls, p: int) -> FieldContext:
        return cls(FieldKind.PRIME_FIELD, p)

    @classmethod
    def padic(cls, p: int) -> FieldContext:
        return cls(FieldKind.PADIC, p)

    @classmethod
    def parse(cls, spec: str) -> FieldContext:
        """Parse a field spec string: "QQ", "RR", "Fp:<p>" or "Qp:<p>"."""
        text = spec.strip()
        if text == "QQ":
            return cls.rationals()
        if text == "RR":
            return cls.real()
        head, sep, tail = text.partition(":")
        if sep and head in ("Fp", "Qp"):
            try:
                p = int(tail)
            except ValueError as e:
                raise InvalidFieldSpecError(f"Invalid prime in field spec: {spec}") from e
            kind = FieldKind.PRIME_FIELD if head == "Fp" else FieldKind.PADIC
            return cls(kind, p)
        raise InvalidFieldSpecError(
            f"Unknown field spec '{spec}' (expected QQ, RR, Fp:<p> or Qp:<p>)"
        )

    @property
    def spec(self) -> str:
        if self.p is None:
            return self.kind.value
        return f"{self.kind.value}:{self.p}"

    def __str__(self) -> str:
        return self.spec

    @property
    def characteristic(self) -> int:
        return self.p if self.kind is FieldKind.PRIME_FIELD else 0  # type: ignore[return-value]

    @property
    def is_rational_type(self) -> bool:
        """True when elements are exact rationals (QQ, RR, Qp)."""
        return self.kind is not FieldKind.PRIME_FIELD

    @property
    def is_char2(self) -> bool:
        return self.characteristic == 2

    @cached_property
    def non_residue(self) -> int:
        """The smallest positive quadratic non-residue mod p (odd p only)."""
        if self.p is None or self.p == 2:
            raise ValueError(f"{self.spec} has no odd prime")
        return smallest_non_residue(self.p)

    # -- raw arithmetic ---------------------------------------------------

    @property
    def zero(self) -> Raw:
        return 0 if self.kind is FieldKind.PRIME_FIELD else Fraction(0)

    @property
    def one(self) -> Raw:
        return 1 if self.kind is FieldKind.PRIME_FIELD else Fraction(1)

    def convert(self, value: Scalar | str) -> Raw:
        """Bring an int, Fraction, decimal string or FieldElement into this field."""
        if isinstance(value, FieldElement):
            if value.context != self:
                raise ContextMismatchError(
                    f"Element of {value.context} used in {self}"
                )
            return value.value
        if isinstance(value, str):
            value = Fraction(value)
        if self.kind is FieldKind.PRIME_FIELD:
            p = self.p  # type: ignore[assignment]
            frac = Fraction(value)
            if frac.denominator % p == 0:
                raise ZeroElementError(
                    f"Denominator of {frac} vanishes in {self.spec}"
                )
            return frac.numerator * pow(frac.denominator, -1, p) % p
        return Fraction(value)

    def add(self, a: Raw, b: Raw) -> Raw:
        if self.kind is FieldKind.PRIME_FIELD:
            return (a + b) % self.p  # type: ignore[operator]
        return a + b

    def sub(self, a: Raw, b: Raw) -> Raw:
        if self.kind is FieldKind.PRIME_FIELD:
            return (a - b) % self.p  # type: ignore[operator]
        return a - b

    def mul(self, a: Raw, b: Raw) -> Raw:
        if self.kind is FieldKind.PRIME_FIELD:
            return (a * b) % self.p  # type: ignore[operator]
        return a * b

    def neg(self, a: Raw) -> Raw:
        if self.kind is FieldKind.PRIME_FIELD:
            return (-a) % self.p  # type: ignore[operator]
        return -a

    def inv(self, a: Raw) -> Raw:
        if a == 0:
            raise ZeroElementError(f"Division by zero in {self.spec}")
        if self.kind is FieldKind.PRIME_FIELD:
            return pow(int(a), -1, self.p)  # type: ignore[arg-type]
        return 1 / Fraction(a)

    def div(self, a: Raw, b: Raw) -> Raw:
        return self.mul(a, self.inv(b))

    def power(self, a: Raw, e: int) -> Raw:
        if e < 0:
            return self.power(self.inv(a), -e)
        if self.kind is FieldKind.PRIME_FIELD:
            return pow(int(a), e, self.p)
        return Fraction(a) ** e

    def element(self, value: Scalar | str) -> FieldElement:
        return FieldElement(self, self.convert(value))

    def to_fraction(self, a: Raw) -> Fraction:
        """The rational represented by a raw value (residues map to 0..p-1)."""
        return Fraction(a)

    def to_sympy(self, a: Raw) -> sympy.Expr:
        frac = Fraction(a)
        return sympy.Rational(frac.numerator, frac.denominator)

    def from_sympy(self, value: sympy.Expr) -> Raw:
        rational = sympy.Rational(value)
        return self.convert(Fraction(int(rational.p), int(rational.q)))

    def format(self, a: Raw) -> str:
        return str(a)

    def sympy_options(self) -> dict[str, object]:
        """Keyword arguments that put sympy polynomials over this field."""
        if self.kind is FieldKind.PRIME_FIELD:
            return {"modulus": self.p}
        return {"domain": "QQ"}

    # -- sympy matrices ---------------------------------------------------

    @cached_property
    def domain(self) -> Domain:
        """The sympy ground domain: QQ, or GF(p) with residues 0..p-1."""
        if self.kind is FieldKind.PRIME_FIELD:
            return GF(self.p, symmetric=False)
        return QQ

    def to_domain(self, a: Raw) -> Any:
        if self.kind is FieldKind.PRIME_FIELD:
            return self.domain(int(a))
        frac = Fraction(a)
        return self.domain(frac.numerator, frac.denominator)

    def from_domain(self, value: Any) -> Raw:
        if self.kind is FieldKind.PRIME_FIELD:
            return int(self.domain.to_int(value)) % self.p  # type: ignore[operator]
        return Fraction(int(self.domain.numer(value)), int(self.domain.denom(value)))

    def matrix(self, rows: Sequence[Sequence[Raw]], ncols: int | None = None) -> DomainMatrix:
        """Rows of raw values as a DomainMatrix over this field.

        Example:
            >>> F5 = FieldContext.prime_field(5)
            >>> F5.from_domain(F5.matrix([[1, 2], [3, 4]]).det())
            3
        """
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        elements = [[self.to_domain(v) for v in row] for row in rows]
        return DomainMatrix(elements, (len(rows), ncols), self.domain)

    def rows(self, matrix: DomainMatrix) -> list[list[Raw]]:
        """Raw values of a DomainMatrix over this field, row by row."""
        return [[self.from_domain(v) for v in row] for row in matrix.to_list()]

    def determinant(self, rows: Sequence[Sequence[Raw]]) -> Raw:
        if not rows:
            return self.one
        return self.from_domain(self.matrix(rows).det())


@dataclass(frozen=True)
class FieldElement:
    """An exact element of a base field."""

    context: FieldContext
    value: Raw

    def _coerce(self, other: Scalar) -> Raw:
        return self.context.convert(other)

    def __add__(self, other: Scalar) -> FieldElement:
        return FieldElement(self.context, self.context.add(self.value, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other: Scalar) -> FieldElement:
        return FieldElement(self.context, self.context.sub(self.value, self._coerce(other)))

    def __rsub__(self, other: Scalar) -> FieldElement:
        return FieldElement(self.context, self.context.sub(self._coerce(other), self.value))

    def __mul__(self, other: Scalar) -> FieldElement:
        return FieldElement(self.context, self.context.mul(self.value, self._coerce(other)))

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> FieldElement:
        return FieldElement(self.context, self.context.div(self.value, self._coerce(other)))

    def __rtruediv__(self, other: Scalar) -> FieldElement:
        return FieldElement(self.context, self.context.div(self._coerce(other), self.value))

    def __neg__(self) -> FieldElement:
        return FieldElement(self.context, self.context.neg(self.value))

    def __pow__(self, exponent: int) -> FieldElement:
        return FieldElement(self.context, self.context.power(self.value, exponent))

    def __bool__(self) -> bool:
        return self.value != 0

    def is_zero(self) -> bool:
        return self.value == 0

    def inverse(self) -> FieldElement:
        return FieldElement(self.context, self.context.inv(self.value))

    def __str__(self) -> str:
        return self.context.format(self.value)


@dataclass(frozen=True)
class SquareClass:
    """A canonical representative of k*/(k*)^2.

    Representatives are integers: sign times squarefree part over QQ, sign
    over RR, 1 or the least non-residue over Fp, and one of {1, u, p, up}
    (odd p) or {±1, ±2, ±5, ±10} (p = 2) over Qp.
    """

    context: FieldContext
    representative: int

    def __mul__(self, other: SquareClass) -> SquareClass:
        if other.context != self.context:
            raise ContextMismatchError(f"{self.context} vs {other.context}")
        product = self.context.mul(
            self.context.convert(self.representative),
            self.context.convert(other.representative),
        )
        return reduce_square_class(FieldElement(self.context, product))

    @property
    def is_trivial(self) -> bool:
        return self.representative == 1

    def as_element(self) -> FieldElement:
        return self.context.element(self.representative)

    def __str__(self) -> str:
        return str(self.representative)


def smallest_non_residue(p: int) -> int:
    """Smallest positive integer that is not a square mod the odd prime p."""
    candidate = 2
    while legendre_symbol(candidate, p) != -1:
        candidate += 1
    return candidate


def legendre_symbol(a: int, p: int) -> int:
    """Legendre symbol (a/p) in {-1, 0, 1} for an odd prime p.

    Example:
        >>> legendre_symbol(2, 5)
        -1
    """
    if p == 2 or not sympy.isprime(p):
        raise ValueError(f"Legendre symbol needs an odd prime, got {p}")
    return int(_sympy_legendre(a % p, p))


def _split_valuation(a: Fraction, p: int) -> tuple[int, Fraction]:
    """Write a = p^alpha * u with u a p-adic unit."""
    num, den = a.numerator, a.denominator
    alpha_num = sympy.multiplicity(p, abs(num))
    alpha_den = sympy.multiplicity(p, den)
    unit = Fraction(num // p**alpha_num, den // p**alpha_den)
    return alpha_num - alpha_den, unit


def _unit_legendre(u: Fraction, p: int) -> int:
    return legendre_symbol(u.numerator * u.denominator, p)


def _unit_mod8(u: Fraction) -> int:
    # For odd d, d^-1 = d mod 8.
    return (u.numerator * u.denominator) % 8


def reduce_square_class(a: FieldElement) -> SquareClass:
    """Canonical square class of a nonzero element.

    Raises:
        ZeroElementError: If a is zero

    Example:
        >>> str(reduce_square_class(FieldContext.prime_field(7).element(3)))
        '3'
    """
    if a.is_zero():
        raise ZeroElementError("Zero has no square class")
    ctx = a.context
    kind = ctx.kind

    if kind is FieldKind.PRIME_FIELD:
        if ctx.p == 2 or legendre_symbol(int(a.value), ctx.p) == 1:  # type: ignore[arg-type]
            return SquareClass(ctx, 1)
        return SquareClass(ctx, ctx.non_residue)

    value = Fraction(a.value)
    sign = -1 if value < 0 else 1
    if kind is FieldKind.REAL:
        return SquareClass(ctx, sign)

    if kind is FieldKind.RATIONALS:
        magnitude = abs(value.numerator) * value.denominator
        return SquareClass(ctx, sign * int(core(magnitude, 2)))

    p = ctx.p  # type: ignore[assignment]
    alpha, unit = _split_valuation(value, p)
    if p == 2:
        unit_class = {1: 1, 3: -5, 5: 5, 7: -1}[_unit_mod8(unit)]
    else:
        unit_class = 1 if _unit_legendre(unit, p) == 1 else ctx.non_residue
    return SquareClass(ctx, unit_class * (p if alpha % 2 else 1))


def hilbert_symbol(a: int | Fraction, b: int | Fraction, place: Place) -> int:
    """Hilbert symbol (a, b) at a prime p or at the real place "inf".

    Raises:
        ZeroElementError: If a or b is zero

    Example:
        >>> hilbert_symbol(-1, -1, INFINITY)
        -1
    """
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ZeroElementError("Hilbert symbol of zero is undefined")
    if place == INFINITY:
        return -1 if a < 0 and b < 0 else 1

    p = int(place)
    alpha, u = _split_valuation(a, p)
    beta, v = _split_valuation(b, p)
    if p == 2:
        u8, v8 = _unit_mod8(u), _unit_mod8(v)

        def eps(x: int) -> int:
            return ((x - 1) // 2) % 2

        def omega(x: int) -> int:
            return ((x * x - 1) // 8) % 2

        exponent = eps(u8) * eps(v8) + alpha * omega(v8) + beta * omega(u8)
        return -1 if exponent % 2 else 1

    result = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    if beta % 2:
        result *= _unit_legendre(u, p)
    if alpha % 2:
        result *= _unit_legendre(v, p)
    return result


def relevant_places(values: list[Fraction]) -> list[Place]:
    """The real place, 2, and every prime dividing a numerator or denominator."""
    primes: set[int] = {2}
    for value in values:
        for part in (value.numerator, value.denominator):
            if abs(part) > 1:
                primes.update(int(q) for q in sympy.primefactors(abs(part)))
    return [INFINITY, *sorted(primes)]
