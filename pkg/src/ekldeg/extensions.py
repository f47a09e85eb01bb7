"""Simple field extensions k[t]/(m(t)) and their trace.

Elements are stored as coefficient tuples in the power basis 1, t, ...,
t^(d-1). The modulus is checked to be monic and irreducible with sympy
unless the caller promises irreducibility.

Example:
    >>> from ekldeg.fields import FieldContext
    >>> QQ = FieldContext.rationals()
    >>> L = SimpleExtension.from_coefficients(QQ, [-2, 0, 1])  # t^2 - 2
    >>> str(ext_trace(L.element([3, 1])))
    '6'
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Union

import sympy
from sympy.polys.matrices import DomainMatrix

from .exceptions import ContextMismatchError, ReducibleModulusError, ZeroElementError
from .fields import FieldContext, FieldElement, Raw, Scalar

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SimpleExtension:
    """The field base[t]/(modulus).

    Attributes:
        base: The base field
        modulus: Coefficients of the monic modulus, constant term first
        variable: Name of the generator, used for printing
    """

    base: FieldContext
    modulus: tuple[Raw, ...]
    variable: str = "t"
    assume_irreducible: bool = field(default=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.modulus) < 2:
            raise ReducibleModulusError("Extension modulus must have degree >= 1")
        if self.modulus[-1] != self.base.one:
            raise ReducibleModulusError("Extension modulus must be monic")
        if not self.assume_irreducible and self.degree > 1:
            t = sympy.Symbol(self.variable)
            coefficients = [self.base.to_sympy(c) for c in reversed(self.modulus)]
            poly = sympy.Poly(coefficients, t, **self.base.sympy_options())
            if not poly.is_irreducible:
                raise ReducibleModulusError(
                    f"Modulus {poly.as_expr()} is reducible over {self.base}"
                )

    @classmethod
    def from_coefficients(
        cls,
        base: FieldContext,
        coefficients: list[Scalar],
        variable: str = "t",
        assume_irreducible: bool = False,
    ) -> SimpleExtension:
        """Build an extension from (not necessarily monic) coefficients.

        Args:
            base: Base field
            coefficients: Modulus coefficients, constant term first
            variable: Generator name
            assume_irreducible: Skip the irreducibility check

        Raises:
            ReducibleModulusError: If the modulus is constant or reducible
        """
        raw = [base.convert(c) for c in coefficients]
        while raw and raw[-1] == 0:
            raw.pop()
        if len(raw) < 2:
            raise ReducibleModulusError("Extension modulus must have degree >= 1")
        lead = base.inv(raw[-1])
        monic = tuple(base.mul(c, lead) for c in raw)
        return cls(base, monic, variable, assume_irreducible)

    @property
    def degree(self) -> int:
        return len(self.modulus) - 1

    @property
    def generator(self) -> ExtensionElement:
        if self.degree == 1:
            return self.embed(self.base.neg(self.modulus[0]))
        coeffs = [self.base.zero] * self.degree
        coeffs[1] = self.base.one
        return ExtensionElement(self, tuple(coeffs))

    def element(self, coefficients: list[Scalar]) -> ExtensionElement:
        """Element from power-basis coefficients (reduced mod the modulus)."""
        raw = [self.base.convert(c) for c in coefficients]
        return ExtensionElement(self, self._reduce(raw))

    def embed(self, value: Scalar) -> ExtensionElement:
        coeffs = [self.base.zero] * self.degree
        coeffs[0] = self.base.convert(value)
        return ExtensionElement(self, tuple(coeffs))

    @property
    def zero(self) -> ExtensionElement:
        return self.embed(0)

    @property
    def one(self) -> ExtensionElement:
        return self.embed(1)

    def _reduce(self, coeffs: list[Raw]) -> tuple[Raw, ...]:
        base, d = self.base, self.degree
        coeffs = list(coeffs) + [base.zero] * max(0, d - len(coeffs))
        for k in range(len(coeffs) - 1, d - 1, -1):
            c = coeffs[k]
            if c == 0:
                continue
            for i in range(d):
                if self.modulus[i] != 0:
                    coeffs[k - d + i] = base.sub(coeffs[k - d + i], base.mul(c, self.modulus[i]))
            coeffs[k] = base.zero
        return tuple(coeffs[:d])

    def __str__(self) -> str:
        text = ""
        for k, c in reversed(list(enumerate(self.modulus))):
            if c == 0:
                continue
            value = self.base.to_fraction(c)
            negative = self.base.is_rational_type and value < 0
            magnitude = -value if negative else value
            mono = "" if k == 0 else (self.variable if k == 1 else f"{self.variable}^{k}")
            if mono and magnitude == 1:
                term = mono
            else:
                term = f"{magnitude}*{mono}" if mono else str(magnitude)
            if not text:
                text = f"-{term}" if negative else term
            else:
                text += f" - {term}" if negative else f" + {term}"
        return f"{self.base}[{self.variable}]/({text})"


@dataclass(frozen=True)
class ExtensionElement:
    """An element of a SimpleExtension, in the power basis."""

    field: SimpleExtension
    coefficients: tuple[Raw, ...]

    @property
    def base(self) -> FieldContext:
        return self.field.base

    def _coerce(self, other: Union[ExtensionElement, Scalar]) -> ExtensionElement:
        if isinstance(other, ExtensionElement):
            if other.field != self.field:
                raise ContextMismatchError("Elements of different extensions")
            return other
        return self.field.embed(other)

    def __add__(self, other: Union[ExtensionElement, Scalar]) -> ExtensionElement:
        o = self._coerce(other)
        base = self.base
        return ExtensionElement(
            self.field,
            tuple(base.add(a, b) for a, b in zip(self.coefficients, o.coefficients, strict=True)),
        )

    __radd__ = __add__

    def __neg__(self) -> ExtensionElement:
        return ExtensionElement(self.field, tuple(self.base.neg(a) for a in self.coefficients))

    def __sub__(self, other: Union[ExtensionElement, Scalar]) -> ExtensionElement:
        return self + (-self._coerce(other))

    def __rsub__(self, other: Union[ExtensionElement, Scalar]) -> ExtensionElement:
        return self._coerce(other) + (-self)

    def __mul__(self, other: Union[ExtensionElement, Scalar]) -> ExtensionElement:
        o = self._coerce(other)
        base = self.base
        product = [base.zero] * (2 * self.field.degree - 1)
        for i, a in enumerate(self.coefficients):
            if a == 0:
                continue
            for j, b in enumerate(o.coefficients):
                if b != 0:
                    product[i + j] = base.add(product[i + j], base.mul(a, b))
        return ExtensionElement(self.field, self.field._reduce(product))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> ExtensionElement:
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result, square = self.field.one, self
        while exponent:
            if exponent & 1:
                result = result * square
            square = square * square
            exponent >>= 1
        return result

    def __truediv__(self, other: Union[ExtensionElement, Scalar]) -> ExtensionElement:
        return self * self._coerce(other).inverse()

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coefficients)

    def is_rational(self) -> bool:
        """True when the element lies in the base field."""
        return all(c == 0 for c in self.coefficients[1:])

    def rational_part(self) -> FieldElement:
        return FieldElement(self.base, self.coefficients[0])

    def multiplication_matrix(self) -> DomainMatrix:
        """Matrix of multiplication by self; column j is self * t^j."""
        columns = []
        power = self.field.one
        t = self.field.generator
        for _ in range(self.field.degree):
            columns.append(list((self * power).coefficients))
            power = power * t
        return self.base.matrix(columns).transpose()

    def inverse(self) -> ExtensionElement:
        if self.is_zero():
            raise ZeroElementError(f"Division by zero in {self.field}")
        ctx = self.base
        rhs = [[ctx.one]] + [[ctx.zero] for _ in range(self.field.degree - 1)]
        solution = self.multiplication_matrix().lu_solve(ctx.matrix(rhs))
        return ExtensionElement(self.field, tuple(row[0] for row in ctx.rows(solution)))

    def __str__(self) -> str:
        parts = []
        var = self.field.variable
        for k, c in enumerate(self.coefficients):
            if c == 0:
                continue
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            if not mono:
                parts.append(self.base.format(c))
            elif c == self.base.one:
                parts.append(mono)
            else:
                parts.append(f"{self.base.format(c)}*{mono}")
        return " + ".join(parts) if parts else "0"


def ext_trace(e: ExtensionElement) -> FieldElement:
    """Trace of multiplication by e, read off the power-basis matrix.

    Example:
        >>> from ekldeg.fields import FieldContext
        >>> L = SimpleExtension.from_coefficients(FieldContext.rationals(), [1, 0, 1])
        >>> str(ext_trace(L.generator))
        '0'
    """
    base = e.base
    rows = base.rows(e.multiplication_matrix())
    total = base.zero
    for k in range(e.field.degree):
        total = base.add(total, rows[k][k])
    return FieldElement(base, total)
