"""Simple plane curve singularities and their arithmetic Milnor numbers.

The corpus holds A_1 ... A_6, D_4 ... D_6 and E_6 ... E_8 in two variables
together with the closed formula for mu^{A^1} over QQ. ``ade_table`` computes
every Milnor number and compares it with the formula class.

Example:
    >>> row = evaluate_row(singularity("E7"))
    >>> row.passed, str(row.expected_presentation)
    (True, '3*H + <-3>')
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .degree import milnor_number
from .fields import FieldContext
from .gw import (
    Difference,
    Presentation,
    SymmetricForm,
    diagonal_form,
    direct_sum,
    first_difference,
    hyperbolic,
    invariants,
    present,
)
from .poly import Polynomial, parse_polynomial

logger = logging.getLogger(__name__)

VARIABLES = ("x1", "x2")


@dataclass(frozen=True)
class Singularity:
    """An ADE singularity g(x1, x2) and its formula class m*H + <d_1, ...>.

    Attributes:
        name: Label such as "A3" or "E7"
        equation: The defining polynomial as an expression string
        formula: The formula the expected class is read from
        h_multiplicity: Number of hyperbolic planes in the formula class
        residual: Diagonal entries of the formula class
    """

    name: str
    equation: str
    formula: str
    h_multiplicity: int
    residual: tuple[int, ...] = ()

    @property
    def milnor(self) -> int:
        """The classical Milnor number, the rank of the class."""
        return 2 * self.h_multiplicity + len(self.residual)

    def polynomial(self, context: FieldContext) -> Polynomial:
        return parse_polynomial(self.equation, context, VARIABLES)

    def expected(self, context: FieldContext) -> SymmetricForm:
        return direct_sum(
            hyperbolic(context, self.h_multiplicity),
            diagonal_form(context, list(self.residual)),
        )


def a_series(n: int) -> Singularity:
    """A_n: x1^2 + x2^(n+1)."""
    equation = f"x1^2 + x2^{n + 1}"
    if n % 2:
        return Singularity(f"A{n}", equation, "(n-1)/2*H + <2(n+1)>", (n - 1) // 2, (2 * (n + 1),))
    return Singularity(f"A{n}", equation, "n/2*H", n // 2)


def d_series(n: int) -> Singularity:
    """D_n: x2*(x1^2 + x2^(n-2))."""
    equation = f"x2*(x1^2 + x2^{n - 2})"
    if n % 2:
        return Singularity(f"D{n}", equation, "(n-1)/2*H + <-2>", (n - 1) // 2, (-2,))
    return Singularity(
        f"D{n}", equation, "(n-2)/2*H + <-2, 2(n-1)>", (n - 2) // 2, (-2, 2 * (n - 1))
    )


E_SERIES = (
    Singularity("E6", "x1^3 + x2^4", "3*H", 3),
    Singularity("E7", "x1*(x1^2 + x2^3)", "3*H + <-3>", 3, (-3,)),
    Singularity("E8", "x1^3 + x2^5", "4*H", 4),
)


def corpus() -> list[Singularity]:
    """A_1 ... A_6, D_4 ... D_6 and E_6 ... E_8, in that order."""
    return [
        *(a_series(n) for n in range(1, 7)),
        *(d_series(n) for n in range(4, 7)),
        *E_SERIES,
    ]


def singularity(name: str) -> Singularity:
    """Look up a corpus entry by name.

    Raises:
        KeyError: If the name is not in the corpus
    """
    for entry in corpus():
        if entry.name == name:
            return entry
    raise KeyError(name)


@dataclass(frozen=True)
class ADERow:
    """Computed and expected classes of one corpus entry."""

    singularity: Singularity
    computed: SymmetricForm
    expected: SymmetricForm
    witness: Difference | None

    @property
    def passed(self) -> bool:
        return self.witness is None

    @property
    def computed_presentation(self) -> Presentation:
        return present(self.computed)

    @property
    def expected_presentation(self) -> Presentation:
        return present(self.expected)


def evaluate_row(entry: Singularity, context: FieldContext | None = None) -> ADERow:
    """Compute mu^{A^1} of one entry and compare it with its formula class."""
    ctx = context or FieldContext.rationals()
    computed = milnor_number(entry.polynomial(ctx))
    expected = entry.expected(ctx)
    witness = first_difference(computed, expected)
    if witness is not None:
        logger.warning("%s: computed class differs from the formula (%s)", entry.name, witness)
    else:
        logger.debug("%s: %s", entry.name, invariants(computed))
    return ADERow(entry, computed, expected, witness)


def ade_table(context: FieldContext | None = None) -> list[ADERow]:
    """Evaluate every corpus entry."""
    return [evaluate_row(entry, context) for entry in corpus()]
