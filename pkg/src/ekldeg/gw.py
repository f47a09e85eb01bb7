"""Symmetric bilinear forms and their classes in GW(k).

Classification rules per base field (characteristic not 2):

- ``RR``: rank and signature
- ``Fp:<p>``: rank and discriminant
- ``Qp:<p>``: rank, discriminant and Hasse invariant at p
- ``QQ``: rank, signature, discriminant and Hasse invariants at 2 and at
  every prime of a diagonal entry

In characteristic 2 only the rank is compared. The discriminant is the
plain determinant modulo squares, so the hyperbolic plane H has
discriminant -1.

Example:
    >>> from ekldeg.fields import FieldContext
    >>> Q5 = FieldContext.padic(5)
    >>> equals(hyperbolic(Q5, 1), diagonal_form(Q5, [1, 2]))
    False
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .config import Config
from .exceptions import (
    Char2UnsupportedError,
    ContextMismatchError,
    DegenerateFormError,
    ParseError,
    RankParityMismatchError,
    ZeroElementError,
)
from .extensions import ExtensionElement, SimpleExtension, ext_trace
from .fields import (
    INFINITY,
    FieldContext,
    FieldElement,
    FieldKind,
    Place,
    Raw,
    Scalar,
    SquareClass,
    hilbert_symbol,
    reduce_square_class,
    relevant_places,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SymmetricForm:
    """A symmetric bilinear form given by its Gram matrix.

    Attributes:
        context: Base field of the entries
        gram: Gram matrix rows of raw field values
    """

    context: FieldContext
    gram: tuple[tuple[Raw, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.gram)
        if any(len(row) != n for row in self.gram):
            raise ParseError("Gram matrix must be square")
        if any(self.gram[i][j] != self.gram[j][i] for i in range(n) for j in range(i)):
            raise ParseError("Gram matrix must be symmetric")

    @classmethod
    def from_matrix(
        cls, context: FieldContext, rows: Sequence[Sequence[Scalar | str]]
    ) -> SymmetricForm:
        return cls(context, tuple(tuple(context.convert(v) for v in row) for row in rows))

    @property
    def size(self) -> int:
        return len(self.gram)

    def matrix(self) -> list[list[Raw]]:
        return [list(row) for row in self.gram]

    def entry(self, i: int, j: int) -> FieldElement:
        return FieldElement(self.context, self.gram[i][j])

    @property
    def determinant(self) -> FieldElement:
        return FieldElement(self.context, self.context.determinant(self.gram))

    @property
    def is_nondegenerate(self) -> bool:
        return not self.determinant.is_zero()

    def with_context(self, context: FieldContext) -> SymmetricForm:
        """The same Gram matrix read in another field (reduced mod p for Fp)."""
        old = self.context
        return SymmetricForm(
            context,
            tuple(tuple(context.convert(old.to_fraction(v)) for v in row) for row in self.gram),
        )

    def __add__(self, other: SymmetricForm) -> SymmetricForm:
        return direct_sum(self, other)

    def __str__(self) -> str:
        rows = ", ".join(
            "[" + ", ".join(self.context.format(v) for v in row) + "]" for row in self.gram
        )
        return f"[{rows}]"


@dataclass(frozen=True)
class Presentation:
    """m*H plus a residual diagonal form."""

    h_multiplicity: int
    residual: tuple[SquareClass, ...]

    @property
    def rank(self) -> int:
        return 2 * self.h_multiplicity + len(self.residual)

    def to_form(self, context: FieldContext) -> SymmetricForm:
        return direct_sum(
            hyperbolic(context, self.h_multiplicity),
            diagonal_form(context, [d.representative for d in self.residual]),
        )

    def __str__(self) -> str:
        parts = []
        if self.h_multiplicity:
            parts.append(f"{self.h_multiplicity}*H")
        if self.residual:
            parts.append("<" + ",".join(str(d) for d in self.residual) + ">")
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class GWClass:
    """Classification invariants of a nondegenerate form.

    Attributes:
        context: Base field
        rank: Dimension of the form
        disc: Square class of the determinant (None in characteristic 2)
        signature: p_+ - p_- over QQ and RR, None otherwise
        hasse: (place, epsilon) pairs; places are "inf" or primes
        presentation: Hyperbolic presentation (None in characteristic 2)
    """

    context: FieldContext
    rank: int
    disc: SquareClass | None
    signature: int | None
    hasse: tuple[tuple[Place, int], ...]
    presentation: Presentation | None

    @property
    def char2(self) -> bool:
        return self.context.is_char2

    @property
    def hasse_map(self) -> dict[Place, int]:
        return dict(self.hasse)

    def to_dict(self) -> dict[str, Any]:
        return {
            "rank": self.rank,
            "disc": None if self.disc is None else str(self.disc),
            "signature": self.signature,
            "hasse": {str(place): eps for place, eps in self.hasse},
            "presentation": None if self.presentation is None else str(self.presentation),
        }

    def __str__(self) -> str:
        if self.presentation is None:
            return f"rank {self.rank}"
        return str(self.presentation)


@dataclass(frozen=True)
class Difference:
    """The first invariant in which two forms differ."""

    invariant: str
    left: str
    right: str

    def __str__(self) -> str:
        return f"{self.invariant}: {self.left} vs {self.right}"


def hyperbolic(context: FieldContext, m: int = 1) -> SymmetricForm:
    """m copies of the hyperbolic plane [[0,1],[1,0]]."""
    n = 2 * m
    rows = [[context.zero] * n for _ in range(n)]
    for k in range(m):
        rows[2 * k][2 * k + 1] = context.one
        rows[2 * k + 1][2 * k] = context.one
    return SymmetricForm(context, tuple(tuple(row) for row in rows))


def diagonal_form(context: FieldContext, entries: Sequence[Scalar | str]) -> SymmetricForm:
    n = len(entries)
    rows = [[context.zero] * n for _ in range(n)]
    for k, value in enumerate(entries):
        rows[k][k] = context.convert(value)
    return SymmetricForm(context, tuple(tuple(row) for row in rows))


def direct_sum(*forms: SymmetricForm) -> SymmetricForm:
    """Orthogonal sum; the empty sum needs at least one form for its context."""
    if not forms:
        raise ContextMismatchError("direct_sum needs at least one form")
    context = forms[0].context
    if any(q.context != context for q in forms):
        raise ContextMismatchError("Direct sum of forms over different fields")
    n = sum(q.size for q in forms)
    rows = [[context.zero] * n for _ in range(n)]
    offset = 0
    for q in forms:
        for i, row in enumerate(q.gram):
            for j, v in enumerate(row):
                rows[offset + i][offset + j] = v
        offset += q.size
    return SymmetricForm(context, tuple(tuple(row) for row in rows))


def _require_odd_characteristic(q: SymmetricForm, action: str) -> None:
    if q.context.is_char2:
        raise Char2UnsupportedError(f"Cannot {action} a form in characteristic 2")


def _require_nondegenerate(q: SymmetricForm) -> None:
    if not q.is_nondegenerate:
        raise DegenerateFormError(f"Form {q} is degenerate")


def diagonalize(q: SymmetricForm) -> list[FieldElement]:
    """Diagonal entries d_i with q isometric to <d_1, ..., d_r>.

    Symmetric Gaussian elimination. When every diagonal entry of the active
    block vanishes, e_i is replaced by e_i + e_j for some a_ij != 0, which
    puts a_ii + 2a_ij + a_jj = 2a_ij on the diagonal.

    Raises:
        Char2UnsupportedError: In characteristic 2
        DegenerateFormError: If the form is degenerate
    """
    _require_odd_characteristic(q, "diagonalize")
    _require_nondegenerate(q)
    ctx = q.context
    a = q.matrix()
    entries: list[FieldElement] = []
    while a:
        m = len(a)
        pivot = next((i for i in range(m) if a[i][i] != 0), None)
        if pivot is None:
            pair = next(((i, j) for i in range(m) for j in range(i + 1, m) if a[i][j] != 0), None)
            if pair is None:
                raise DegenerateFormError("Zero block during diagonalization")
            i, j = pair
            a[i] = [ctx.add(x, y) for x, y in zip(a[i], a[j], strict=True)]
            for row in a:
                row[i] = ctx.add(row[i], row[j])
            pivot = i
        if pivot != 0:
            a[0], a[pivot] = a[pivot], a[0]
            for row in a:
                row[0], row[pivot] = row[pivot], row[0]
        d = a[0][0]
        entries.append(FieldElement(ctx, d))
        d_inv = ctx.inv(d)
        a = [
            [ctx.sub(a[r][c], ctx.mul(ctx.mul(a[r][0], a[0][c]), d_inv)) for c in range(1, m)]
            for r in range(1, m)
        ]
    return entries


def hasse_invariant(diagonal: Sequence[FieldElement], place: Place) -> int:
    """Product of Hilbert symbols (d_i, d_j) over i < j at one place."""
    values = [_as_fraction(d) for d in diagonal]
    eps = 1
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            eps *= hilbert_symbol(values[i], values[j], place)
    return eps


def _as_fraction(d: FieldElement) -> Fraction:
    return d.context.to_fraction(d.value)


def _places(context: FieldContext, diagonal: Sequence[FieldElement]) -> list[Place]:
    if context.kind is FieldKind.PADIC:
        return [context.p]  # type: ignore[list-item]
    primes = {p for p in relevant_places([_as_fraction(d) for d in diagonal]) if p != INFINITY}
    primes.update(Config.HASSE_EXTRA_PRIMES)
    return [INFINITY, *sorted(primes)]  # type: ignore[type-var]


def _signature(diagonal: Sequence[FieldElement]) -> int:
    return sum(1 if _as_fraction(d) > 0 else -1 for d in diagonal)


def invariants(q: SymmetricForm) -> GWClass:
    """Rank, discriminant, signature and Hasse data of a nondegenerate form.

    Raises:
        DegenerateFormError: If the form is degenerate
    """
    _require_nondegenerate(q)
    ctx = q.context
    if ctx.is_char2:
        return GWClass(ctx, q.size, None, None, (), None)

    diagonal = diagonalize(q)
    disc = reduce_square_class(q.determinant) if q.size else SquareClass(ctx, 1)
    signature = None
    hasse: tuple[tuple[Place, int], ...] = ()
    if ctx.kind in (FieldKind.RATIONALS, FieldKind.REAL):
        signature = _signature(diagonal)
    if ctx.kind in (FieldKind.RATIONALS, FieldKind.PADIC):
        hasse = tuple((place, hasse_invariant(diagonal, place)) for place in _places(ctx, diagonal))
    return GWClass(ctx, q.size, disc, signature, hasse, _present_from(q))


def first_difference(q1: SymmetricForm, q2: SymmetricForm) -> Difference | None:
    """The first classifying invariant of the field that separates two forms.

    Only the invariants the field's classification uses are compared, in
    this order: rank, then signature over RR; rank and disc over Fp; rank,
    disc and the Hasse invariant at p over Qp; rank, disc, signature and the
    Hasse invariants over QQ. In characteristic 2 only the rank counts.

    Raises:
        ContextMismatchError: If the forms live over different fields
    """
    if q1.context != q2.context:
        raise ContextMismatchError(f"Comparing forms over {q1.context} and {q2.context}")
    ctx = q1.context
    if q1.size != q2.size:
        return Difference("rank", str(q1.size), str(q2.size))
    if ctx.is_char2 or not q1.size:
        return None
    _require_nondegenerate(q1)
    _require_nondegenerate(q2)
    if ctx.kind is not FieldKind.REAL:
        disc1, disc2 = reduce_square_class(q1.determinant), reduce_square_class(q2.determinant)
        if disc1 != disc2:
            return Difference("disc", str(disc1), str(disc2))
    if ctx.kind is FieldKind.PRIME_FIELD:
        return None
    d1, d2 = diagonalize(q1), diagonalize(q2)
    if ctx.kind in (FieldKind.RATIONALS, FieldKind.REAL):
        s1, s2 = _signature(d1), _signature(d2)
        if s1 != s2:
            return Difference("signature", str(s1), str(s2))
    if ctx.kind in (FieldKind.RATIONALS, FieldKind.PADIC):
        places = sorted(
            set(_places(ctx, d1)) | set(_places(ctx, d2)),
            key=lambda place: -1 if place == INFINITY else int(place),
        )
        for place in places:
            e1, e2 = hasse_invariant(d1, place), hasse_invariant(d2, place)
            if e1 != e2:
                return Difference(f"hasse[{place}]", str(e1), str(e2))
    return None


def equals(q1: SymmetricForm, q2: SymmetricForm) -> bool:
    """Isometry of nondegenerate forms (equal rank in characteristic 2)."""
    return first_difference(q1, q2) is None


def stable_equals(q1: SymmetricForm, q2: SymmetricForm) -> bool:
    """Equality after adding hyperbolic planes to the smaller form.

    Raises:
        RankParityMismatchError: If the ranks differ by an odd number
    """
    gap = q1.size - q2.size
    if gap % 2:
        raise RankParityMismatchError(
            f"Ranks {q1.size} and {q2.size} differ by an odd number"
        )
    if gap > 0:
        q2 = direct_sum(q2, hyperbolic(q2.context, gap // 2))
    elif gap < 0:
        q1 = direct_sum(q1, hyperbolic(q1.context, -gap // 2))
    return equals(q1, q2)


def _split_hyperbolic_planes(q: SymmetricForm) -> tuple[int, list[list[Raw]]]:
    """Peel off planes spanned by an isotropic basis vector and a partner.

    Returns the number of planes and the Gram matrix of the orthogonal
    complement.
    """
    ctx = q.context
    gram = q.matrix()
    planes = 0
    while True:
        n = len(gram)
        pair = next(
            (
                (i, j)
                for i in range(n)
                if gram[i][i] == 0
                for j in range(n)
                if j != i and gram[i][j] != 0
            ),
            None,
        )
        if pair is None:
            return planes, gram
        i, j = pair
        b, c = gram[i][j], gram[j][j]
        # complement vectors e_k - alpha e_i - beta e_j, as coordinate rows
        vectors = []
        for k in range(n):
            if k in (i, j):
                continue
            beta = ctx.div(gram[k][i], b)
            alpha = ctx.div(ctx.sub(gram[k][j], ctx.mul(beta, c)), b)
            v = [ctx.zero] * n
            v[k] = ctx.one
            v[i] = ctx.neg(alpha)
            v[j] = ctx.neg(beta)
            vectors.append(v)
        if not vectors:
            return planes + 1, []
        basis = ctx.matrix(vectors)
        gram = ctx.rows(basis * ctx.matrix(gram) * basis.transpose())
        planes += 1


def _pair_diagonal(
    classes: list[SquareClass], minus_one: SquareClass
) -> tuple[int, list[SquareClass]]:
    remaining = list(classes)
    planes = 0
    k = 0
    while k < len(remaining):
        partner = next(
            (j for j in range(k + 1, len(remaining)) if remaining[k] * remaining[j] == minus_one),
            None,
        )
        if partner is None:
            k += 1
            continue
        remaining.pop(partner)
        remaining.pop(k)
        planes += 1
    return planes, remaining


def _present_from(q: SymmetricForm) -> Presentation:
    ctx = q.context
    planes, rest = _split_hyperbolic_planes(q)
    if rest:
        entries = diagonalize(SymmetricForm(ctx, tuple(tuple(r) for r in rest)))
    else:
        entries = []
    classes = [reduce_square_class(d) for d in entries]
    minus_one = reduce_square_class(ctx.element(-1))
    paired, residual = _pair_diagonal(classes, minus_one)
    residual.sort(key=lambda sq: sq.representative)
    return Presentation(planes + paired, tuple(residual))


def present(q: SymmetricForm) -> Presentation:
    """Greedy presentation m*H + <d_1, ...>.

    Class-preserving, but m is not guaranteed maximal over QQ.

    Raises:
        Char2UnsupportedError: In characteristic 2
    """
    _require_odd_characteristic(q, "present")
    _require_nondegenerate(q)
    return _present_from(q)


def trace_form(extension: SimpleExtension, w: ExtensionElement) -> SymmetricForm:
    """The transfer Tr_{L/k}<w>: Gram entries Tr(w * t^i * t^j) on the power basis.

    Raises:
        ZeroElementError: If w is zero

    Example:
        >>> from ekldeg.fields import FieldContext
        >>> L = SimpleExtension.from_coefficients(FieldContext.rationals(), [1, 0, 1])
        >>> str(trace_form(L, L.one))
        '[[2, 0], [0, -2]]'
    """
    if w.field != extension:
        raise ContextMismatchError("Element does not belong to the extension")
    if w.is_zero():
        raise ZeroElementError("Trace form of zero is degenerate")
    d = extension.degree
    t = extension.generator
    traces = []
    current = w
    for _ in range(2 * d - 1):
        traces.append(ext_trace(current).value)
        current = current * t
    base = extension.base
    return SymmetricForm(base, tuple(tuple(traces[i + j] for j in range(d)) for i in range(d)))
