"""Standard bases in the local ring at the origin.

Mora's tangent cone algorithm computes a standard basis of (f_1, ..., f_n)
with respect to the local degree reverse lexicographic order. The resulting
``LocalAlgebra`` carries the staircase basis of Q = k[x]_(x)/(f) and an exact
normal form onto it.

Exact normal forms rely on the highest corner: once every monomial of degree
s + 1 lies in the leading ideal (s the top staircase degree), the ideal
contains all of m^(s+1) locally. Terms of degree above s may then be dropped
and ordinary leading-term reduction terminates without unit factors.

Example:
    >>> from ekldeg.fields import FieldContext
    >>> from ekldeg.poly import parse_polynomial
    >>> QQ = FieldContext.rationals()
    >>> f = [parse_polynomial(s, QQ, ["x1", "x2"]) for s in ("2*x1", "3*x2^2")]
    >>> A = standard_basis(f)
    >>> A.dimension, [A.format_monomial(m) for m in A.staircase]
    (2, ['1', 'x2'])
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations_with_replacement, product

from sympy.polys.matrices import DomainMatrix

from .config import Config
from .exceptions import (
    CapExceededError,
    ContextMismatchError,
    NotIsolatedZeroError,
    StepLimitExceededError,
    ZeroIdealInputError,
)
from .fields import FieldContext, Raw
from .poly import LOCAL, Monomial, MonomialOrder, Polynomial

logger = logging.getLogger(__name__)


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder = LOCAL) -> Polynomial:
    ctx = f.context
    lm_f, lm_g = f.leading_monomial(order), g.leading_monomial(order)
    lcm = lm_f.lcm(lm_g)
    left = f.monomial_mul(lcm.quotient(lm_f), ctx.inv(f.terms[lm_f]))
    right = g.monomial_mul(lcm.quotient(lm_g), ctx.inv(g.terms[lm_g]))
    return left - right


def mora_normal_form(
    h: Polynomial,
    basis: Sequence[Polynomial],
    order: MonomialOrder = LOCAL,
    step_limit: int | None = None,
) -> Polynomial:
    """Weak normal form by Mora's reduction.

    Reduces the leading term until it is divisible by no leading monomial of
    the (growing) reducer set. Among the possible divisors the one of least
    ecart is used, ties going to the earlier entry. When the chosen divisor
    has larger ecart than the current remainder, the remainder joins the
    reducer set.

    Args:
        h: Polynomial to reduce
        basis: Reducers; zero polynomials are ignored
        order: Monomial order, local by default
        step_limit: Override for ``Config.get_step_limit()``

    Returns:
        r with u*h - r in (basis) for some unit u of the local ring

    Raises:
        StepLimitExceededError: If more reduction steps than allowed are needed
    """
    limit = step_limit or Config.get_step_limit()
    reducers = [(g, g.leading_monomial(order), g.ecart(order)) for g in basis if not g.is_zero()]
    ctx = h.context
    steps = 0
    while not h.is_zero():
        lm = h.leading_monomial(order)
        best = None
        for entry in reducers:
            if entry[1].divides(lm) and (best is None or entry[2] < best[2]):
                best = entry
        if best is None:
            return h
        g, lm_g, ecart_g = best
        ecart_h = h.ecart(order)
        if ecart_g > ecart_h:
            reducers.append((h, lm, ecart_h))
        factor = ctx.div(h.terms[lm], g.terms[lm_g])
        h = h - g.monomial_mul(lm.quotient(lm_g), factor)
        steps += 1
        if steps > limit:
            raise StepLimitExceededError(f"Mora reduction exceeded {limit} steps")
    return h


@dataclass(frozen=True)
class LocalAlgebra:
    """The local algebra Q = k[x]_(x)/(f_1, ..., f_n) with its staircase.

    Attributes:
        generators: The input polynomials f_i
        basis: Standard basis G of the ideal
        leading_monomials: Leading monomials of G
        staircase: Monomials outside the leading ideal, largest first
    """

    generators: tuple[Polynomial, ...]
    basis: tuple[Polynomial, ...]
    leading_monomials: tuple[Monomial, ...]
    staircase: tuple[Monomial, ...]
    _index: dict[Monomial, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_index", {m: k for k, m in enumerate(self.staircase)})

    @property
    def context(self) -> FieldContext:
        return self.generators[0].context

    @property
    def variables(self) -> tuple[str, ...]:
        return self.generators[0].variables

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def dimension(self) -> int:
        return len(self.staircase)

    @property
    def max_degree(self) -> int:
        """Largest total degree of a staircase monomial."""
        return max((m.degree for m in self.staircase), default=-1)

    @cached_property
    def _reducers(self) -> list[tuple[Monomial, Raw, Polynomial]]:
        ctx = self.context
        return [
            (lm, ctx.inv(g.terms[lm]), g)
            for lm, g in zip(self.leading_monomials, self.basis, strict=True)
        ]

    def format_monomial(self, m: Monomial) -> str:
        parts = [
            name if e == 1 else f"{name}^{e}"
            for name, e in zip(self.variables, m, strict=True)
            if e
        ]
        return "*".join(parts) or "1"

    def monomial(self, m: Monomial) -> Polynomial:
        return Polynomial(self.context, self.variables, {m: self.context.one})

    def normal_form(self, h: Polynomial) -> Polynomial:
        """Exact normal form: the unique staircase combination equal to h in Q."""
        if h.context != self.context or h.variables != self.variables:
            raise ContextMismatchError("Polynomial does not belong to this local algebra")
        top = self.max_degree
        ctx = self.context
        r = h.truncate(top)
        while True:
            outside = [m for m in r.terms if m not in self._index]
            if not outside:
                return r
            m = max(outside, key=LOCAL.key)
            lm, lc_inv, g = next(red for red in self._reducers if red[0].divides(m))
            r = (r - g.monomial_mul(m.quotient(lm), ctx.mul(r.terms[m], lc_inv))).truncate(top)

    def coordinates(self, h: Polynomial) -> list[Raw]:
        """Coefficients of NF(h) on the staircase basis."""
        nf = self.normal_form(h)
        coords = [self.context.zero] * self.dimension
        for m, c in nf.terms.items():
            coords[self._index[m]] = c
        return coords

    def from_coordinates(self, coords: Sequence[Raw]) -> Polynomial:
        return Polynomial(
            self.context,
            self.variables,
            dict(zip(self.staircase, coords, strict=True)),
        )

    def contains(self, h: Polynomial) -> bool:
        """Membership of h in the ideal of the local ring."""
        return self.normal_form(h).is_zero()


def _initial_pairs(count: int) -> list[tuple[int, int]]:
    return [(i, j) for j in range(count) for i in range(j)]


def _chain_criterion(
    i: int,
    j: int,
    lead: list[Monomial],
    pending: set[tuple[int, int]],
) -> bool:
    """True when some third leading monomial makes the pair (i, j) redundant."""
    lcm = lead[i].lcm(lead[j])
    for k, lm in enumerate(lead):
        if k in (i, j) or not lm.divides(lcm):
            continue
        if (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
            return True
    return False


def _compute_basis(generators: list[Polynomial], order: MonomialOrder) -> list[Polynomial]:
    basis = [g for g in generators if not g.is_zero()]
    lead = [g.leading_monomial(order) for g in basis]
    pending = set(_initial_pairs(len(basis)))
    processed = 0
    pair_limit = Config.PAIR_LIMIT

    while pending:
        # smallest lcm degree first, then oldest pair
        i, j = min(
            pending, key=lambda pair: (lead[pair[0]].lcm(lead[pair[1]]).degree, pair[1], pair[0])
        )
        pending.discard((i, j))
        processed += 1
        if processed > pair_limit:
            raise StepLimitExceededError(f"Standard basis exceeded {pair_limit} critical pairs")
        if lead[i].is_coprime(lead[j]) or _chain_criterion(i, j, lead, pending):
            continue
        remainder = mora_normal_form(s_polynomial(basis[i], basis[j], order), basis, order)
        if remainder.is_zero():
            continue
        basis.append(remainder)
        lead.append(remainder.leading_monomial(order))
        new = len(basis) - 1
        pending.update((k, new) for k in range(new))
        if lead[new].degree == 0:
            # a unit: the ideal is the whole local ring
            break
    return basis


def _minimal_leading(lead: list[Monomial]) -> list[Monomial]:
    minimal = []
    for k, m in enumerate(lead):
        if any(o.divides(m) and (o != m or idx < k) for idx, o in enumerate(lead) if idx != k):
            continue
        minimal.append(m)
    return minimal


def _staircase(lead: list[Monomial], n: int) -> list[Monomial]:
    bounds: list[int | None] = [None] * n
    for m in lead:
        index = m.pure_power_index()
        if index is not None:
            e = m[index]
            current = bounds[index]
            bounds[index] = e if current is None else min(current, e)
    missing = [k for k, b in enumerate(bounds) if b is None]
    if missing:
        raise NotIsolatedZeroError(
            f"No pure power of variable(s) {missing} in the leading ideal; "
            "the zero at the origin is not isolated"
        )
    ranges = [range(b) for b in bounds]  # type: ignore[arg-type]
    stairs = [
        Monomial(exps)
        for exps in product(*ranges)
        if not any(lm.divides(Monomial(exps)) for lm in lead)
    ]
    return LOCAL.sorted(stairs)


def standard_basis(f: Sequence[Polynomial]) -> LocalAlgebra:
    """Standard basis of (f) at the origin and the staircase of the local algebra.

    Raises:
        ZeroIdealInputError: If every f_i is identically zero
        NotIsolatedZeroError: If the staircase is infinite
    """
    generators = list(f)
    if not generators:
        raise ZeroIdealInputError("No polynomials given")
    first = generators[0]
    for g in generators[1:]:
        if g.context != first.context or g.variables != first.variables:
            raise ContextMismatchError("Generators live in different polynomial rings")
    if all(g.is_zero() for g in generators):
        raise ZeroIdealInputError("All input polynomials vanish identically")

    basis = _compute_basis(generators, LOCAL)
    lead = [g.leading_monomial(LOCAL) for g in basis]
    n = first.nvars

    if any(m.degree == 0 for m in lead):
        unit = next(g for g in basis if g.leading_monomial(LOCAL).degree == 0)
        logger.debug("Ideal contains a unit; local algebra is zero")
        return LocalAlgebra(tuple(generators), (unit,), (Monomial.one(n),), ())

    stairs = _staircase(_minimal_leading(lead), n)
    logger.debug(
        "Standard basis of %d elements, staircase dimension %d", len(basis), len(stairs)
    )
    return LocalAlgebra(tuple(generators), tuple(basis), tuple(lead), tuple(stairs))


def determinacy_order(algebra: LocalAlgebra) -> int:
    """Least b >= 1 with every degree-b monomial in the ideal.

    Raises:
        CapExceededError: If no such b is found below n * (dim + 1)
    """
    n = algebra.nvars
    cap = n * (algebra.dimension + 1)
    for b in range(1, cap + 1):
        if all(
            algebra.contains(algebra.monomial(_monomial_from_indices(n, combo)))
            for combo in combinations_with_replacement(range(n), b)
        ):
            return b
    raise CapExceededError(f"Determinacy order search passed the cap {cap}")


def _monomial_from_indices(n: int, indices: Sequence[int]) -> Monomial:
    exps = [0] * n
    for k in indices:
        exps[k] += 1
    return Monomial(exps)


def multiplication_matrix(algebra: LocalAlgebra, g: Polynomial) -> DomainMatrix:
    """Matrix of multiplication by g; column j holds the coordinates of g * B_j."""
    columns = [algebra.coordinates(g * algebra.monomial(m)) for m in algebra.staircase]
    n = algebra.dimension
    return algebra.context.matrix(columns, n).transpose()
