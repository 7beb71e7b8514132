"""Mutants Module.

A mutant is a base monomial A rewritten along f = [3] + [2] + [1]: the
descriptor (e1, e2, e3) records how many factors of each term have been
multiplied in (positive) or divided out (negative). This module builds
the breadth-first mutant closure and the derived index sets 𝓑, 𝓐, 𝓔
and 𝓛 of the membership test.
"""

import logging
from dataclasses import dataclass

from src.core.ring.monomial import LaurentMonomial, Monomial, deglex_key
from src.core.ring.trinomial import Trinomial, laurent_apply
from src.engine.oracle.box import is_convergent

logger = logging.getLogger(__name__)

TERM_NAMES = ("[1]", "[2]", "[3]")


@dataclass(frozen=True)
class MutantDescriptor:
    """Base monomial plus exponents on the term symbols [1], [2], [3].

    Attributes:
        base: The monomial A every mutant starts from.
        e1: Exponent of [1].
        e2: Exponent of [2].
        e3: Exponent of [3].
        value: ``laurent_apply(base, f, e1, e2, e3)``.
    """

    base: Monomial
    e1: int
    e2: int
    e3: int
    value: LaurentMonomial

    @classmethod
    def of(
        cls, base: Monomial, f: Trinomial, e1: int = 0, e2: int = 0, e3: int = 0
    ) -> "MutantDescriptor":
        """Build a descriptor and cache its Laurent value."""
        return cls(base, e1, e2, e3, laurent_apply(base, f, e1, e2, e3))

    @property
    def exponents(self) -> tuple[int, int, int]:
        """(e1, e2, e3)."""
        return (self.e1, self.e2, self.e3)

    @property
    def rewrites(self) -> int:
        """Number of term factors multiplied in (sum of positive parts)."""
        return sum(e for e in self.exponents if e > 0)

    def order_key(self) -> tuple[int, int, int, int]:
        """Sort key of the orders ⪯ (columns) and ≾ (rows).

        Fewer rewrites first, then lexicographic on (e3, e2, e1).
        """
        return (self.rewrites, self.e3, self.e2, self.e1)

    def shifted(self, f: Trinomial, term: int, amount: int) -> "MutantDescriptor":
        """Multiply by [term+1]^amount, term in {0, 1, 2}."""
        exps = list(self.exponents)
        exps[term] += amount
        step = f.monomials[term].exponents
        return MutantDescriptor(
            self.base,
            exps[0],
            exps[1],
            exps[2],
            self.value.shift(step, amount),
        )

    def label(self) -> str:
        """Human readable form like ``A*[1]^2/[3]``."""
        parts = ["A"]
        for name, exponent in zip(TERM_NAMES, self.exponents, strict=True):
            if exponent > 0:
                parts.append(name if exponent == 1 else f"{name}^{exponent}")
        numerator = "*".join(parts)
        below = [
            name if exponent == -1 else f"{name}^{-exponent}"
            for name, exponent in zip(TERM_NAMES, self.exponents, strict=True)
            if exponent < 0
        ]
        return numerator + ("/" + "*".join(below) if below else "")


@dataclass(frozen=True)
class MutantSets:
    """Truncated index sets of the membership system for one A.

    Attributes:
        B_set: Non-convergent, non-absorbed mutants, in discovery order.
        A_set: Multipliers D = B/[tau] for B in B_set and [tau] | B.
        E_set: Products D*[tau] for D in A_set.
        L_set: Elements of E_set inside the box and not ⊳ A; the rows.
        depth: Number of breadth-first levels kept in B_set.
        saturated: True when every element of L_set already lies in B_set,
            so a deeper closure adds nothing.
    """

    B_set: tuple[MutantDescriptor, ...]
    A_set: tuple[MutantDescriptor, ...]
    E_set: tuple[MutantDescriptor, ...]
    L_set: tuple[MutantDescriptor, ...]
    depth: int
    saturated: bool


def is_absorbed(value: LaurentMonomial, base: Monomial) -> bool:
    """True when value is strictly ⊳ base, so it lies in A_c already."""
    return deglex_key(value.exponents) > deglex_key(base.exponents)


def generate_mutant_sets(
    A: Monomial, f: Trinomial, q: int, depth: int
) -> MutantSets:
    """Breadth-first mutant closure of A truncated at depth levels.

    Level 0 is A itself. Every B of a level is expanded: for each term
    [tau] dividing B the multiplier D = B/[tau] joins 𝓐, and the two
    siblings D*[tau'] become new mutants unless they are convergent
    (outside the box) or absorbed (⊳ A). Mutants are deduplicated by value,
    keeping the first descriptor found.

    Args:
        A: The base monomial.
        f: The trinomial.
        q: Box side p^n.
        depth: Number of levels of 𝓑, at least 1.

    Returns:
        The four index sets plus the saturation flag.

    Raises:
        ValueError: If depth < 1.
    """
    if depth < 1:
        raise ValueError(f"depth must be at least 1, got {depth}")
    if is_convergent(A, q):
        return MutantSets((), (), (), (), depth, saturated=True)

    seed = MutantDescriptor.of(A, f)
    b_set: dict[LaurentMonomial, MutantDescriptor] = {seed.value: seed}
    a_set: dict[LaurentMonomial, MutantDescriptor] = {}
    level = [seed]
    for level_no in range(depth):
        next_level: list[MutantDescriptor] = []
        for mutant in level:
            for tau, term_mon in enumerate(f.monomials):
                if not term_mon.divides(mutant.value):
                    continue
                multiplier = mutant.shifted(f, tau, -1)
                a_set.setdefault(multiplier.value, multiplier)
                if level_no + 1 == depth:
                    continue
                for sibling_tau in range(3):
                    if sibling_tau == tau:
                        continue
                    sibling = multiplier.shifted(f, sibling_tau, 1)
                    if (
                        sibling.value in b_set
                        or is_convergent(sibling.value, q)
                        or is_absorbed(sibling.value, A)
                    ):
                        continue
                    b_set[sibling.value] = sibling
                    next_level.append(sibling)
        level = next_level
        if not level:
            break

    e_set: dict[LaurentMonomial, MutantDescriptor] = {}
    for multiplier in a_set.values():
        for tau in range(3):
            product = multiplier.shifted(f, tau, 1)
            e_set.setdefault(product.value, product)
    l_set = [
        element
        for element in e_set.values()
        if not is_convergent(element.value, q) and not is_absorbed(element.value, A)
    ]
    saturated = all(element.value in b_set for element in l_set)
    logger.debug(
        "mutants of %s at depth %d: |B|=%d |A|=%d |E|=%d |L|=%d saturated=%s",
        A,
        depth,
        len(b_set),
        len(a_set),
        len(e_set),
        len(l_set),
        saturated,
    )
    return MutantSets(
        tuple(b_set.values()),
        tuple(a_set.values()),
        tuple(e_set.values()),
        tuple(l_set),
        depth,
        saturated,
    )
