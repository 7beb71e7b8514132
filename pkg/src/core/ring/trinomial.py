"""Trinomial Module.

A trinomial f = [3] + [2] + [1] over F_p with terms named from the
least initial ([1]) to the most initial ([3]) under deglex, plus the
variable classification and the Laurent action of the term symbols.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass

from src.core.errors import DimensionMismatchError, PolynomialParseError
from src.core.ring.field import PrimeField
from src.core.ring.monomial import LaurentMonomial, Monomial, deglex_key

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Term:
    """A nonzero scalar times a monomial."""

    coeff: int
    mon: Monomial

    def __post_init__(self) -> None:
        """Reject zero coefficients."""
        if self.coeff == 0:
            raise PolynomialParseError(f"term {self.mon} has a zero coefficient")

    def __str__(self) -> str:
        """Render as c*x0^a or just the monomial when c == 1."""
        return str(self.mon) if self.coeff == 1 else f"{self.coeff}*{self.mon}"


@dataclass(frozen=True)
class Trinomial:
    """Three-term polynomial with t1 ⊴ t2 ⊴ t3 strictly.

    Use :meth:`from_terms` to build one from unsorted terms.
    """

    t1: Term
    t2: Term
    t3: Term
    field: PrimeField

    def __post_init__(self) -> None:
        """Validate term order, distinctness and dimensions."""
        mons = [self.t1.mon, self.t2.mon, self.t3.mon]
        if len({mon.m for mon in mons}) != 1:
            raise DimensionMismatchError(
                "trinomial terms use different variable counts"
            )
        if any(mon.is_one() for mon in mons):
            raise PolynomialParseError("a trinomial has no constant term")
        keys = [deglex_key(mon.exponents) for mon in mons]
        if not keys[0] < keys[1] < keys[2]:
            raise PolynomialParseError(
                "trinomial terms must be distinct and ordered [1] ⊴ [2] ⊴ [3]"
            )
        for term in (self.t1, self.t2, self.t3):
            if term.coeff % self.field.p == 0 or not 0 < term.coeff < self.field.p:
                raise PolynomialParseError(
                    f"coefficient of {term.mon} is not a reduced unit"
                    f" mod {self.field.p}"
                )

    @classmethod
    def from_terms(cls, terms: Sequence[Term], p: int | PrimeField) -> "Trinomial":
        """Sort three terms into [1] ⊴ [2] ⊴ [3] and reduce coefficients mod p.

        Raises:
            PolynomialParseError: On a wrong term count, a coefficient that
                vanishes mod p, or repeated monomials.
        """
        prime = p if isinstance(p, PrimeField) else PrimeField(p)
        if len(terms) != 3:
            raise PolynomialParseError(f"expected exactly 3 terms, got {len(terms)}")
        reduced = []
        for term in terms:
            coeff = prime.reduce(term.coeff)
            if coeff == 0:
                raise PolynomialParseError(
                    f"coefficient {term.coeff} of {term.mon} is 0 mod {prime.p}"
                )
            reduced.append(Term(coeff, term.mon))
        if len({term.mon for term in reduced}) != 3:
            raise PolynomialParseError(
                "two terms share a monomial; merged count is not 3"
            )
        reduced.sort(key=lambda term: deglex_key(term.mon.exponents))
        return cls(reduced[0], reduced[1], reduced[2], prime)

    @property
    def p(self) -> int:
        """Field characteristic."""
        return self.field.p

    @property
    def m(self) -> int:
        """Ambient variable count."""
        return self.t1.mon.m

    @property
    def terms(self) -> tuple[Term, Term, Term]:
        """Terms as ([1], [2], [3])."""
        return (self.t1, self.t2, self.t3)

    @property
    def monomials(self) -> tuple[Monomial, Monomial, Monomial]:
        """Monomials of [1], [2], [3]."""
        return (self.t1.mon, self.t2.mon, self.t3.mon)

    @property
    def coeffs(self) -> tuple[int, int, int]:
        """Coefficients of [1], [2], [3]."""
        return (self.t1.coeff, self.t2.coeff, self.t3.coeff)

    def exponent_rows(
        self,
    ) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
        """Exponent vectors of [1], [2], [3]."""
        return (self.t1.mon.exponents, self.t2.mon.exponents, self.t3.mon.exponents)

    def max_degree(self) -> int:
        """Largest single exponent occurring in f."""
        return max(max(row) for row in self.exponent_rows())

    def support(self) -> list[int]:
        """Indices of variables occurring in some term."""
        return [
            v for v in range(self.m) if any(row[v] for row in self.exponent_rows())
        ]

    def relabel(self, permutation: Sequence[int]) -> "Trinomial":
        """Rename variable i to permutation[i] and re-sort the terms."""
        if sorted(permutation) != list(range(self.m)):
            raise DimensionMismatchError(
                f"{permutation!r} is not a permutation of 0..{self.m - 1}"
            )
        renamed = []
        for term in self.terms:
            exps = [0] * self.m
            for old, new in enumerate(permutation):
                exps[new] = term.mon.exponents[old]
            renamed.append(Term(term.coeff, Monomial(tuple(exps))))
        return Trinomial.from_terms(renamed, self.field)

    def arranged(self) -> tuple["Trinomial", tuple[int, ...]]:
        """Relabel so the variable classes sit in contiguous blocks.

        Variables are placed in the order E_q, ..., E_1, N, Z, P and the
        ones f does not use come last.

        Returns:
            The relabeled trinomial and the map back: internal variable i
            is user variable ``back[i]``, so ``g.relabel(back)`` restores f.
        """
        order = classify_variables(self).arrangement()
        back = order + tuple(v for v in range(self.m) if v not in order)
        to_internal = [0] * self.m
        for internal, user in enumerate(back):
            to_internal[user] = internal
        return self.relabel(to_internal), back

    def __str__(self) -> str:
        """Render from [1] to [3] in the parser's grammar."""
        return " + ".join(str(term) for term in self.terms)


@dataclass(frozen=True)
class VariableClassification:
    """Partition of the variables of f into E / N / Z / P classes.

    Attributes:
        extra: E_q, ..., E_1: only in [3], sorted by nonincreasing degree.
        negative: N_r, ..., N_1: deg_[2] - deg_[1] < 0.
        zero: Z_s, ..., Z_1: deg_[2] - deg_[1] == 0.
        positive: P_1, ..., P_t: deg_[2] - deg_[1] > 0.
    """

    extra: tuple[int, ...] = ()
    negative: tuple[int, ...] = ()
    zero: tuple[int, ...] = ()
    positive: tuple[int, ...] = ()

    @property
    def has_extra(self) -> bool:
        """True when [3] carries at least one extra variable."""
        return bool(self.extra)

    def arrangement(self) -> tuple[int, ...]:
        """Variables in the order E_q, ..., E_1, N, Z, P.

        This is the contiguous arrangement of the classes; index i of the
        result is the user variable placed at position i.
        """
        return self.extra + self.negative + self.zero + self.positive

    def as_dict(self) -> dict[str, list[int]]:
        """Plain-data view for reports."""
        return {
            "extra": list(self.extra),
            "negative": list(self.negative),
            "zero": list(self.zero),
            "positive": list(self.positive),
        }


def classify_variables(f: Trinomial) -> VariableClassification:
    """Split the support of f into extra and difference variables."""
    e1, e2, e3 = f.exponent_rows()
    extra: list[int] = []
    negative: list[int] = []
    zero: list[int] = []
    positive: list[int] = []
    for v in f.support():
        if e3[v] > 0 and e2[v] == 0 and e1[v] == 0:
            extra.append(v)
            continue
        diff = e2[v] - e1[v]
        if diff < 0:
            negative.append(v)
        elif diff == 0:
            zero.append(v)
        else:
            positive.append(v)
    # E_q first: nonincreasing degree in f, ties by index.
    extra.sort(key=lambda v: (-e3[v], v))
    logger.debug(
        "classified %s: E=%s N=%s Z=%s P=%s", f, extra, negative, zero, positive
    )
    return VariableClassification(
        tuple(extra), tuple(negative), tuple(zero), tuple(positive)
    )


def laurent_apply(
    base: Monomial | LaurentMonomial, f: Trinomial, i: int, j: int, k: int
) -> LaurentMonomial:
    """Exponent vector of base * [1]^i * [2]^j * [3]^k."""
    if base.m != f.m:
        raise DimensionMismatchError(f"base has {base.m} variables, f has {f.m}")
    e1, e2, e3 = f.exponent_rows()
    return LaurentMonomial(
        tuple(
            b + i * a1 + j * a2 + k * a3
            for b, a1, a2, a3 in zip(base.exponents, e1, e2, e3, strict=True)
        )
    )
