"""Monomial Module.

Exponent-vector monomials over x0..x{m-1} and the degree lexicographic
term order in which later variables are larger (x0 ⊴ x1 ⊴ ... ⊴ x{m-1}).
"""

from dataclasses import dataclass
from enum import Enum

from src.core.errors import DimensionMismatchError


class Ordering(Enum):
    """Result of a term-order comparison."""

    LESS = -1
    EQUAL = 0
    GREATER = 1


def _format_exponents(exponents: tuple[int, ...]) -> str:
    factors = []
    for index, exponent in enumerate(exponents):
        if exponent == 0:
            continue
        factors.append(f"x{index}" if exponent == 1 else f"x{index}^{exponent}")
    return "*".join(factors) if factors else "1"


@dataclass(frozen=True, order=False)
class LaurentMonomial:
    """A monomial whose exponents may be negative."""

    exponents: tuple[int, ...]

    @property
    def m(self) -> int:
        """Ambient variable count."""
        return len(self.exponents)

    @property
    def degree(self) -> int:
        """Total degree (sum of exponents)."""
        return sum(self.exponents)

    def has_negative(self) -> bool:
        """True when some exponent is below zero."""
        return any(e < 0 for e in self.exponents)

    def shift(self, delta: tuple[int, ...], times: int = 1) -> "LaurentMonomial":
        """Return self * x^(times*delta)."""
        if len(delta) != self.m:
            raise DimensionMismatchError(
                f"cannot shift a {self.m}-variable monomial by {len(delta)} exponents"
            )
        return LaurentMonomial(
            tuple(e + times * d for e, d in zip(self.exponents, delta, strict=True))
        )

    def to_monomial(self) -> "Monomial":
        """Convert to an ordinary monomial; fails on negative exponents."""
        return Monomial(self.exponents)

    def __str__(self) -> str:
        """Render as x0^a*x1^b with negative exponents kept."""
        return _format_exponents(self.exponents)


@dataclass(frozen=True, order=False)
class Monomial:
    """A monomial x0^e0 * ... * x{m-1}^e{m-1} with nonnegative exponents."""

    exponents: tuple[int, ...]

    def __post_init__(self) -> None:
        """Check exponents are nonnegative integers."""
        if any(e < 0 for e in self.exponents):
            raise ValueError(f"negative exponent in monomial {self.exponents}")

    @classmethod
    def one(cls, m: int) -> "Monomial":
        """The constant monomial in m variables."""
        return cls((0,) * m)

    @property
    def m(self) -> int:
        """Ambient variable count."""
        return len(self.exponents)

    @property
    def degree(self) -> int:
        """Total degree."""
        return sum(self.exponents)

    def is_one(self) -> bool:
        """True for the constant monomial."""
        return not any(self.exponents)

    def divides(self, other: "Monomial | LaurentMonomial") -> bool:
        """Componentwise divisibility self | other."""
        _check_dims(self.exponents, other.exponents)
        return all(a <= b for a, b in zip(self.exponents, other.exponents, strict=True))

    def __mul__(self, other: "Monomial") -> "Monomial":
        """Monomial product."""
        _check_dims(self.exponents, other.exponents)
        return Monomial(
            tuple(a + b for a, b in zip(self.exponents, other.exponents, strict=True))
        )

    def to_laurent(self) -> LaurentMonomial:
        """View as a Laurent monomial."""
        return LaurentMonomial(self.exponents)

    def __str__(self) -> str:
        """Render as x0^a*x1^b, or 1 for the constant."""
        return _format_exponents(self.exponents)


def _check_dims(a: tuple[int, ...], b: tuple[int, ...]) -> None:
    if len(a) != len(b):
        raise DimensionMismatchError(
            f"monomials live in {len(a)} and {len(b)} variables"
        )


def deglex_key(exponents: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    """Sort key realising deglex with later variables larger."""
    return (sum(exponents), tuple(reversed(exponents)))


def deglex_compare(
    a: "Monomial | LaurentMonomial", b: "Monomial | LaurentMonomial"
) -> Ordering:
    """Compare two monomials in the degree lexicographic order.

    Total degree decides first; ties are broken on the exponent of the
    largest variable x{m-1}, then x{m-2}, and so on.

    Raises:
        DimensionMismatchError: If the monomials have different m.
    """
    _check_dims(a.exponents, b.exponents)
    key_a = deglex_key(a.exponents)
    key_b = deglex_key(b.exponents)
    if key_a < key_b:
        return Ordering.LESS
    if key_a > key_b:
        return Ordering.GREATER
    return Ordering.EQUAL
