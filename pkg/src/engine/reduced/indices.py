"""Row and column indices of the reduced system 𝔅_{A,f}."""

from dataclasses import dataclass
from enum import Enum

from src.core.ring.monomial import LaurentMonomial, Monomial
from src.core.ring.trinomial import Trinomial, laurent_apply


class RowFamily(Enum):
    """The five row families of the reduced system."""

    CASE_III_SINGLE = "CaseIII_single"
    F31_LOW = "F31_low"
    F31_HIGH = "F31_high"
    F21_LOW = "F21_low"
    F21_HIGH = "F21_high"

    @property
    def case(self) -> str:
        """Entry case of the family: "I", "II" or "III"."""
        if self in (RowFamily.F31_LOW, RowFamily.F31_HIGH):
            return "I"
        if self in (RowFamily.F21_LOW, RowFamily.F21_HIGH):
            return "II"
        return "III"


class ColShape(Enum):
    """Column shapes of P_{A,f}."""

    COL_31 = "Col_31"
    COL_21 = "Col_21"
    COL_MIXED = "Col_mixed"


def order_key(descriptor: tuple[int, int, int]) -> tuple[int, int, int, int]:
    """Fewer rewrites first, then lexicographic on (e3, e2, e1)."""
    e1, e2, e3 = descriptor
    rewrites = sum(e for e in descriptor if e > 0)
    return (rewrites, e3, e2, e1)


@dataclass(frozen=True)
class RowIndex:
    """A row of the reduced system.

    Attributes:
        family: Row family.
        m: Power of the [1]-rewrite.
        x_or_y: x for the F31 families, y for the F21 families, None for
            the single Case III row.
    """

    family: RowFamily
    m: int = 0
    x_or_y: int | None = None

    def descriptor(self) -> tuple[int, int, int]:
        """Exponents (e1, e2, e3) of the row's mutant under rewriting.

        F31 rows are A*([−3]/[1])^m*([−3]/[2])^x, F21 rows are
        A*([−2]/[1])^m*([−2]/[3])^y and the Case III row is A*[−2]/[1].
        """
        if self.family is RowFamily.CASE_III_SINGLE:
            return (1, -1, 0)
        other = self.x_or_y or 0
        if self.family.case == "I":
            return (self.m, other, -(self.m + other))
        return (self.m, -(self.m + other), other)

    def order_key(self) -> tuple[int, int, int, int]:
        """Position under ≾."""
        return order_key(self.descriptor())

    def value(self, A: Monomial, f: Trinomial) -> LaurentMonomial:
        """Laurent monomial of the row's mutant."""
        return laurent_apply(A, f, *self.descriptor())

    def __str__(self) -> str:
        """Compact label for reports."""
        if self.family is RowFamily.CASE_III_SINGLE:
            return self.family.value
        return f"{self.family.value}(m={self.m},{self.x_or_y})"


@dataclass(frozen=True)
class ColIndex:
    """A column of the reduced system.

    Attributes:
        shape: Column shape. Col_31 is A[−3]^(a+b)/([1]^a[2]^b), Col_21 is
            A[−2]^(a+b)/([1]^a[3]^b) and Col_mixed is A[−2]^a[−3]^b/[1]^(a+b).
        a: First parameter.
        b: Second parameter.
    """

    shape: ColShape
    a: int
    b: int

    def descriptor(self) -> tuple[int, int, int]:
        """Exponents (e1, e2, e3) of the column's mutant under rewriting."""
        if self.shape is ColShape.COL_31:
            return (self.a, self.b, -(self.a + self.b))
        if self.shape is ColShape.COL_21:
            return (self.a, -(self.a + self.b), self.b)
        return (self.a + self.b, -self.a, -self.b)

    def order_key(self) -> tuple[int, int, int, int]:
        """Position under ≾."""
        return order_key(self.descriptor())

    def value(self, A: Monomial, f: Trinomial) -> LaurentMonomial:
        """Laurent monomial of the column's mutant."""
        return laurent_apply(A, f, *self.descriptor())

    def signature(self) -> tuple[str, int, int]:
        """Hashable, sortable (shape, a, b)."""
        return (self.shape.value, self.a, self.b)

    def __str__(self) -> str:
        """Compact label for reports."""
        return f"{self.shape.value}({self.a},{self.b})"
