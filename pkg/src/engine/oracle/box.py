"""Frobenius box module.

The monomial basis of S/(x_0^q, ..., x_{m-1}^q), enumerated mixed-radix
base q with the exponent of x_i as digit i, so x_{m-1} is the most
significant digit.
"""

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import numpy.typing as npt

from src.core.errors import BudgetExceededError, DimensionMismatchError
from src.core.ring.field import PrimeField
from src.core.ring.monomial import LaurentMonomial, Monomial

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 1 << 24


@dataclass(frozen=True)
class FrobeniusBox:
    """Box of exponent vectors in [0, q)^m with q = p^n.

    Attributes:
        m: Variable count.
        n: Frobenius level.
        field: The prime field; q = field.p ** n.
    """

    m: int
    n: int
    field: PrimeField

    def __post_init__(self) -> None:
        """Validate the level and the variable count."""
        if self.n < 1:
            raise ValueError(f"Frobenius level must be at least 1, got {self.n}")
        if self.m < 1:
            raise DimensionMismatchError(
                f"a box needs at least one variable, got {self.m}"
            )

    @property
    def p(self) -> int:
        """Field characteristic."""
        return self.field.p

    @property
    def q(self) -> int:
        """Side length p^n."""
        return self.field.p**self.n

    @property
    def size(self) -> int:
        """Number of basis monomials, q^m."""
        return self.q**self.m

    @cached_property
    def place_values(self) -> npt.NDArray[np.int64]:
        """Weights q^i of each exponent digit."""
        return np.array([self.q**i for i in range(self.m)], dtype=np.int64)

    def check_budget(self, budget: int) -> None:
        """Refuse boxes larger than budget basis elements.

        Raises:
            BudgetExceededError: If q^m > budget.
        """
        if self.size > budget:
            raise BudgetExceededError(self.size, budget)

    def index(self, monomial: Monomial | LaurentMonomial) -> int:
        """Rank of a box monomial in [0, q^m).

        Raises:
            DimensionMismatchError: On a variable-count mismatch.
            ValueError: If the monomial lies outside the box.
        """
        if monomial.m != self.m:
            raise DimensionMismatchError(
                f"monomial has {monomial.m} variables, box has {self.m}"
            )
        if not self.contains(monomial):
            raise ValueError(f"{monomial} is outside the box q={self.q}")
        return sum(e * self.q**i for i, e in enumerate(monomial.exponents))

    def monomial(self, index: int) -> Monomial:
        """Inverse of :meth:`index`."""
        if not 0 <= index < self.size:
            raise ValueError(f"index {index} outside [0, {self.size})")
        exps = []
        for _ in range(self.m):
            index, digit = divmod(index, self.q)
            exps.append(digit)
        return Monomial(tuple(exps))

    def contains(self, monomial: Monomial | LaurentMonomial) -> bool:
        """True when every exponent lies in [0, q)."""
        return all(0 <= e < self.q for e in monomial.exponents)

    def exponent_table(self) -> npt.NDArray[np.int64]:
        """All box exponent vectors, row i is the monomial of index i."""
        indices = np.arange(self.size, dtype=np.int64)
        return (indices[:, None] // self.place_values[None, :]) % self.q

    def monomials(self) -> list[Monomial]:
        """Every box monomial in index order."""
        return [Monomial(tuple(int(e) for e in row)) for row in self.exponent_table()]

    def deglex_positions(self) -> npt.NDArray[np.int64]:
        """Position of each index in the deglex order of the box.

        Returns:
            Array ``pos`` with ``pos[i]`` the deglex rank of monomial i.
        """
        table = self.exponent_table()
        # np.lexsort sorts by the last key first: degree, then x_{m-1}, ...
        keys = [table[:, i] for i in range(self.m)] + [table.sum(axis=1)]
        order = np.lexsort(keys)
        positions = np.empty(self.size, dtype=np.int64)
        positions[order] = np.arange(self.size, dtype=np.int64)
        return positions


def is_convergent(value: LaurentMonomial | Monomial, q: int) -> bool:
    """True when value is not a monomial of the box: an exponent < 0 or >= q."""
    return any(e < 0 or e >= q for e in value.exponents)
