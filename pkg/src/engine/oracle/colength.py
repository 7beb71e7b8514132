"""Colength Module.

Brute-force Hilbert-Kunz values: the multiplication-by-f matrix on the
Frobenius box, its rank over F_p, the resulting colength and series, and
the standard monomials left over by an ordered elimination.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from src.core.errors import BudgetExceededError, DimensionMismatchError, SeriesError
from src.core.ring.monomial import Monomial
from src.core.ring.trinomial import Trinomial
from src.engine.oracle.box import DEFAULT_BUDGET, FrobeniusBox
from src.engine.oracle.rank import DEFAULT_DENSE_BIT_LIMIT, connected_blocks, rank_fp
from src.engine.oracle.sparse import SparseFpMatrix

logger = logging.getLogger(__name__)


class PivotRule(Enum):
    """Which monomial of a reduced row becomes its pivot."""

    LARGEST = "largest"
    SMALLEST = "smallest"


@dataclass(frozen=True)
class HKSeries:
    """Exact Hilbert-Kunz values (n, HK(n)) of one trinomial.

    Attributes:
        p: Field characteristic.
        f: The trinomial.
        points: Pairs (n, HK(n)) with n strictly increasing.
        truncated: True when the budget stopped the series early.
    """

    p: int
    f: Trinomial
    points: tuple[tuple[int, int], ...] = field(default_factory=tuple)
    truncated: bool = False

    def __post_init__(self) -> None:
        """Check ordering and the 1 <= HK(n) <= p^(mn) bounds."""
        previous = 0
        for n, value in self.points:
            if n <= previous:
                raise SeriesError(
                    f"levels must increase strictly, got {n} after {previous}"
                )
            if not 1 <= value <= self.p ** (self.f.m * n):
                raise SeriesError(f"HK({n}) = {value} is outside [1, p^(mn)]")
            previous = n

    @property
    def levels(self) -> list[int]:
        """The levels n present in the series."""
        return [n for n, _ in self.points]

    @property
    def values(self) -> list[int]:
        """The HK(n) values in level order."""
        return [value for _, value in self.points]

    def __len__(self) -> int:
        """Number of points."""
        return len(self.points)


def build_mult_matrix(f: Trinomial, box: FrobeniusBox) -> SparseFpMatrix:
    """Matrix of g -> f*g on the monomial basis of the box.

    Column mu has coeff([tau]) at row index(mu*[tau]) for each term whose
    product stays inside the box, so at most three entries per column.

    Raises:
        DimensionMismatchError: If box.m != f.m.
    """
    if box.m != f.m:
        raise DimensionMismatchError(f"box has {box.m} variables, f has {f.m}")
    table = box.exponent_table()
    indices = np.arange(box.size, dtype=np.int64)
    rows, cols, values = [], [], []
    for term in f.terms:
        shift = np.asarray(term.mon.exponents, dtype=np.int64)
        inside = ((table + shift[None, :]) < box.q).all(axis=1)
        hit = indices[inside]
        cols.append(hit)
        rows.append(hit + int(shift @ box.place_values))
        values.append(np.full(hit.size, term.coeff, dtype=np.int64))
    matrix = SparseFpMatrix(
        box.size,
        box.size,
        f.p,
        np.concatenate(rows),
        np.concatenate(cols),
        np.concatenate(values),
    )
    logger.debug(
        "multiplication matrix for %s at q=%d has %d entries", f, box.q, matrix.nnz
    )
    return matrix


def colength(
    f: Trinomial,
    n: int,
    *,
    budget: int = DEFAULT_BUDGET,
    dense_bit_limit: int = DEFAULT_DENSE_BIT_LIMIT,
) -> int:
    """HK(n) = dim_k S/((f) + (x^[q])) with q = p^n.

    Args:
        f: The trinomial.
        n: Frobenius level, at least 1.
        budget: Largest allowed q^m.
        dense_bit_limit: Passed to :func:`rank_fp`.

    Returns:
        q^m minus the rank of the multiplication matrix.

    Raises:
        BudgetExceededError: If q^m exceeds budget.
    """
    box = FrobeniusBox(f.m, n, f.field)
    box.check_budget(budget)
    rank = rank_fp(build_mult_matrix(f, box), dense_bit_limit=dense_bit_limit)
    value = box.size - rank
    logger.info("HK(%d) = %d for %s over F_%d", n, value, f, f.p)
    return value


def hk_series(
    f: Trinomial,
    n_max: int,
    *,
    budget: int = DEFAULT_BUDGET,
    dense_bit_limit: int = DEFAULT_DENSE_BIT_LIMIT,
) -> HKSeries:
    """HK(1), ..., HK(n_max), stopping at the first level over budget.

    Raises:
        SeriesError: If n_max < 1.
    """
    if n_max < 1:
        raise SeriesError(f"n_max must be at least 1, got {n_max}")
    points: list[tuple[int, int]] = []
    truncated = False
    for n in range(1, n_max + 1):
        try:
            value = colength(f, n, budget=budget, dense_bit_limit=dense_bit_limit)
        except BudgetExceededError as error:
            logger.warning("series for %s truncated at n=%d: %s", f, n, error.message)
            truncated = True
            break
        points.append((n, value))
    return HKSeries(f.p, f, tuple(points), truncated)


class _EchelonBasis:
    """Row-echelon basis keyed by pivot position."""

    def __init__(self, p: int, pivot: PivotRule) -> None:
        self.p = p
        self.pivot = pivot
        self.bits: dict[int, int] = {}
        self.rows: dict[int, dict[int, int]] = {}

    @property
    def leads(self) -> list[int]:
        return list(self.bits) if self.p == 2 else list(self.rows)

    def insert(self, vector: dict[int, int]) -> None:
        if self.p == 2:
            self._insert_bits(sum(1 << slot for slot in vector))
        else:
            self._insert_dict(dict(vector))

    def _insert_bits(self, bits: int) -> None:
        while bits:
            if self.pivot is PivotRule.LARGEST:
                lead = bits.bit_length() - 1
            else:
                lead = (bits & -bits).bit_length() - 1
            if lead not in self.bits:
                self.bits[lead] = bits
                return
            bits ^= self.bits[lead]

    def _insert_dict(self, vector: dict[int, int]) -> None:
        p = self.p
        while vector:
            lead = max(vector) if self.pivot is PivotRule.LARGEST else min(vector)
            if lead not in self.rows:
                inverse = pow(vector[lead], -1, p)
                self.rows[lead] = {k: v * inverse % p for k, v in vector.items()}
                return
            factor = vector[lead]
            for k, v in self.rows[lead].items():
                updated = (vector.get(k, 0) - factor * v) % p
                if updated:
                    vector[k] = updated
                else:
                    vector.pop(k, None)


def standard_monomials(
    f: Trinomial,
    n: int,
    pivot: PivotRule = PivotRule.LARGEST,
    *,
    budget: int = DEFAULT_BUDGET,
) -> list[Monomial]:
    """Box monomials that are never pivots of the ordered elimination.

    The products f*mu are reduced against the deglex-ordered basis one
    block at a time. With ``PivotRule.LARGEST`` each reduced row pivots on
    its ⊴-largest monomial; with ``PivotRule.SMALLEST`` on its ⊴-least,
    which marks exactly the monomials congruent to a combination of
    ⊴-larger ones modulo (f) + (x^[q]).

    Returns:
        The non-pivot monomials in increasing deglex order. Their number
        is the colength.

    Raises:
        BudgetExceededError: If q^m exceeds budget.
    """
    box = FrobeniusBox(f.m, n, f.field)
    box.check_budget(budget)
    matrix = build_mult_matrix(f, box)
    positions = box.deglex_positions()
    csc = matrix.csc
    pivots: set[int] = set()
    for rows, cols in connected_blocks(matrix):
        local = rows[np.argsort(positions[rows], kind="stable")]
        slot = {int(row): i for i, row in enumerate(local)}
        basis = _EchelonBasis(f.p, pivot)
        for col in cols:
            start, stop = csc.indptr[col], csc.indptr[col + 1]
            basis.insert(
                {
                    slot[int(row)]: int(value)
                    for row, value in zip(
                        csc.indices[start:stop], csc.data[start:stop], strict=True
                    )
                }
            )
        pivots.update(int(local[lead]) for lead in basis.leads)
    standard = [index for index in range(box.size) if index not in pivots]
    standard.sort(key=lambda index: int(positions[index]))
    logger.debug(
        "%d standard monomials (%s pivots) for %s at n=%d",
        len(standard),
        pivot.value,
        f,
        n,
    )
    return [box.monomial(index) for index in standard]
