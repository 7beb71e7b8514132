"""System Module.

Assembles the {0,1} system 𝔄_{A,f} 𝔛 = 𝔅 from truncated mutant sets and
splits its rows by their smallest nonzero column.
"""

import logging
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from src.core.ring.monomial import LaurentMonomial, Monomial
from src.core.ring.trinomial import Trinomial
from src.engine.mutation.mutants import MutantDescriptor, MutantSets
from src.engine.oracle.rank import is_consistent
from src.engine.oracle.sparse import SparseFpMatrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AssembledSystem:
    """The truncated membership system for one monomial.

    Attributes:
        matrix: Rows indexed by 𝓛 (decreasing ≾), columns by 𝓐 (increasing ⪯).
        col_index: Column descriptors.
        row_index: Row descriptors.
        rhs: The vector 𝔅: 1 at the row of A, 0 elsewhere.
        a_row: Position of A among the rows, None when A is not a row.
    """

    matrix: SparseFpMatrix
    col_index: tuple[MutantDescriptor, ...]
    row_index: tuple[MutantDescriptor, ...]
    rhs: npt.NDArray[np.int64]
    a_row: int | None

    def is_solvable(self) -> bool:
        """True when some combination of the columns equals the rhs."""
        if self.a_row is None:
            return False
        return is_consistent(self.matrix, self.rhs)


def assemble_system(A: Monomial, f: Trinomial, sets: MutantSets) -> AssembledSystem:
    """Equate coefficients of f * (sum c_D D) against e_A on the rows 𝓛.

    Column D receives coeff([tau]) in the row of D*[tau] whenever that
    product is an element of 𝓛.

    Raises:
        ValueError: If the sets were generated for a different base.
    """
    for descriptor in sets.A_set + sets.L_set:
        if descriptor.base != A:
            raise ValueError(
                f"mutant {descriptor.label()} belongs to {descriptor.base}, not {A}"
            )

    columns = tuple(sorted(sets.A_set, key=MutantDescriptor.order_key))
    rows = tuple(sorted(sets.L_set, key=MutantDescriptor.order_key, reverse=True))
    row_of: dict[LaurentMonomial, int] = {row.value: i for i, row in enumerate(rows)}

    entries = []
    for col, multiplier in enumerate(columns):
        for tau, term in enumerate(f.terms):
            product = multiplier.value.shift(f.monomials[tau].exponents)
            row = row_of.get(product)
            if row is not None:
                entries.append((row, col, term.coeff))
    matrix = SparseFpMatrix.from_entries(len(rows), len(columns), f.p, entries)

    a_row = row_of.get(A.to_laurent())
    rhs = np.zeros(len(rows), dtype=np.int64)
    if a_row is not None:
        rhs[a_row] = 1
    return AssembledSystem(matrix, columns, rows, rhs, a_row)


def first_columns(system: AssembledSystem) -> dict[int, int]:
    """C_{1,B} for every row with a nonzero entry: {row: ⪯-smallest column}."""
    first: dict[int, int] = {}
    for row, col, _ in system.matrix.entries():
        if row not in first or col < first[row]:
            first[row] = col
    return first


def select_C1_and_split(
    system: AssembledSystem,
) -> tuple[list[MutantDescriptor], list[MutantDescriptor]]:
    """Split the nonempty rows into R(A, f) and S(A, f).

    A row B belongs to R when a distinct row B' ≾ B shares its smallest
    column C_{1,B}. Rows are stored in decreasing ≾ order, so in each group
    of rows with equal C_1 every row but the last goes to R and the last
    goes to S. Rows without a nonzero entry are logged and left out.

    Returns:
        (R_set, S_set) in row order.
    """
    first = first_columns(system)
    empty = [i for i in range(len(system.row_index)) if i not in first]
    for i in empty:
        logger.info("row %s has no nonzero entry", system.row_index[i].label())

    last_row_for: dict[int, int] = {}
    for row in sorted(first):
        last_row_for[first[row]] = row
    r_set: list[MutantDescriptor] = []
    s_set: list[MutantDescriptor] = []
    for row in sorted(first):
        target = s_set if last_row_for[first[row]] == row else r_set
        target.append(system.row_index[row])
    return r_set, s_set
