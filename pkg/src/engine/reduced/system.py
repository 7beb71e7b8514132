"""Reduced System Module.

Builds the truncated system 𝔅_{A,f} 𝔜 = 𝔢 from its row families and
column shapes, splits it into the subsystem groups and decides its
solvability with a stability check at a wider truncation.
"""

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np
import numpy.typing as npt

from src.core.ring.monomial import Monomial
from src.core.ring.trinomial import Trinomial, laurent_apply
from src.engine.oracle.box import is_convergent
from src.engine.oracle.rank import is_consistent
from src.engine.oracle.sparse import SparseFpMatrix
from src.engine.reduced.entries import EntryContext, entry_of
from src.engine.reduced.indices import ColIndex, ColShape, RowFamily, RowIndex

logger = logging.getLogger(__name__)

DEFAULT_BOUND = 10
DEFAULT_STABILITY_DELTA = 2

Interval = tuple[int, int, int]


class Solvability(Enum):
    """Verdict on a truncated reduced system."""

    SOLVABLE = "Solvable"
    UNSOLVABLE = "Unsolvable"
    UNSTABLE = "Unstable"


@dataclass(frozen=True)
class ReducedSystem:
    """A truncated 𝔅_{A,f} with its indices.

    Attributes:
        matrix: The entries, via :func:`entry_of`.
        rows: Row indices in decreasing ≾ order.
        cols: Column indices in increasing ≾ order.
        e_vector: Zero except for e_A = 1 in the last position.
        ctx: M31, M21 and p.
        bound: Truncation of m, x, y, a and b.
    """

    matrix: SparseFpMatrix
    rows: tuple[RowIndex, ...]
    cols: tuple[ColIndex, ...]
    e_vector: npt.NDArray[np.int64]
    ctx: EntryContext
    bound: int

    @property
    def M31(self) -> int:
        """M_A(−3/1)."""
        return self.ctx.M31

    @property
    def M21(self) -> int:
        """M_A(−2/1)."""
        return self.ctx.M21


def _interval(values: list[int]) -> tuple[int, int] | None:
    return (min(values), max(values)) if values else None


def family_intervals(
    A: Monomial, f: Trinomial, q: int, ctx: EntryContext, bound: int
) -> tuple[tuple[Interval, ...], tuple[Interval, ...]]:
    """Ranges [a_m, b_m] and [p_m, q_m] of the high row families.

    For m >= M31, x is admissible when the mutator
    A([−3]/[1])^m([−3]/[2])^(x−1)[−3] is a monomial of the box; a_m and b_m
    are the least and largest admissible x <= bound. The F21 range is the
    same with [2] and [3] swapped, for m >= max(M21, 1).

    Returns:
        ((m, a_m, b_m), ...) and ((m, p_m, q_m), ...), leaving out m with
        no admissible value.
    """
    ranges31: list[Interval] = []
    for m in range(ctx.M31, bound + 1):
        hits = [
            x
            for x in range(1, bound + 1)
            if not is_convergent(laurent_apply(A, f, m, x - 1, -(m + x)), q)
        ]
        span = _interval(hits)
        if span is not None:
            ranges31.append((m, *span))
    ranges21: list[Interval] = []
    for m in range(max(ctx.M21, 1), bound + 1):
        hits = [
            y
            for y in range(1, bound + 1)
            if not is_convergent(laurent_apply(A, f, m, -(m + y), y - 1), q)
        ]
        span = _interval(hits)
        if span is not None:
            ranges21.append((m, *span))
    return tuple(ranges31), tuple(ranges21)


def rows_from_ranges(
    ctx: EntryContext,
    ranges31: tuple[Interval, ...],
    ranges21: tuple[Interval, ...],
    bound: int,
) -> list[RowIndex]:
    """Row families in decreasing ≾ order."""
    rows = [RowIndex(RowFamily.CASE_III_SINGLE)]
    low = range(min(ctx.M31, bound + 1))
    rows.extend(RowIndex(RowFamily.F31_LOW, m, 1) for m in low)
    for m, low, high in ranges31:
        rows.extend(RowIndex(RowFamily.F31_HIGH, m, x) for x in range(low, high + 1))
    rows.extend(
        RowIndex(RowFamily.F21_LOW, m, 1) for m in range(1, min(ctx.M21, bound + 1))
    )
    for m, low, high in ranges21:
        rows.extend(RowIndex(RowFamily.F21_HIGH, m, y) for y in range(low, high + 1))
    rows.sort(key=lambda row: (row.order_key(), row.family.value), reverse=True)
    return rows


def enumerate_rows(
    A: Monomial, f: Trinomial, q: int, ctx: EntryContext, bound: int
) -> list[RowIndex]:
    """All rows of the truncated system, ordered decreasing ≾.

    CaseIII_single, F31_low for 0 <= m < M31 (x = 1), F31_high for
    M31 <= m <= bound with x in [a_m, b_m], F21_low for 1 <= m < M21
    (y = 1) and F21_high for m >= M21 with y in [p_m, q_m].
    """
    ranges31, ranges21 = family_intervals(A, f, q, ctx, bound)
    return rows_from_ranges(ctx, ranges31, ranges21, bound)


def enumerate_cols(A: Monomial, f: Trinomial, q: int, bound: int) -> list[ColIndex]:
    """Convergent columns with parameters up to bound, increasing ≾."""
    cols = []
    for shape in ColShape:
        first_b = 0 if shape is ColShape.COL_MIXED else 1
        for a in range(bound + 1):
            for b in range(first_b, bound + 1):
                col = ColIndex(shape, a, b)
                if is_convergent(col.value(A, f), q):
                    cols.append(col)
    cols.sort(key=lambda col: (col.order_key(), col.shape.value))
    return cols


def assemble_reduced(
    rows: list[RowIndex], cols: list[ColIndex], ctx: EntryContext, bound: int
) -> ReducedSystem:
    """Fill the matrix entry by entry and attach e_A at the last row."""
    entries = []
    for i, row in enumerate(rows):
        for j, col in enumerate(cols):
            value = entry_of(row, col, ctx)
            if value:
                entries.append((i, j, value))
    matrix = SparseFpMatrix.from_entries(len(rows), len(cols), ctx.p, entries)
    e_vector = np.zeros(len(rows), dtype=np.int64)
    if rows:
        e_vector[-1] = 1
    return ReducedSystem(matrix, tuple(rows), tuple(cols), e_vector, ctx, bound)


def build_reduced_system(
    A: Monomial, f: Trinomial, q: int, bound: int = DEFAULT_BOUND
) -> ReducedSystem:
    """Truncated 𝔅_{A,f} 𝔜 = 𝔢 for A with all indices up to bound.

    Args:
        A: Box monomial.
        f: The trinomial.
        q: Box side p^n.
        bound: Truncation of every family parameter.

    Returns:
        The populated system with e_A = 1.
    """
    ctx = EntryContext.for_monomial(A, f, q)
    rows = enumerate_rows(A, f, q, ctx, bound)
    cols = enumerate_cols(A, f, q, bound)
    system = assemble_reduced(rows, cols, ctx, bound)
    logger.debug(
        "reduced system for %s: M31=%d M21=%d %dx%d nnz=%d",
        A,
        ctx.M31,
        ctx.M21,
        len(rows),
        len(cols),
        system.matrix.nnz,
    )
    return system


def subsystem_groups(system: ReducedSystem) -> dict[str, list[int]]:
    """Row positions of groups (i) to (iv).

    (i) is CaseIII_single with F31_low, (ii) splits F31_high by m, (iii) is
    F21_low and (iv) splits F21_high by m. Keys are "i", "ii:m", "iii" and
    "iv:m"; empty groups are left out.
    """
    groups: dict[str, list[int]] = {}
    for position, row in enumerate(system.rows):
        if row.family in (RowFamily.CASE_III_SINGLE, RowFamily.F31_LOW):
            name = "i"
        elif row.family is RowFamily.F31_HIGH:
            name = f"ii:{row.m}"
        elif row.family is RowFamily.F21_LOW:
            name = "iii"
        else:
            name = f"iv:{row.m}"
        groups.setdefault(name, []).append(position)
    return groups


def _truncated_verdict(system: ReducedSystem) -> Solvability:
    if not system.cols:
        return Solvability.UNSOLVABLE if system.e_vector.any() else Solvability.SOLVABLE
    for name, positions in subsystem_groups(system).items():
        rhs = system.e_vector[positions]
        if not rhs.any():
            continue
        block = system.matrix.submatrix(positions, np.arange(len(system.cols)))
        if not is_consistent(block, rhs):
            logger.debug("group %s of the reduced system is inconsistent", name)
            return Solvability.UNSOLVABLE
    return Solvability.SOLVABLE


def decide_solvability(
    system: ReducedSystem, extended: ReducedSystem | None = None
) -> Solvability:
    """Solvable iff every subsystem group is consistent over F_p.

    Groups without the e_A row are homogeneous and always consistent.
    When ``extended`` (the same monomial at a wider truncation) is given
    and its verdict differs, the result is Unstable.
    """
    verdict = _truncated_verdict(system)
    if extended is None:
        return verdict
    wider = _truncated_verdict(extended)
    if wider is not verdict:
        logger.debug(
            "verdict flips from %s at bound %d to %s at bound %d",
            verdict.value,
            system.bound,
            wider.value,
            extended.bound,
        )
        return Solvability.UNSTABLE
    return verdict


def solvability_at(
    A: Monomial,
    f: Trinomial,
    q: int,
    bound: int = DEFAULT_BOUND,
    delta: int = DEFAULT_STABILITY_DELTA,
) -> Solvability:
    """Build at bound and bound + delta and decide with the stability check."""
    return decide_solvability(
        build_reduced_system(A, f, q, bound),
        build_reduced_system(A, f, q, bound + delta),
    )
