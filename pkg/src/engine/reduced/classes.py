"""Classes Module.

Groups box monomials by the truncated set ℤ_A of integers that shape
their reduced system, decides one system per class and counts the
unsolvable ones. All counts derived here rest on the reconstructed
interval endpoints and are labelled accordingly.
"""

import logging
from collections.abc import Iterable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from tqdm import tqdm

from src.core.ring.monomial import Monomial, deglex_key
from src.core.ring.trinomial import Trinomial
from src.engine.mutation.conditions import (
    certify_condition_ii,
    check_condition_i,
    check_condition_ii,
)
from src.engine.oracle.box import DEFAULT_BUDGET, FrobeniusBox
from src.engine.reduced.entries import EntryContext
from src.engine.reduced.indices import ColIndex, ColShape
from src.engine.reduced.system import (
    DEFAULT_BOUND,
    DEFAULT_STABILITY_DELTA,
    Interval,
    ReducedSystem,
    Solvability,
    assemble_reduced,
    decide_solvability,
    enumerate_cols,
    family_intervals,
    rows_from_ranges,
)

logger = logging.getLogger(__name__)

RANGES_LABEL = "under reconstructed ranges"


@dataclass(frozen=True, order=True)
class ClassKey:
    """Truncated ℤ_A plus everything else the reduced system depends on.

    Attributes:
        M31: M_A(−3/1).
        M21: M_A(−2/1).
        ranges31: (m, a_m, b_m) for the F31_high rows.
        ranges21: (m, p_m, q_m) for the F21_high rows.
        columns: Signatures of the convergent columns.
        bound: The truncation.
    """

    M31: int
    M21: int
    ranges31: tuple[Interval, ...]
    ranges21: tuple[Interval, ...]
    columns: tuple[tuple[str, int, int], ...]
    bound: int

    @property
    def z_set(self) -> frozenset[int]:
        """{M31, M21} together with every a_m, b_m, p_m and q_m."""
        values = {self.M31, self.M21}
        for _, low, high in self.ranges31 + self.ranges21:
            values.update((low, high))
        return frozenset(values)

    def as_dict(self) -> dict[str, object]:
        """Plain-data view for reports."""
        return {
            "M31": self.M31,
            "M21": self.M21,
            "ranges31": [list(r) for r in self.ranges31],
            "ranges21": [list(r) for r in self.ranges21],
            "z_set": sorted(self.z_set),
            "columns": len(self.columns),
            "bound": self.bound,
        }


def class_key(
    A: Monomial, f: Trinomial, q: int, bound: int = DEFAULT_BOUND
) -> ClassKey:
    """The truncated ℤ_A of A, starting with M31 and M21."""
    ctx = EntryContext.for_monomial(A, f, q)
    ranges31, ranges21 = family_intervals(A, f, q, ctx, bound)
    columns = tuple(col.signature() for col in enumerate_cols(A, f, q, bound))
    return ClassKey(ctx.M31, ctx.M21, ranges31, ranges21, columns, bound)


def system_from_key(key: ClassKey, p: int) -> ReducedSystem:
    """Rebuild the truncated system that every member of a class shares."""
    ctx = EntryContext(key.M31, key.M21, p)
    rows = rows_from_ranges(ctx, key.ranges31, key.ranges21, key.bound)
    cols = [ColIndex(ColShape(shape), a, b) for shape, a, b in key.columns]
    return assemble_reduced(rows, cols, ctx, key.bound)


@dataclass
class ClassRecord:
    """Aggregated verdicts of one class.

    Attributes:
        key: The class key at the full bound.
        members: Monomials of the class, as text.
        unsolvable: Members whose system is Unsolvable.
        unstable: Members whose verdict flips at the wider bound.
        sequence: (m, unsolvable members at truncation m, class size).
    """

    key: ClassKey
    members: list[str] = field(default_factory=list)
    unsolvable: int = 0
    unstable: int = 0
    sequence: list[tuple[int, int, int]] = field(default_factory=list)

    @property
    def size(self) -> int:
        """Number of members."""
        return len(self.members)

    def ratios(self) -> list[Fraction]:
        """count / class size along the truncation sequence."""
        return [Fraction(count, total) for _, count, total in self.sequence]


@dataclass
class ClassTable:
    """Result of :func:`count_unsolvable`.

    Attributes:
        q: Box side.
        bound: Truncation.
        classes: Class records in key order.
        tallies: Monomials settled before any system: via_i, via_ii and
            no_divisor, plus the number of candidates.
        sequence: (m, unsolvable, hk_count, ratio) with
            hk_count = no_divisor + unsolvable and ratio = hk_count / q^d.
        oracle_colength: Oracle HK(n) when a comparison was requested.
        label: Reminder that the ranges are reconstructed.
    """

    q: int
    bound: int
    classes: list[ClassRecord] = field(default_factory=list)
    tallies: dict[str, int] = field(default_factory=dict)
    sequence: list[tuple[int, int, int, Fraction]] = field(default_factory=list)
    oracle_colength: int | None = None
    label: str = RANGES_LABEL

    @property
    def total_unsolvable(self) -> int:
        """Unsolvable members over all classes."""
        return sum(record.unsolvable for record in self.classes)

    @property
    def total_unstable(self) -> int:
        """Unstable members over all classes."""
        return sum(record.unstable for record in self.classes)


class _VerdictCache:
    """One truncated verdict per distinct key."""

    def __init__(self, p: int) -> None:
        self.p = p
        self.systems: dict[ClassKey, ReducedSystem] = {}
        self.verdicts: dict[tuple[ClassKey, ClassKey], Solvability] = {}

    def system(self, key: ClassKey) -> ReducedSystem:
        if key not in self.systems:
            self.systems[key] = system_from_key(key, self.p)
        return self.systems[key]

    def verdict(self, key: ClassKey, wider: ClassKey) -> Solvability:
        pair = (key, wider)
        if pair not in self.verdicts:
            self.verdicts[pair] = decide_solvability(
                self.system(key), self.system(wider)
            )
        return self.verdicts[pair]


def split_box(
    f: Trinomial, q: int, monomials: Iterable[Monomial]
) -> tuple[dict[str, int], list[Monomial]]:
    """Settle conditions (i), (ii) and the no-divisor case up front.

    Returns:
        Tallies {via_i, via_ii, no_divisor} and the remaining candidates,
        which have [2] or [3] dividing them.
    """
    tallies = {"via_i": 0, "via_ii": 0, "no_divisor": 0}
    candidates = []
    for A in monomials:
        if check_condition_i(A, f):
            tallies["via_i"] += 1
            continue
        m_value = check_condition_ii(A, f, q)
        if m_value is not None and certify_condition_ii(A, f, q, m_value):
            tallies["via_ii"] += 1
            continue
        if not (f.t2.mon.divides(A) or f.t3.mon.divides(A)):
            tallies["no_divisor"] += 1
            continue
        candidates.append(A)
    return tallies, candidates


def _keys_task(
    args: tuple[Monomial, Trinomial, int, tuple[int, ...]],
) -> list[ClassKey]:
    A, f, q, bounds = args
    return [class_key(A, f, q, bound) for bound in bounds]


def _all_keys(
    f: Trinomial,
    q: int,
    candidates: list[Monomial],
    bounds: tuple[int, ...],
    max_workers: int,
    show_progress: bool,
) -> list[list[ClassKey]]:
    tasks = [(A, f, q, bounds) for A in candidates]
    if max_workers > 1 and tasks:
        with ProcessPoolExecutor(max_workers=max_workers) as executor:
            futures = [executor.submit(_keys_task, task) for task in tasks]
            return [
                future.result()
                for future in tqdm(
                    futures, desc="Class keys", disable=not show_progress
                )
            ]
    return [
        _keys_task(task)
        for task in tqdm(tasks, desc="Class keys", disable=not show_progress)
    ]


def count_unsolvable(
    f: Trinomial,
    n: int,
    bound: int = DEFAULT_BOUND,
    *,
    delta: int = DEFAULT_STABILITY_DELTA,
    budget: int = DEFAULT_BUDGET,
    max_workers: int = 1,
    show_progress: bool = False,
) -> ClassTable:
    """Group box monomials by class and count unsolvable reduced systems.

    Monomials settled by condition (i), a certified condition (ii) or the
    absence of a dividing term are tallied and skipped. Every other
    monomial is keyed at each truncation m = 1..bound (and m + delta for
    the stability check); verdicts are computed once per distinct key.

    Args:
        f: The trinomial.
        n: Frobenius level.
        bound: Largest truncation.
        delta: Width of the stability check.
        budget: Largest allowed q^m.
        max_workers: Worker processes for the key computation.
        show_progress: Show tqdm bars.

    Returns:
        The per-class table with the cumulative sequences.

    Raises:
        BudgetExceededError: If q^m exceeds budget.
    """
    box = FrobeniusBox(f.m, n, f.field)
    box.check_budget(budget)
    monomials = sorted(box.monomials(), key=lambda mon: deglex_key(mon.exponents))
    tallies, candidates = split_box(f, box.q, monomials)
    tallies["candidates"] = len(candidates)

    bounds = tuple(range(1, bound + delta + 1))
    keys = _all_keys(f, box.q, candidates, bounds, max_workers, show_progress)
    cache = _VerdictCache(f.p)

    records: dict[ClassKey, ClassRecord] = {}
    per_member: list[tuple[ClassRecord, list[ClassKey]]] = []
    for A, member_keys in zip(candidates, keys, strict=True):
        full = member_keys[bound - 1]
        record = records.setdefault(full, ClassRecord(full))
        record.members.append(str(A))
        per_member.append((record, member_keys))
        verdict = cache.verdict(full, member_keys[bound + delta - 1])
        if verdict is Solvability.UNSOLVABLE:
            record.unsolvable += 1
        elif verdict is Solvability.UNSTABLE:
            record.unstable += 1

    table = ClassTable(box.q, bound, tallies=tallies)
    table.classes = [records[key] for key in sorted(records)]
    d = f.m - 1
    for level in range(1, bound + 1):
        counts: dict[ClassKey, int] = {}
        for record, member_keys in per_member:
            verdict = cache.verdict(
                member_keys[level - 1], member_keys[level + delta - 1]
            )
            if verdict is Solvability.UNSOLVABLE:
                counts[record.key] = counts.get(record.key, 0) + 1
        for record in table.classes:
            record.sequence.append((level, counts.get(record.key, 0), record.size))
        unsolvable = sum(counts.values())
        hk_count = tallies["no_divisor"] + unsolvable
        ratio = Fraction(hk_count, box.q**d)
        table.sequence.append((level, unsolvable, hk_count, ratio))
    logger.info(
        "%d classes over %d candidates, %d unsolvable and %d unstable (%s)",
        len(table.classes),
        len(candidates),
        table.total_unsolvable,
        table.total_unstable,
        RANGES_LABEL,
    )
    return table


@dataclass(frozen=True)
class StabilityReport:
    """Agreement of reduced-system verdicts at bound and bound + delta."""

    total: int
    stable: int
    unstable: tuple[str, ...]

    @property
    def fraction(self) -> Fraction:
        """Share of stable verdicts, 1 for an empty candidate set."""
        return Fraction(self.stable, self.total) if self.total else Fraction(1)


def stability_report(
    f: Trinomial,
    n: int,
    bound: int = DEFAULT_BOUND,
    *,
    delta: int = DEFAULT_STABILITY_DELTA,
    budget: int = DEFAULT_BUDGET,
) -> StabilityReport:
    """Fraction of candidate monomials whose verdict is not Unstable."""
    box = FrobeniusBox(f.m, n, f.field)
    box.check_budget(budget)
    monomials = sorted(box.monomials(), key=lambda mon: deglex_key(mon.exponents))
    _, candidates = split_box(f, box.q, monomials)
    cache = _VerdictCache(f.p)
    unstable = []
    for A in candidates:
        verdict = cache.verdict(
            class_key(A, f, box.q, bound), class_key(A, f, box.q, bound + delta)
        )
        if verdict is Solvability.UNSTABLE:
            unstable.append(str(A))
    stable = len(candidates) - len(unstable)
    return StabilityReport(len(candidates), stable, tuple(unstable))
