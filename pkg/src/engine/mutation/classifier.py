"""Classifier Module.

Decides whether a box monomial A lies in A_c + J by the three conditions
of the membership theorem, and reconciles a whole box of verdicts
against the oracle's standard monomials.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

from tqdm import tqdm

from src.core.ring.monomial import Monomial, deglex_key
from src.core.ring.trinomial import Trinomial
from src.engine.mutation.conditions import (
    certify_condition_ii,
    check_condition_i,
    check_condition_ii,
)
from src.engine.mutation.mutants import generate_mutant_sets
from src.engine.mutation.system import assemble_system
from src.engine.oracle.box import DEFAULT_BUDGET, FrobeniusBox
from src.engine.oracle.colength import PivotRule, standard_monomials

logger = logging.getLogger(__name__)

DEFAULT_DEPTH = 8
DEFAULT_STABILITY_DELTA = 2


class Verdict(Enum):
    """Outcome of a membership test."""

    IN_VIA_I = "InViaI"
    IN_VIA_II = "InViaII"
    IN_VIA_III = "InViaIII"
    NOT_IN = "NotIn"
    UNDETERMINED = "Undetermined"

    @property
    def is_member(self) -> bool | None:
        """True for the In verdicts, False for NotIn, None when undetermined."""
        if self is Verdict.UNDETERMINED:
            return None
        return self is not Verdict.NOT_IN


@dataclass(frozen=True)
class Membership:
    """Verdict plus its witness.

    Attributes:
        verdict: The verdict.
        witness: M for condition (ii); a short summary of the solved or
            saturated system for condition (iii); None otherwise.
    """

    verdict: Verdict
    witness: int | str | None = None


def _system_verdict(
    A: Monomial, f: Trinomial, q: int, depth: int
) -> tuple[bool, bool, str]:
    sets = generate_mutant_sets(A, f, q, depth)
    system = assemble_system(A, f, sets)
    summary = f"depth={depth} rows={len(system.row_index)} cols={len(system.col_index)}"
    return system.is_solvable(), sets.saturated, summary


def classify_monomial(
    A: Monomial,
    f: Trinomial,
    q: int,
    depth: int = DEFAULT_DEPTH,
    *,
    delta: int = DEFAULT_STABILITY_DELTA,
) -> Membership:
    """Decide A ∈ A_c + J.

    Condition (i) is tried first, then a certified condition (ii). If
    neither [2] nor [3] divides A the answer is NotIn. Otherwise the
    truncated system is solved at ``depth`` and ``depth + delta``. Equal
    verdicts give InViaIII or NotIn; a verdict that changes between the
    two depths is Undetermined.

    Args:
        A: Box monomial.
        f: The trinomial.
        q: Box side p^n.
        depth: Breadth-first depth of the mutant closure.
        delta: Extra depth of the stability check.

    Returns:
        The membership verdict with its witness.
    """
    if check_condition_i(A, f):
        return Membership(Verdict.IN_VIA_I)
    m_value = check_condition_ii(A, f, q)
    if m_value is not None and certify_condition_ii(A, f, q, m_value):
        return Membership(Verdict.IN_VIA_II, m_value)
    if not (f.t2.mon.divides(A) or f.t3.mon.divides(A)):
        return Membership(Verdict.NOT_IN, "no term divides A")

    shallow, _, _ = _system_verdict(A, f, q, depth)
    deep, saturated, summary = _system_verdict(A, f, q, depth + delta)
    if shallow != deep:
        logger.debug(
            "%s: system verdict changes between depth %d and %d",
            A,
            depth,
            depth + delta,
        )
        return Membership(Verdict.UNDETERMINED, summary)
    if deep:
        return Membership(Verdict.IN_VIA_III, summary)
    return Membership(Verdict.NOT_IN, f"saturated {summary}" if saturated else summary)


def _classify_task(
    args: tuple[Monomial, Trinomial, int, int, int],
) -> Membership:
    A, f, q, depth, delta = args
    return classify_monomial(A, f, q, depth, delta=delta)


def classify_box(
    f: Trinomial,
    n: int,
    depth: int = DEFAULT_DEPTH,
    *,
    delta: int = DEFAULT_STABILITY_DELTA,
    budget: int = DEFAULT_BUDGET,
    max_workers: int = 1,
    show_progress: bool = False,
) -> list[tuple[Monomial, Membership]]:
    """Classify every monomial of the level-n box, in deglex order.

    Args:
        f: The trinomial.
        n: Frobenius level.
        depth: Mutant closure depth.
        delta: Extra depth of the stability check.
        budget: Largest allowed q^m.
        max_workers: Worker processes; 1 runs in-process.
        show_progress: Show a tqdm bar.

    Raises:
        BudgetExceededError: If q^m exceeds budget.
    """
    box = FrobeniusBox(f.m, n, f.field)
    box.check_budget(budget)
    monomials = sorted(box.monomials(), key=lambda mon: deglex_key(mon.exponents))
    tasks = [(mon, f, box.q, depth, delta) for mon in monomials]
    if max_workers > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as executor:
            futures = [executor.submit(_classify_task, task) for task in tasks]
            results = [
                future.result()
                for future in tqdm(
                    futures, desc="Classifying", disable=not show_progress
                )
            ]
    else:
        results = [
            _classify_task(task)
            for task in tqdm(tasks, desc="Classifying", disable=not show_progress)
        ]
    return list(zip(monomials, results, strict=True))


@dataclass
class ReconciliationReport:
    """Classifier verdicts compared with the oracle.

    Attributes:
        q_power_m: Box size q^m.
        colength: Oracle HK(n).
        counts: Verdict value -> number of monomials.
        contradictions: Monomials whose decided verdict disagrees with the
            oracle, as (monomial, verdict, oracle says member).
        undetermined: Monomials left Undetermined.
    """

    q_power_m: int
    colength: int
    counts: dict[str, int] = field(default_factory=dict)
    contradictions: list[tuple[str, str, bool]] = field(default_factory=list)
    undetermined: list[str] = field(default_factory=list)

    @property
    def members(self) -> int:
        """Number of monomials with an In verdict."""
        return sum(
            count
            for verdict, count in self.counts.items()
            if Verdict(verdict).is_member
        )

    @property
    def undetermined_fraction(self) -> float:
        """Share of the box left Undetermined."""
        return len(self.undetermined) / self.q_power_m if self.q_power_m else 0.0

    @property
    def count_consistent(self) -> bool | None:
        """members + colength == q^m, or None while anything is undetermined."""
        if self.undetermined:
            return None
        return self.members + self.colength == self.q_power_m

    def as_dict(self) -> dict[str, object]:
        """Plain-data view for reports."""
        return {
            "box_size": self.q_power_m,
            "colength": self.colength,
            "counts": dict(self.counts),
            "members": self.members,
            "undetermined_fraction": self.undetermined_fraction,
            "count_consistent": self.count_consistent,
            "contradictions": [
                {"monomial": mon, "verdict": verdict, "oracle_member": oracle}
                for mon, verdict, oracle in self.contradictions
            ],
        }


def reconcile(
    f: Trinomial,
    n: int,
    verdicts: list[tuple[Monomial, Membership]],
    *,
    budget: int = DEFAULT_BUDGET,
) -> ReconciliationReport:
    """Compare verdicts with the oracle's smallest-pivot elimination."""
    box = FrobeniusBox(f.m, n, f.field)
    standard = set(standard_monomials(f, n, PivotRule.SMALLEST, budget=budget))
    report = ReconciliationReport(box.size, len(standard))
    for verdict in Verdict:
        report.counts[verdict.value] = 0
    for mon, membership in verdicts:
        report.counts[membership.verdict.value] += 1
        decided = membership.verdict.is_member
        if decided is None:
            report.undetermined.append(str(mon))
            continue
        oracle_member = mon not in standard
        if decided != oracle_member:
            report.contradictions.append(
                (str(mon), membership.verdict.value, oracle_member)
            )
    if report.contradictions:
        logger.warning(
            "%d verdicts contradict the oracle for %s at n=%d",
            len(report.contradictions),
            f,
            n,
        )
    return report
