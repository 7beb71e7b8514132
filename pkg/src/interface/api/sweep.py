"""Sweep Module.

Runs the series, estimate and rationality probe over a family of
trinomials described in YAML, and tabulates the results sorted by probe
verdict and then by error band.
"""

import itertools
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import yaml
from rich.console import Console
from rich.table import Table
from tqdm import tqdm

from src.core.diagnostics import DiagnosticsCollector
from src.core.errors import ConfigurationError, HKError, SeriesError
from src.core.ring.monomial import Monomial, deglex_key
from src.core.ring.parser import parse_trinomial
from src.core.ring.trinomial import Term, Trinomial
from src.engine.estimator.multiplicity import (
    DEFAULT_RHO_CLAMP,
    MIN_POINTS,
    estimate_multiplicity,
)
from src.engine.estimator.rationality import DEFAULT_Q_MAX, rationality_probe
from src.engine.oracle.box import DEFAULT_BUDGET
from src.engine.oracle.colength import hk_series

logger = logging.getLogger(__name__)

SUMMARY_HEADER = [
    "poly",
    "points",
    "truncated",
    "last_hk",
    "estimate",
    "estimate_float",
    "band",
    "converged",
    "verdict",
    "best",
]


@dataclass(frozen=True)
class SweepSpec:
    """A finite family of trinomials to scan.

    Attributes:
        p: Field characteristic.
        n_max: Highest Frobenius level computed per member.
        m: Number of variables.
        max_degree: Largest term degree of generated members.
        polys: Explicit member texts; overrides generation when given.
        limit: Keep at most this many members.
        require_all_variables: Drop generated members that miss a variable.
    """

    p: int = 2
    n_max: int = 4
    m: int = 3
    max_degree: int = 2
    polys: tuple[str, ...] = field(default_factory=tuple)
    limit: int | None = None
    require_all_variables: bool = False

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> "SweepSpec":
        """Build from parsed YAML.

        Raises:
            ConfigurationError: On unknown keys or out-of-range values.
        """
        try:
            spec = cls(**{**raw, "polys": tuple(raw.get("polys") or ())})
        except TypeError as e:
            raise ConfigurationError(f"Invalid sweep file: {e}") from e
        if spec.n_max < 1 or spec.m < 1 or spec.max_degree < 1:
            raise ConfigurationError("n_max, m and max_degree must be at least 1")
        if spec.limit is not None and spec.limit < 1:
            raise ConfigurationError("limit must be at least 1")
        return spec

    @classmethod
    def load(cls, path: str) -> "SweepSpec":
        """Read a YAML sweep file."""
        if not os.path.exists(path):
            raise ConfigurationError(f"Sweep file not found: {path}")
        try:
            with open(path, encoding="utf-8") as f:
                raw = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigurationError(f"Error parsing sweep file: {e}") from e
        if not isinstance(raw, dict):
            raise ConfigurationError(f"Sweep file {path} is not a mapping")
        return cls.from_dict(raw)


def _monomials_up_to(m: int, max_degree: int) -> list[Monomial]:
    exponents = [
        exps
        for exps in itertools.product(range(max_degree + 1), repeat=m)
        if 1 <= sum(exps) <= max_degree
    ]
    return [Monomial(exps) for exps in sorted(exponents, key=deglex_key)]


def family_members(spec: SweepSpec) -> list[str]:
    """Member texts in a fixed order.

    Explicit ``polys`` are kept as written. Otherwise every triple of
    distinct monomials of degree 1..max_degree, in lexicographic order of
    the deglex-sorted triple, becomes a unit-coefficient trinomial.
    """
    if spec.polys:
        members = list(spec.polys)
    else:
        members = []
        pool = _monomials_up_to(spec.m, spec.max_degree)
        for triple in itertools.combinations(pool, 3):
            if spec.require_all_variables and not all(
                any(mon.exponents[i] for mon in triple) for i in range(spec.m)
            ):
                continue
            f = Trinomial.from_terms([Term(1, mon) for mon in triple], spec.p)
            members.append(str(f))
    if spec.limit is not None:
        members = members[: spec.limit]
    logger.info("sweep family has %d members", len(members))
    return members


@dataclass(frozen=True)
class SweepRow:
    """Summary of one family member."""

    poly: str
    points: int
    truncated: bool
    last_hk: int
    estimate: Fraction
    band: Fraction
    converged: bool
    verdict: str
    best: str

    def sort_key(self) -> tuple[str, Fraction, str]:
        """Probe verdict, then band, then text."""
        return (self.verdict, self.band, self.poly)

    def as_row(self) -> list[object]:
        """CSV cells; exact values as strings."""
        return [
            self.poly,
            self.points,
            str(self.truncated).lower(),
            str(self.last_hk),
            str(self.estimate),
            f"{float(self.estimate):.9g}",
            str(self.band),
            str(self.converged).lower(),
            self.verdict,
            self.best,
        ]


@dataclass(frozen=True)
class SweepSettings:
    """Per-member run parameters, shipped to worker processes."""

    p: int
    m: int
    n_max: int
    budget: int = DEFAULT_BUDGET
    q_max: int = DEFAULT_Q_MAX
    rho_clamp: float = DEFAULT_RHO_CLAMP
    min_points: int = MIN_POINTS


def run_member(text: str, settings: SweepSettings) -> SweepRow:
    """Series, estimate and probe for one member.

    Raises:
        HKError: When the member does not parse or its series is too short.
    """
    f = parse_trinomial(text, settings.p, settings.m)
    series = hk_series(f, settings.n_max, budget=settings.budget)
    estimate = estimate_multiplicity(
        series, rho_clamp=settings.rho_clamp, min_points=settings.min_points
    )
    probe = rationality_probe(estimate, settings.q_max)
    best = ""
    if probe.best is not None:
        best = f"{probe.best.numerator}/{probe.best.denominator}"
    return SweepRow(
        str(f),
        len(series),
        series.truncated,
        series.values[-1],
        Fraction(estimate.estimate),
        Fraction(estimate.error_band),
        estimate.converged,
        probe.verdict.value,
        best,
    )


def _member_task(args: tuple[str, SweepSettings]) -> SweepRow | str:
    text, settings = args
    try:
        return run_member(text, settings)
    except HKError as e:
        return f"skipped {text!r}: {e.message}"


def run_sweep(
    spec: SweepSpec,
    *,
    budget: int = DEFAULT_BUDGET,
    q_max: int = DEFAULT_Q_MAX,
    rho_clamp: float = DEFAULT_RHO_CLAMP,
    min_points: int = MIN_POINTS,
    max_workers: int = 1,
    chunk_size: int = 1,
    show_progress: bool = False,
    diagnostics: DiagnosticsCollector | None = None,
) -> list[SweepRow]:
    """Run every member and return the rows sorted by verdict then band.

    Failing members are logged, recorded in ``diagnostics`` and skipped.

    Raises:
        SeriesError: If every member fails.
    """
    diagnostics = diagnostics if diagnostics is not None else DiagnosticsCollector()
    settings = SweepSettings(
        spec.p, spec.m, spec.n_max, budget, q_max, rho_clamp, min_points
    )
    tasks = [(text, settings) for text in family_members(spec)]
    if max_workers > 1 and tasks:
        with ProcessPoolExecutor(max_workers=max_workers) as executor:
            outcomes = list(
                tqdm(
                    executor.map(_member_task, tasks, chunksize=max(chunk_size, 1)),
                    total=len(tasks),
                    desc="Sweep",
                    disable=not show_progress,
                )
            )
    else:
        outcomes = [
            _member_task(task)
            for task in tqdm(tasks, desc="Sweep", disable=not show_progress)
        ]
    rows = []
    for outcome in outcomes:
        if isinstance(outcome, str):
            diagnostics.handle_warning(outcome)
        else:
            rows.append(outcome)
    if tasks and not rows:
        raise SeriesError(f"all {len(tasks)} sweep members failed")
    rows.sort(key=SweepRow.sort_key)
    return rows


def sweep_payload(rows: list[SweepRow], spec: SweepSpec) -> dict[str, Any]:
    """Summary in the shape the report writers take."""
    cells = [row.as_row() for row in rows]
    return {
        "p": spec.p,
        "m": spec.m,
        "n_max": spec.n_max,
        "members": [dict(zip(SUMMARY_HEADER, cell, strict=True)) for cell in cells],
        "header": SUMMARY_HEADER,
        "rows": cells,
    }


def display_sweep(rows: list[SweepRow], console: Console | None = None) -> None:
    """Rich table of the sweep summary."""
    console = console or Console()
    table = Table(title="Sweep summary")
    table.add_column("Trinomial", style="cyan")
    table.add_column("n", justify="right")
    table.add_column("Estimate", justify="right")
    table.add_column("Band", justify="right")
    table.add_column("Verdict", style="green")
    table.add_column("Best")
    for row in rows:
        table.add_row(
            row.poly,
            str(row.points),
            f"{float(row.estimate):.6f}",
            f"{float(row.band):.3g}",
            row.verdict,
            row.best,
        )
    console.print(table)
