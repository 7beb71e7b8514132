"""Reports Module.

JSON and CSV writers and readers for the four artifacts of a run: HK
series, membership verdicts, class tables and estimate reports. Exact
integers and rationals are written as decimal strings so that every
file reads back to the values it was written from. Human summaries are
printed with rich.
"""

import csv
import io
import json
import logging
import os
import re
from abc import ABC, abstractmethod
from collections.abc import Sequence
from enum import Enum
from fractions import Fraction
from typing import Any

from rich.console import Console
from rich.table import Table

from src.core.errors import PolynomialParseError, SeriesError
from src.core.ring.monomial import Monomial
from src.core.ring.parser import parse_monomial, parse_trinomial
from src.core.ring.trinomial import Trinomial, classify_variables
from src.engine.estimator.multiplicity import MultiplicityEstimate
from src.engine.estimator.rationality import (
    Candidate,
    RationalityReport,
    RationalityVerdict,
)
from src.engine.mutation.classifier import (
    Membership,
    ReconciliationReport,
    Verdict,
)
from src.engine.oracle.colength import HKSeries
from src.engine.reduced.classes import ClassKey, ClassRecord, ClassTable

logger = logging.getLogger(__name__)


class OutputFormat(Enum):
    """Supported artifact formats."""

    JSON = "json"
    CSV = "csv"


class OutputGenerator(ABC):
    """Base class for artifact writers."""

    @abstractmethod
    def generate(self, payload: dict[str, Any]) -> str:
        """Render a payload built by one of the ``*_payload`` helpers.

        Args:
            payload: Plain data; tables live under ``"rows"`` with their
                column names under ``"header"``.

        Returns:
            The file content.
        """

    def save_to_file(self, content: str, output_path: str) -> None:
        """Save generated content to file, creating parent directories."""
        os.makedirs(os.path.dirname(os.path.abspath(output_path)), exist_ok=True)
        with open(output_path, "w", encoding="utf-8", newline="") as file:
            file.write(content)
        logger.info("Output written to %s", output_path)


class JsonOutputGenerator(OutputGenerator):
    """Indented JSON; the CSV-only ``header``/``rows`` keys are dropped."""

    def generate(self, payload: dict[str, Any]) -> str:
        document = {k: v for k, v in payload.items() if k not in ("header", "rows")}
        return json.dumps(document, indent=2) + "\n"


class CsvOutputGenerator(OutputGenerator):
    """One header line followed by the payload rows."""

    def generate(self, payload: dict[str, Any]) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(payload["header"])
        writer.writerows(payload["rows"])
        return buffer.getvalue()


def get_generator(fmt: OutputFormat | str) -> OutputGenerator:
    """Writer for a format name."""
    if OutputFormat(fmt) is OutputFormat.CSV:
        return CsvOutputGenerator()
    return JsonOutputGenerator()


def format_for_path(
    path: str, default: OutputFormat = OutputFormat.JSON
) -> OutputFormat:
    """Infer the format from a file suffix."""
    suffix = os.path.splitext(path)[1].lower().lstrip(".")
    return OutputFormat(suffix) if suffix in ("json", "csv") else default


def emit(
    payload: dict[str, Any], fmt: OutputFormat | str, path: str | None = None
) -> str:
    """Render the payload and write it to ``path`` when one is given."""
    generator = get_generator(fmt)
    content = generator.generate(payload)
    if path:
        generator.save_to_file(content, path)
    return content


def _load_json(path: str) -> dict[str, Any]:
    try:
        with open(path, encoding="utf-8") as file:
            document = json.load(file)
    except json.JSONDecodeError as e:
        raise SeriesError(f"{path} is not valid JSON: {e}") from e
    if not isinstance(document, dict):
        raise SeriesError(f"{path} does not hold a JSON object")
    return document


def _load_csv(path: str) -> list[dict[str, str]]:
    with open(path, encoding="utf-8", newline="") as file:
        return list(csv.DictReader(file))


def _trinomial_fields(f: Trinomial) -> dict[str, Any]:
    return {"p": f.p, "m": f.m, "poly": str(f)}


def _variable_fields(f: Trinomial) -> dict[str, Any]:
    _, back = f.arranged()
    return {
        "variables": {**classify_variables(f).as_dict(), "arrangement": list(back)}
    }


def _trinomial_from(document: dict[str, Any]) -> Trinomial:
    return parse_trinomial(document["poly"], int(document["p"]), int(document["m"]))


# Series


def series_payload(
    series: HKSeries, timings: dict[str, Any] | None = None
) -> dict[str, Any]:
    """JSON {p, m, poly, points: [{n, q, hk}], truncated}; CSV n,q,hk."""
    points = [
        {"n": n, "q": str(series.p**n), "hk": str(value)} for n, value in series.points
    ]
    payload: dict[str, Any] = {
        **_trinomial_fields(series.f),
        "points": points,
        "truncated": series.truncated,
        "header": ["n", "q", "hk"],
        "rows": [[point["n"], point["q"], point["hk"]] for point in points],
    }
    if timings:
        payload["timings"] = timings
    return payload


def write_series(
    series: HKSeries,
    path: str,
    fmt: OutputFormat | str | None = None,
    timings: dict[str, Any] | None = None,
) -> None:
    """Write a series as JSON or CSV, by ``fmt`` or the file suffix."""
    emit(series_payload(series, timings), fmt or format_for_path(path), path)


def read_series(path: str, f: Trinomial | None = None) -> HKSeries:
    """Read a series written by :func:`write_series`.

    Args:
        path: A .json or .csv file.
        f: The trinomial; required for CSV, which carries only n, q and hk.

    Raises:
        SeriesError: On malformed content, or a CSV read without ``f``.
    """
    if format_for_path(path) is OutputFormat.JSON:
        document = _load_json(path)
        try:
            f = _trinomial_from(document)
            points = tuple((int(pt["n"]), int(pt["hk"])) for pt in document["points"])
            truncated = bool(document.get("truncated", False))
        except (KeyError, TypeError, ValueError) as e:
            raise SeriesError(f"{path} is not a series file: {e}") from e
        return HKSeries(f.p, f, points, truncated)
    if f is None:
        raise SeriesError(f"reading CSV series {path} needs the trinomial")
    try:
        points = tuple((int(row["n"]), int(row["hk"])) for row in _load_csv(path))
    except (KeyError, TypeError, ValueError) as e:
        raise SeriesError(f"{path} is not a series CSV: {e}") from e
    return HKSeries(f.p, f, points)


# Verdicts


def verdicts_payload(
    f: Trinomial,
    n: int,
    verdicts: Sequence[tuple[Monomial, Membership]],
    reconciliation: ReconciliationReport | None = None,
    timings: dict[str, Any] | None = None,
) -> dict[str, Any]:
    """Per-monomial verdicts in deglex order, with the optional reconciliation.

    The CSV columns are monomial, verdict and witness.
    """
    entries = [
        {
            "monomial": str(mon),
            "exponents": list(mon.exponents),
            "verdict": membership.verdict.value,
            "witness": membership.witness,
        }
        for mon, membership in verdicts
    ]
    payload: dict[str, Any] = {
        **_trinomial_fields(f),
        **_variable_fields(f),
        "n": n,
        "verdicts": entries,
        "header": ["monomial", "verdict", "witness"],
        "rows": [
            [
                e["monomial"],
                e["verdict"],
                "" if e["witness"] is None else e["witness"],
            ]
            for e in entries
        ],
    }
    if reconciliation is not None:
        payload["reconciliation"] = reconciliation.as_dict()
    if timings:
        payload["timings"] = timings
    return payload


def _membership(verdict: str, witness: Any) -> Membership:
    value = Verdict(verdict)
    if witness in (None, ""):
        return Membership(value)
    if value is Verdict.IN_VIA_II:
        return Membership(value, int(witness))
    return Membership(value, str(witness))


def read_verdicts(
    path: str, m: int | None = None
) -> list[tuple[Monomial, Membership]]:
    """Read verdicts written from :func:`verdicts_payload`.

    Args:
        path: A .json or .csv file.
        m: Variable count for CSV files. Defaults to one more than the
            largest variable index in the file, which a full box always
            reaches.

    Raises:
        SeriesError: On malformed content.
    """
    try:
        if format_for_path(path) is OutputFormat.JSON:
            return [
                (
                    Monomial(tuple(entry["exponents"])),
                    _membership(entry["verdict"], entry["witness"]),
                )
                for entry in _load_json(path)["verdicts"]
            ]
        rows = _load_csv(path)
        if m is None:
            indices = [
                int(index)
                for row in rows
                for index in re.findall(r"x(\d+)", row["monomial"])
            ]
            m = max(indices, default=-1) + 1
        return [
            (
                parse_monomial(row["monomial"], m),
                _membership(row["verdict"], row["witness"]),
            )
            for row in rows
        ]
    except (KeyError, TypeError, ValueError, PolynomialParseError) as e:
        raise SeriesError(f"{path} is not a verdicts file: {e}") from e


# Classes


def _key_dict(key: ClassKey) -> dict[str, Any]:
    return {
        "M31": key.M31,
        "M21": key.M21,
        "ranges31": [list(r) for r in key.ranges31],
        "ranges21": [list(r) for r in key.ranges21],
        "columns": [list(c) for c in key.columns],
        "bound": key.bound,
        "z_set": sorted(key.z_set),
    }


def _key_from(document: dict[str, Any]) -> ClassKey:
    return ClassKey(
        int(document["M31"]),
        int(document["M21"]),
        tuple((int(m), int(lo), int(hi)) for m, lo, hi in document["ranges31"]),
        tuple((int(m), int(lo), int(hi)) for m, lo, hi in document["ranges21"]),
        tuple((str(s), int(a), int(b)) for s, a, b in document["columns"]),
        int(document["bound"]),
    )


def classes_payload(
    f: Trinomial,
    n: int,
    table: ClassTable,
    timings: dict[str, Any] | None = None,
) -> dict[str, Any]:
    """JSON {classes: [...], totals}; the CSV holds the cumulative sequence.

    Each class carries its key, size, unsolvable and unstable counts and
    the per-truncation sequence {m, count, class_total}. The member list
    follows so that the file reads back to the same table.
    """
    sequence = [
        {"m": m, "unsolvable": u, "hk_count": str(h), "ratio": str(r)}
        for m, u, h, r in table.sequence
    ]
    payload: dict[str, Any] = {
        **_trinomial_fields(f),
        **_variable_fields(f),
        "n": n,
        "classes": [
            {
                "key": _key_dict(record.key),
                "size": record.size,
                "unsolvable": record.unsolvable,
                "unstable": record.unstable,
                "sequence": [
                    {"m": m, "count": count, "class_total": total}
                    for m, count, total in record.sequence
                ],
                "members": list(record.members),
            }
            for record in table.classes
        ],
        "totals": {
            "q": table.q,
            "bound": table.bound,
            "label": table.label,
            "unsolvable": table.total_unsolvable,
            "unstable": table.total_unstable,
            "tallies": dict(table.tallies),
            "oracle_colength": (
                None if table.oracle_colength is None else str(table.oracle_colength)
            ),
            "sequence": sequence,
        },
        "header": ["m", "unsolvable", "hk_count", "ratio"],
        "rows": [
            [s["m"], s["unsolvable"], s["hk_count"], s["ratio"]] for s in sequence
        ],
    }
    if timings:
        payload["timings"] = timings
    return payload


def read_classes(path: str) -> ClassTable | list[tuple[int, int, int, Fraction]]:
    """Read a class file.

    Returns:
        The full :class:`ClassTable` from JSON, or the cumulative
        (m, unsolvable, hk_count, ratio) sequence from CSV.
    """
    try:
        if format_for_path(path) is OutputFormat.CSV:
            return [
                (
                    int(row["m"]),
                    int(row["unsolvable"]),
                    int(row["hk_count"]),
                    Fraction(row["ratio"]),
                )
                for row in _load_csv(path)
            ]
        document = _load_json(path)
        totals = document["totals"]
        table = ClassTable(
            int(totals["q"]),
            int(totals["bound"]),
            tallies={k: int(v) for k, v in totals["tallies"].items()},
            label=totals["label"],
        )
        if totals.get("oracle_colength") is not None:
            table.oracle_colength = int(totals["oracle_colength"])
        table.sequence = [
            (
                int(s["m"]),
                int(s["unsolvable"]),
                int(s["hk_count"]),
                Fraction(s["ratio"]),
            )
            for s in totals["sequence"]
        ]
        table.classes = [
            ClassRecord(
                _key_from(entry["key"]),
                list(entry["members"]),
                int(entry["unsolvable"]),
                int(entry["unstable"]),
                [
                    (int(s["m"]), int(s["count"]), int(s["class_total"]))
                    for s in entry["sequence"]
                ],
            )
            for entry in document["classes"]
        ]
        return table
    except (KeyError, TypeError, ValueError) as e:
        raise SeriesError(f"{path} is not a classes file: {e}") from e


# Estimate reports

REPORT_HEADER = [
    "d",
    "values",
    "estimate",
    "band",
    "rho",
    "converged",
    "verdict",
    "q_max",
    "candidates",
]


def report_payload(
    estimate: MultiplicityEstimate,
    probe: RationalityReport,
    series: HKSeries | None = None,
    timings: dict[str, Any] | None = None,
) -> dict[str, Any]:
    """JSON {estimate, band, converged, candidates, verdict, ...}; CSV one row."""
    candidates = ";".join(f"{c.numerator}/{c.denominator}" for c in probe.candidates)
    payload: dict[str, Any] = {
        **estimate.as_dict(),
        **probe.as_dict(),
        "header": REPORT_HEADER,
        "rows": [
            [
                estimate.d,
                ";".join(str(v) for v in estimate.values),
                str(estimate.estimate),
                str(estimate.error_band),
                str(estimate.rho),
                str(estimate.converged).lower(),
                probe.verdict.value,
                probe.q_max,
                candidates,
            ]
        ],
    }
    if series is not None:
        payload.update(_trinomial_fields(series.f))
        payload["points"] = [[n, str(v)] for n, v in series.points]
    if timings:
        payload["timings"] = timings
    return payload


def _exact(text: str) -> Fraction:
    return Fraction(text)


def _rebuild_probe(
    estimate: MultiplicityEstimate,
    verdict: str,
    q_max: int,
    fractions: list[Fraction],
) -> RationalityReport:
    value = Fraction(estimate.estimate)
    candidates = tuple(
        Candidate(c.numerator, c.denominator, abs(value - c)) for c in fractions
    )
    return RationalityReport(
        RationalityVerdict(verdict),
        candidates,
        candidates[0] if candidates else None,
        q_max,
    )


def read_report(path: str) -> tuple[MultiplicityEstimate, RationalityReport]:
    """Read an estimate report written from :func:`report_payload`."""
    try:
        if format_for_path(path) is OutputFormat.JSON:
            document = _load_json(path)
            estimate = MultiplicityEstimate(
                int(document["d"]),
                tuple(_exact(v) for v in document["values"]),
                _exact(document["estimate"]),
                _exact(document["band"]),
                bool(document["converged"]),
                _exact(document["rho"]),
            )
            fractions = [
                Fraction(int(c["numerator"]), int(c["denominator"]))
                for c in document["candidates"]
            ]
            return estimate, _rebuild_probe(
                estimate, document["verdict"], int(document["q_max"]), fractions
            )
        (row,) = _load_csv(path)
        estimate = MultiplicityEstimate(
            int(row["d"]),
            tuple(_exact(v) for v in row["values"].split(";") if v),
            _exact(row["estimate"]),
            _exact(row["band"]),
            row["converged"] == "true",
            _exact(row["rho"]),
        )
        fractions = [_exact(c) for c in row["candidates"].split(";") if c]
        return estimate, _rebuild_probe(
            estimate, row["verdict"], int(row["q_max"]), fractions
        )
    except (KeyError, TypeError, ValueError) as e:
        raise SeriesError(f"{path} is not a report file: {e}") from e


# Terminal summaries


def display_series(series: HKSeries, console: Console | None = None) -> None:
    """Table of n, q and HK(n)."""
    console = console or Console()
    table = Table(title=f"HK series of {series.f} over F_{series.p}")
    table.add_column("n", style="cyan", justify="right")
    table.add_column("q", justify="right")
    table.add_column("HK(n)", style="green", justify="right")
    for n, value in series.points:
        table.add_row(str(n), str(series.p**n), str(value))
    console.print(table)
    if series.truncated:
        console.print("[yellow]series truncated by the basis budget[/yellow]")


def display_reconciliation(
    report: ReconciliationReport, console: Console | None = None
) -> None:
    """Verdict counts and the oracle comparison."""
    console = console or Console()
    table = Table(title="Membership verdicts")
    table.add_column("Verdict", style="cyan")
    table.add_column("Count", style="green", justify="right")
    for verdict, count in report.counts.items():
        table.add_row(verdict, str(count))
    table.add_row("oracle colength", str(report.colength))
    table.add_row("contradictions", str(len(report.contradictions)))
    table.add_row("undetermined fraction", f"{report.undetermined_fraction:.4f}")
    console.print(table)


def display_class_table(table: ClassTable, console: Console | None = None) -> None:
    """Per-class counts and the final cumulative ratio."""
    console = console or Console()
    out = Table(title=f"Reduced-system classes ({table.label})")
    out.add_column("M31", justify="right")
    out.add_column("M21", justify="right")
    out.add_column("Size", justify="right")
    out.add_column("Unsolvable", style="green", justify="right")
    out.add_column("Unstable", style="yellow", justify="right")
    for record in table.classes:
        out.add_row(
            str(record.key.M31),
            str(record.key.M21),
            str(record.size),
            str(record.unsolvable),
            str(record.unstable),
        )
    console.print(out)
    if table.sequence:
        m, unsolvable, hk_count, ratio = table.sequence[-1]
        console.print(
            f"m={m}: unsolvable={unsolvable} hk_count={hk_count} ratio={ratio}"
        )
    if table.oracle_colength is not None:
        console.print(f"oracle HK(n) = {table.oracle_colength}")


def display_report(
    estimate: MultiplicityEstimate,
    probe: RationalityReport,
    console: Console | None = None,
) -> None:
    """Estimate, band and probe verdict."""
    console = console or Console()
    table = Table(title="Multiplicity estimate")
    table.add_column("Metric", style="cyan")
    table.add_column("Value", style="green")
    table.add_row("d", str(estimate.d))
    table.add_row("estimate", f"{estimate.estimate} ({float(estimate.estimate):.6f})")
    table.add_row("band", f"{float(estimate.error_band):.3g}")
    table.add_row("converged", str(estimate.converged))
    table.add_row("verdict", probe.verdict.value)
    if probe.best is not None:
        table.add_row("best", f"{probe.best.numerator}/{probe.best.denominator}")
    console.print(table)
