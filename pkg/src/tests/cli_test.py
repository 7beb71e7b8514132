"""Test the hk command line, its report files and sweeps."""

import json
from fractions import Fraction
from pathlib import Path

import pytest

from src.core.diagnostics import DiagnosticsCollector
from src.core.errors import ConfigurationError, SeriesError
from src.core.ring.monomial import Monomial
from src.core.ring.parser import parse_trinomial
from src.engine.estimator.multiplicity import estimate_multiplicity
from src.engine.estimator.rationality import rationality_probe
from src.engine.mutation.classifier import classify_box, reconcile
from src.engine.oracle.colength import hk_series
from src.engine.reduced.classes import ClassTable, count_unsolvable
from src.interface.api import reports
from src.interface.api.cli import main
from src.interface.api.sweep import SweepSpec, family_members, run_member, run_sweep

CONIC = "x0^2 + x0*x1 + x1^2"
WALKER = "x0^2 + x0*x1 + x2^2"


@pytest.fixture(autouse=True)
def _no_budget_override(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.delenv("HK_BUDGET", raising=False)


def test_compute_writes_series(tmp_path: Path) -> None:
    """compute of the linear form gives 4, 16, 64."""
    # Arrange
    out = tmp_path / "series.json"

    # Act
    code = main(
        ["compute", "--poly", "x0+x1+x2", "-p", "2", "--nmax", "3", "--out", str(out)]
    )

    # Assert
    assert code == 0
    assert reports.read_series(str(out)).points == ((1, 4), (2, 16), (3, 64))
    document = json.loads(out.read_text())
    assert document["points"][0] == {"n": 1, "q": "2", "hk": "4"}
    assert "series" in document["timings"]
    assert document["timings"]["custom"] == {"levels": [3]}


def test_compute_to_stdout_as_csv(capsys: pytest.CaptureFixture[str]) -> None:
    """Without --out the file content goes to stdout."""
    # Act
    code = main(["compute", "--poly", CONIC, "--nmax", "2", "--format", "csv"])

    # Assert
    assert code == 0
    assert capsys.readouterr().out.splitlines() == ["n,q,hk", "1,2,3", "2,4,7"]


@pytest.mark.parametrize(
    ("argv", "expected"),
    [
        (["compute", "--poly", "x0+x1", "-p", "2", "--nmax", "1"], 1),
        (["compute", "--poly", "x0+x1+x2", "-p", "4", "--nmax", "1"], 1),
        (["compute", "--poly", "x0+x1+x2", "--nmax", "1", "--budget", "4"], 2),
        (["classify", "--poly", CONIC, "-n", "3", "--budget", "16"], 2),
        (["compute", "--poly", "x0+x1+x2", "--nmax", "0"], 1),
        (["estimate", "--series", "missing.json"], 1),
        (["compute", "--poly", "x0+x1+x2", "--nmax", "1", "--config", "nope.yaml"], 1),
        (["classify", "--poly", CONIC, "-n", "1", "--depth", "0"], 1),
        (["estimate", "--poly", CONIC, "--nmax", "3", "--qmax", "0"], 1),
    ],
    ids=[
        "two-terms",
        "non-prime",
        "budget",
        "classify-budget",
        "zero-levels",
        "missing-series",
        "missing-config",
        "zero-depth",
        "zero-qmax",
    ],
)
def test_exit_codes(
    argv: list[str], expected: int, capsys: pytest.CaptureFixture[str]
) -> None:
    """0 on success, 2 on budget refusal, 1 on any other error, one stderr line."""
    # Act
    code = main(argv)

    # Assert
    assert code == expected
    err = capsys.readouterr().err.strip().splitlines()
    assert len(err) == 1
    assert err[0].startswith("hk: ")


def test_budget_from_environment(monkeypatch: pytest.MonkeyPatch) -> None:
    """HK_BUDGET lowers the default budget."""
    monkeypatch.setenv("HK_BUDGET", "4")
    assert main(["compute", "--poly", "x0+x1+x2", "--nmax", "1"]) == 2


def test_classify_with_reconciliation(tmp_path: Path) -> None:
    """Verdicts file round-trips and carries the reconciliation."""
    # Arrange
    out = tmp_path / "verdicts.json"

    # Act
    code = main(
        ["classify", "--poly", CONIC, "-n", "1", "--reconcile", "--out", str(out)]
    )

    # Assert
    assert code == 0
    verdicts = reports.read_verdicts(str(out))
    assert [mon for mon, _ in verdicts][-1] == Monomial((1, 1))
    assert verdicts[-1][1].verdict.value == "InViaIII"
    assert json.loads(out.read_text())["reconciliation"]["contradictions"] == []


def test_analyze_writes_class_table(tmp_path: Path) -> None:
    """analyze output reads back as a class table with the oracle value."""
    # Arrange
    out = tmp_path / "classes.json"

    # Act
    code = main(
        ["analyze", "--poly", CONIC, "-n", "2", "--bound", "3", "--reconcile"]
        + ["--out", str(out)]
    )

    # Assert
    assert code == 0
    table = reports.read_classes(str(out))
    assert isinstance(table, ClassTable)
    assert table.oracle_colength == 7
    assert len(table.sequence) == 3
    document = json.loads(out.read_text())
    assert set(document) >= {"classes", "totals"}
    first = document["classes"][0]
    assert set(first) >= {"key", "size", "unsolvable", "unstable", "sequence"}
    assert set(first["sequence"][0]) == {"m", "count", "class_total"}
    assert first["sequence"][-1]["class_total"] == first["size"]
    assert document["totals"]["oracle_colength"] == "7"
    candidates = document["totals"]["tallies"]["candidates"]
    assert sum(entry["size"] for entry in document["classes"]) == candidates


def test_estimate_from_series_file(tmp_path: Path) -> None:
    """compute then estimate composes; the linear form has multiplicity 1."""
    # Arrange
    series = tmp_path / "series.json"
    report = tmp_path / "report.json"
    main(["compute", "--poly", "x0+x1+x2", "--nmax", "3", "--out", str(series)])

    # Act
    code = main(["estimate", "--series", str(series), "--out", str(report)])

    # Assert
    assert code == 0
    estimate, probe = reports.read_report(str(report))
    assert estimate.estimate == 1
    assert estimate.error_band == 0
    assert probe.verdict.value == "ConsistentWithRational"
    assert probe.best is not None
    assert (probe.best.numerator, probe.best.denominator) == (1, 1)
    document = json.loads(report.read_text())
    assert document["estimate"] == "1"
    assert document["band"] == "0"
    assert document["converged"] is True
    assert document["verdict"] == "ConsistentWithRational"
    assert document["candidates"][0]["numerator"] == 1


@pytest.mark.parametrize("suffix", ["json", "csv"], ids=["json", "csv"])
def test_series_round_trip(tmp_path: Path, suffix: str) -> None:
    """Exact values survive both formats."""
    # Arrange
    f = parse_trinomial(CONIC, 2)
    series = hk_series(f, 4)
    path = str(tmp_path / f"series.{suffix}")

    # Act
    reports.write_series(series, path)

    # Assert
    assert reports.read_series(path, f) == series


def test_csv_series_needs_trinomial(tmp_path: Path) -> None:
    """The CSV carries no polynomial."""
    # Arrange
    path = str(tmp_path / "series.csv")
    reports.write_series(hk_series(parse_trinomial(CONIC, 2), 2), path)

    # Act & Assert
    with pytest.raises(SeriesError):
        reports.read_series(path)


@pytest.mark.parametrize("suffix", ["json", "csv"], ids=["json", "csv"])
def test_verdicts_round_trip(tmp_path: Path, suffix: str) -> None:
    """Verdicts and witnesses read back unchanged."""
    # Arrange
    f = parse_trinomial(WALKER, 2)
    verdicts = classify_box(f, 1)
    payload = reports.verdicts_payload(f, 1, verdicts, reconcile(f, 1, verdicts))
    path = str(tmp_path / f"verdicts.{suffix}")

    # Act
    reports.emit(payload, suffix, path)

    # Assert
    assert reports.read_verdicts(path) == verdicts


def test_verdicts_csv_columns(tmp_path: Path) -> None:
    """The CSV has monomial, verdict and witness columns only."""
    # Arrange
    f = parse_trinomial(CONIC, 2)
    verdicts = classify_box(f, 1)
    path = tmp_path / "verdicts.csv"

    # Act
    reports.emit(reports.verdicts_payload(f, 1, verdicts), "csv", str(path))

    # Assert
    lines = path.read_text().splitlines()
    assert lines[0] == "monomial,verdict,witness"
    assert lines[1].startswith("1,NotIn,")
    assert reports.read_verdicts(str(path), m=2) == verdicts


def test_classes_round_trip(tmp_path: Path) -> None:
    """JSON class tables read back field for field; CSV keeps the sequence."""
    # Arrange
    f = parse_trinomial(WALKER, 2)
    table = count_unsolvable(f, 1, bound=2, delta=1)
    json_path = str(tmp_path / "classes.json")
    csv_path = str(tmp_path / "classes.csv")

    # Act
    reports.emit(reports.classes_payload(f, 1, table), "json", json_path)
    reports.emit(reports.classes_payload(f, 1, table), "csv", csv_path)

    # Assert
    assert reports.read_classes(json_path) == table
    assert reports.read_classes(csv_path) == table.sequence


@pytest.mark.parametrize("suffix", ["json", "csv"], ids=["json", "csv"])
def test_report_round_trip(tmp_path: Path, suffix: str) -> None:
    """Estimate and probe read back exactly."""
    # Arrange
    series = hk_series(parse_trinomial(CONIC, 2), 5)
    estimate = estimate_multiplicity(series)
    probe = rationality_probe(estimate)
    path = str(tmp_path / f"report.{suffix}")

    # Act
    reports.emit(reports.report_payload(estimate, probe, series), suffix, path)

    # Assert
    assert reports.read_report(path) == (estimate, probe)


def test_family_members_are_deterministic() -> None:
    """Generated members follow the deglex-sorted monomial triples."""
    # Arrange
    spec = SweepSpec(p=2, n_max=3, m=2, max_degree=2, limit=3)

    # Act
    members = family_members(spec)

    # Assert
    assert members == ["x0 + x1 + x0^2", "x0 + x1 + x0*x1", "x0 + x1 + x1^2"]
    assert family_members(spec) == members
    assert len(family_members(SweepSpec(m=2, max_degree=2))) == 10


def test_require_all_variables_filter() -> None:
    """Members missing a variable are dropped."""
    members = family_members(SweepSpec(m=2, max_degree=2, require_all_variables=True))
    assert "x0 + x0^2 + x0*x1" in members
    assert all("x1" in text for text in members)


def test_run_member_matches_compute_and_estimate() -> None:
    """A sweep row is the composition of series, estimate and probe."""
    # Arrange
    from src.interface.api.sweep import SweepSettings

    settings = SweepSettings(p=2, m=2, n_max=4)

    # Act
    row = run_member(CONIC, settings)

    # Assert
    assert row.last_hk == 31
    assert row.estimate == Fraction(31, 16)
    assert row.band == Fraction(1, 8)
    assert row.verdict == "ConsistentWithRational"
    assert row.best == "2/1"


def test_sweep_skips_bad_members() -> None:
    """An unparsable member is logged and skipped; rows stay sorted."""
    # Arrange
    spec = SweepSpec(p=2, n_max=4, m=2, polys=(CONIC, "x0 + x1", "x0 + x1 + x0*x1"))
    diagnostics = DiagnosticsCollector()

    # Act
    rows = run_sweep(spec, diagnostics=diagnostics)

    # Assert
    assert len(rows) == 2
    assert len(diagnostics) == 1
    assert rows == sorted(rows, key=lambda row: row.sort_key())


def test_sweep_fails_when_every_member_fails() -> None:
    """All members failing is an error."""
    with pytest.raises(SeriesError):
        run_sweep(SweepSpec(p=2, n_max=2, m=2, polys=("x0 + x1",)))


def test_sweep_command(tmp_path: Path) -> None:
    """The sweep subcommand writes a sorted CSV and exits 0 despite a bad row."""
    # Arrange
    spec = tmp_path / "family.yaml"
    spec.write_text(
        "p: 2\nn_max: 4\nm: 2\nmax_degree: 2\npolys:\n"
        f'  - "{CONIC}"\n  - "x0 + x1"\n  - "x0 + x1 + x1^2"\n'
    )
    out = tmp_path / "sweep.csv"

    # Act
    code = main(["sweep", "--spec", str(spec), "--out", str(out)])

    # Assert
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("poly,points,truncated")
    assert len(lines) == 3


def test_shipped_family_is_large_enough() -> None:
    """The characteristic-2 family has at least twenty members."""
    # Arrange
    path = Path(__file__).parent.parent / "sweeps" / "char2_family.yaml"

    # Act
    spec = SweepSpec.load(str(path))

    # Assert
    assert spec.p == 2
    assert len(family_members(spec)) >= 20


def test_sweep_spec_rejects_unknown_keys() -> None:
    """Typos in sweep files are configuration errors."""
    with pytest.raises(ConfigurationError):
        SweepSpec.from_dict({"p": 2, "nmax": 3})
