"""Command-line interface for the Hilbert-Kunz toolkit.

Subcommands:

- compute: exact HK series of a trinomial.
- classify: membership verdicts for every monomial of a Frobenius box.
- analyze: reduced-system classes and unsolvable counts.
- estimate: multiplicity estimate and rationality probe.
- sweep: estimate and probe over a YAML family of trinomials.

Exit codes are 0 on success, 2 when the basis budget refuses a run and
1 on any other error.
"""

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import TypeVar

from src.core.diagnostics import DiagnosticsCollector
from src.core.errors import BudgetExceededError, HKError, SeriesError
from src.core.ring.parser import parse_trinomial
from src.core.ring.trinomial import Trinomial
from src.engine.estimator.multiplicity import estimate_multiplicity
from src.engine.estimator.rationality import rationality_probe
from src.engine.mutation.classifier import classify_box, reconcile
from src.engine.oracle.box import FrobeniusBox
from src.engine.oracle.colength import HKSeries, colength, hk_series
from src.engine.reduced.classes import count_unsolvable
from src.interface.api import reports
from src.interface.api.sweep import SweepSpec, display_sweep, run_sweep, sweep_payload
from src.managers.config_manager import ConfigManager
from src.utils.helpers.performance_monitor import PerformanceMonitor

logger = logging.getLogger(__name__)

T = TypeVar("T")


@dataclass(frozen=True)
class RunConfig:
    """Settings of one CLI run after YAML, environment and flags are merged."""

    poly_text: str | None
    p: int
    n: int | None
    n_max: int | None
    depth: int
    mutation_delta: int
    bound: int
    reduced_delta: int
    q_max: int
    rho_clamp: float
    min_points: int
    budget: int
    dense_bit_limit: int
    out: str | None
    fmt: reports.OutputFormat
    jobs: int
    chunk_size: int
    show_progress: bool

    def trinomial(self) -> Trinomial:
        """Parse ``--poly`` over F_p."""
        if self.poly_text is None:
            raise SeriesError("--poly is required for this command")
        return parse_trinomial(self.poly_text, self.p)

    def level(self) -> int:
        """The single Frobenius level ``-n``."""
        if self.n is None or self.n < 1:
            raise SeriesError("-n must be given and at least 1")
        return self.n


def _pick(flag: T | None, default: T) -> T:
    return default if flag is None else flag


_FLAG_SETTINGS = {
    "depth": ("mutation", "depth"),
    "bound": ("reduced_system", "bound"),
    "qmax": ("estimator", "q_max"),
    "jobs": ("performance", "max_workers"),
}


def apply_flag_overrides(args: argparse.Namespace, config: ConfigManager) -> None:
    """Write the flags that shadow configuration keys into the configuration.

    Raises:
        ConfigurationError: If a flag value is out of range.
    """
    for flag, (section, key) in _FLAG_SETTINGS.items():
        value = getattr(args, flag, None)
        if value is not None:
            config.update_config(section, key, value)


def build_run_config(args: argparse.Namespace, config: ConfigManager) -> RunConfig:
    """Merge parsed flags over the loaded configuration."""
    apply_flag_overrides(args, config)
    logger.debug("effective configuration: %s", config.get_full_config())
    fmt = args.format or (
        reports.format_for_path(args.out) if args.out else reports.OutputFormat.JSON
    )
    return RunConfig(
        poly_text=getattr(args, "poly", None),
        p=args.p,
        n=getattr(args, "n", None),
        n_max=getattr(args, "nmax", None),
        depth=config.mutation.depth,
        mutation_delta=config.mutation.stability_delta,
        bound=config.reduced_system.bound,
        reduced_delta=config.reduced_system.stability_delta,
        q_max=config.estimator.q_max,
        rho_clamp=config.estimator.rho_clamp,
        min_points=config.estimator.min_points,
        budget=_pick(args.budget, config.oracle.budget),
        dense_bit_limit=config.oracle.dense_bit_limit,
        out=args.out,
        fmt=reports.OutputFormat(fmt),
        jobs=config.performance.max_workers,
        chunk_size=config.performance.chunk_size,
        show_progress=config.performance.show_progress,
    )


def _write(payload: dict[str, object], cfg: RunConfig) -> None:
    content = reports.emit(payload, cfg.fmt, cfg.out)
    if not cfg.out:
        sys.stdout.write(content)


def cmd_compute(cfg: RunConfig, monitor: PerformanceMonitor) -> int:
    """Write the HK series of ``--poly`` up to ``--nmax``."""
    f = cfg.trinomial()
    if cfg.n_max is None:
        raise SeriesError("--nmax is required")
    FrobeniusBox(f.m, 1, f.field).check_budget(cfg.budget)
    with monitor.measure("series"):
        series = hk_series(
            f, cfg.n_max, budget=cfg.budget, dense_bit_limit=cfg.dense_bit_limit
        )
    monitor.add_custom_metric("levels", len(series.points))
    _write(reports.series_payload(series, monitor.get_metrics()), cfg)
    if cfg.out:
        reports.display_series(series)
    return 0


def cmd_classify(cfg: RunConfig, monitor: PerformanceMonitor, check: bool) -> int:
    """Write membership verdicts for the box at level ``-n``."""
    f = cfg.trinomial()
    n = cfg.level()
    with monitor.measure("classify"):
        verdicts = classify_box(
            f,
            n,
            cfg.depth,
            delta=cfg.mutation_delta,
            budget=cfg.budget,
            max_workers=cfg.jobs,
            show_progress=cfg.show_progress,
        )
    monitor.add_custom_metric("box_size", len(verdicts))
    report = None
    if check:
        with monitor.measure("reconcile"):
            report = reconcile(f, n, verdicts, budget=cfg.budget)
    _write(reports.verdicts_payload(f, n, verdicts, report, monitor.get_metrics()), cfg)
    if cfg.out and report is not None:
        reports.display_reconciliation(report)
    return 0


def cmd_analyze(cfg: RunConfig, monitor: PerformanceMonitor, check: bool) -> int:
    """Write the reduced-system class table for the box at level ``-n``."""
    f = cfg.trinomial()
    n = cfg.level()
    with monitor.measure("analyze"):
        table = count_unsolvable(
            f,
            n,
            cfg.bound,
            delta=cfg.reduced_delta,
            budget=cfg.budget,
            max_workers=cfg.jobs,
            show_progress=cfg.show_progress,
        )
    monitor.add_custom_metric("classes", len(table.classes))
    if check:
        with monitor.measure("oracle"):
            table.oracle_colength = colength(
                f, n, budget=cfg.budget, dense_bit_limit=cfg.dense_bit_limit
            )
    _write(reports.classes_payload(f, n, table, monitor.get_metrics()), cfg)
    if cfg.out:
        reports.display_class_table(table)
    return 0


def _load_or_compute_series(
    cfg: RunConfig, series_path: str | None, monitor: PerformanceMonitor
) -> HKSeries:
    if series_path:
        f = cfg.trinomial() if cfg.poly_text else None
        return reports.read_series(series_path, f)
    if cfg.poly_text is None or cfg.n_max is None:
        raise SeriesError("estimate needs --series, or --poly with --nmax")
    f = cfg.trinomial()
    with monitor.measure("series"):
        return hk_series(
            f, cfg.n_max, budget=cfg.budget, dense_bit_limit=cfg.dense_bit_limit
        )


def cmd_estimate(
    cfg: RunConfig,
    monitor: PerformanceMonitor,
    series_path: str | None,
    d: int | None,
) -> int:
    """Write the multiplicity estimate and probe for a series."""
    series = _load_or_compute_series(cfg, series_path, monitor)
    with monitor.measure("estimate"):
        estimate = estimate_multiplicity(
            series, d, rho_clamp=cfg.rho_clamp, min_points=cfg.min_points
        )
        probe = rationality_probe(estimate, cfg.q_max)
    _write(reports.report_payload(estimate, probe, series, monitor.get_metrics()), cfg)
    if cfg.out:
        reports.display_report(estimate, probe)
    return 0


def cmd_sweep(cfg: RunConfig, monitor: PerformanceMonitor, spec_path: str) -> int:
    """Run a sweep file and write the sorted summary."""
    spec = SweepSpec.load(spec_path)
    diagnostics = DiagnosticsCollector()
    with monitor.measure("sweep"):
        rows = run_sweep(
            spec,
            budget=cfg.budget,
            q_max=cfg.q_max,
            rho_clamp=cfg.rho_clamp,
            min_points=cfg.min_points,
            max_workers=cfg.jobs,
            chunk_size=cfg.chunk_size,
            show_progress=cfg.show_progress,
            diagnostics=diagnostics,
        )
    monitor.add_custom_metric("members", len(rows))
    if diagnostics:
        logger.warning("%d sweep members skipped", len(diagnostics))
    payload = sweep_payload(rows, spec)
    payload["skipped"] = list(diagnostics.warnings)
    payload["timings"] = monitor.get_metrics()
    _write(payload, cfg)
    if cfg.out:
        display_sweep(rows)
    return 0


def create_cli() -> argparse.ArgumentParser:
    """Create the command-line parser.

    Returns:
        argparse.ArgumentParser: The CLI parser
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-p", type=int, default=2, help="Field characteristic")
    common.add_argument("--budget", type=int, help="Largest basis size q^m")
    common.add_argument(
        "--format",
        choices=[fmt.value for fmt in reports.OutputFormat],
        help="Output format",
    )
    common.add_argument("--jobs", type=int, help="Worker processes")
    common.add_argument("--out", "-o", help="Output file; stdout when omitted")
    common.add_argument("--config", "-c", help="Configuration file")
    common.add_argument("--verbose", "-v", action="store_true", help="Debug logging")

    parser = argparse.ArgumentParser(
        prog="hk", description="Hilbert-Kunz functions of trinomial hypersurfaces"
    )
    subparsers = parser.add_subparsers(dest="command", help="Command to execute")
    subparsers.required = True

    compute_parser = subparsers.add_parser(
        "compute", parents=[common], help="Exact HK series"
    )
    compute_parser.add_argument("--poly", required=True, help="Trinomial text")
    compute_parser.add_argument("--nmax", type=int, required=True, help="Highest level")

    classify_parser = subparsers.add_parser(
        "classify", parents=[common], help="Membership verdicts for a box"
    )
    classify_parser.add_argument("--poly", required=True, help="Trinomial text")
    classify_parser.add_argument("-n", type=int, required=True, help="Frobenius level")
    classify_parser.add_argument("--depth", type=int, help="Mutant closure depth")
    classify_parser.add_argument(
        "--reconcile", action="store_true", help="Compare with the oracle"
    )

    analyze_parser = subparsers.add_parser(
        "analyze", parents=[common], help="Reduced-system class counts"
    )
    analyze_parser.add_argument("--poly", required=True, help="Trinomial text")
    analyze_parser.add_argument("-n", type=int, required=True, help="Frobenius level")
    analyze_parser.add_argument("--bound", type=int, help="Truncation bound")
    analyze_parser.add_argument(
        "--reconcile", action="store_true", help="Attach the oracle HK(n)"
    )

    estimate_parser = subparsers.add_parser(
        "estimate", parents=[common], help="Multiplicity estimate and probe"
    )
    estimate_parser.add_argument("--series", help="Series file from compute")
    estimate_parser.add_argument("--poly", help="Trinomial text")
    estimate_parser.add_argument("--nmax", type=int, help="Highest level")
    estimate_parser.add_argument("--d", type=int, help="Dimension override")
    estimate_parser.add_argument("--qmax", type=int, help="Largest denominator")

    sweep_parser = subparsers.add_parser(
        "sweep", parents=[common], help="Estimate over a family"
    )
    sweep_parser.add_argument("--spec", required=True, help="Sweep YAML file")
    sweep_parser.add_argument("--qmax", type=int, help="Largest denominator")

    return parser


def _dispatch(
    args: argparse.Namespace, cfg: RunConfig, monitor: PerformanceMonitor
) -> int:
    handlers: dict[str, Callable[[], int]] = {
        "compute": lambda: cmd_compute(cfg, monitor),
        "classify": lambda: cmd_classify(cfg, monitor, args.reconcile),
        "analyze": lambda: cmd_analyze(cfg, monitor, args.reconcile),
        "estimate": lambda: cmd_estimate(cfg, monitor, args.series, args.d),
        "sweep": lambda: cmd_sweep(cfg, monitor, args.spec),
    }
    return handlers[args.command]()


def main(argv: Sequence[str] | None = None) -> int:
    """Main entry point for the command line interface."""
    args = create_cli().parse_args(argv)
    try:
        config = ConfigManager(args.config)
        logging.basicConfig(
            level=logging.DEBUG if args.verbose else config.logging.level,
            format=config.logging.format,
        )
        cfg = build_run_config(args, config)
        return _dispatch(args, cfg, PerformanceMonitor())
    except BudgetExceededError as e:
        print(f"hk: {e.message}", file=sys.stderr)
        return 2
    except HKError as e:
        print(f"hk: {e.message}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as e:
        print(f"hk: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
