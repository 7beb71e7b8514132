"""Multiplicity Module.

Estimates the Hilbert-Kunz multiplicity, the coefficient of p^(nd) in
HK(n), from exact series values with a geometric-tail error band.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from src.core.errors import SeriesError
from src.engine.oracle.colength import HKSeries

logger = logging.getLogger(__name__)

DEFAULT_RHO_CLAMP = 0.9
MIN_POINTS = 3


@dataclass(frozen=True)
class MultiplicityEstimate:
    """Estimate of the HK multiplicity with its diagnostics.

    Attributes:
        d: Dimension used for the normalisation p^(nd).
        values: r_n = HK(n) / p^(nd), one per series point.
        estimate: The last r_n; floats are accepted for hand-made estimates.
        error_band: Geometric-tail bound on |estimate − limit|.
        converged: The last difference is zero or smaller than the one
            before it.
        rho: Observed ratio of successive differences, after clamping.
    """

    d: int
    values: tuple[Fraction, ...]
    estimate: Fraction | float
    error_band: Fraction | float
    converged: bool
    rho: Fraction = Fraction(0)

    def as_dict(self) -> dict[str, object]:
        """Plain-data view; rationals become decimal strings."""
        return {
            "d": self.d,
            "values": [str(v) for v in self.values],
            "estimate": str(self.estimate),
            "estimate_float": float(self.estimate),
            "band": str(self.error_band),
            "band_float": float(self.error_band),
            "rho": str(self.rho),
            "converged": self.converged,
        }


def estimate_from_points(
    points: Sequence[tuple[int, int | Fraction]],
    p: int,
    d: int,
    *,
    rho_clamp: float | Fraction = DEFAULT_RHO_CLAMP,
    min_points: int = MIN_POINTS,
) -> MultiplicityEstimate:
    """Estimate the multiplicity from raw (n, HK(n)) pairs.

    Args:
        points: Pairs (n, value); values may be integers or Fractions.
        p: Field characteristic.
        d: Dimension, at least 0.
        rho_clamp: Upper clamp of the observed contraction ratio.
        min_points: Fewest points accepted.

    Returns:
        The estimate with its error band.

    Raises:
        SeriesError: On too few points or d < 0.
    """
    if len(points) < min_points:
        raise SeriesError(
            f"need at least {min_points} series points, got {len(points)}"
        )
    if d < 0:
        raise SeriesError(f"dimension must be nonnegative, got {d}")
    values = tuple(Fraction(value) / Fraction(p) ** (n * d) for n, value in points)
    last_gap = abs(values[-1] - values[-2])
    prev_gap = abs(values[-2] - values[-3])
    ceiling = Fraction(str(rho_clamp)) if isinstance(rho_clamp, float) else rho_clamp
    rho = Fraction(0)
    if prev_gap:
        rho = min(max(last_gap / prev_gap, Fraction(0)), ceiling)
    band = last_gap / (1 - rho)
    converged = last_gap == 0 or last_gap < prev_gap
    logger.debug(
        "r_n tail %s with rho=%s gives band %s (converged=%s)",
        [str(v) for v in values[-3:]],
        rho,
        band,
        converged,
    )
    return MultiplicityEstimate(d, values, values[-1], band, converged, rho)


def estimate_multiplicity(
    series: HKSeries,
    d: int | None = None,
    *,
    rho_clamp: float | Fraction = DEFAULT_RHO_CLAMP,
    min_points: int = MIN_POINTS,
) -> MultiplicityEstimate:
    """Estimate the multiplicity of a computed series.

    d defaults to m − 1, the dimension of the hypersurface. A different d
    is honoured but logged as a warning.
    """
    expected = series.f.m - 1
    if d is None:
        d = expected
    elif d != expected:
        logger.warning(
            "d=%d differs from the hypersurface dimension %d of %s",
            d,
            expected,
            series.f,
        )
    return estimate_from_points(
        series.points, series.p, d, rho_clamp=rho_clamp, min_points=min_points
    )
