"""Rationality probe over small-denominator convergents.

The probe never claims irrationality: NoSmallRational only says that no
continued-fraction convergent with denominator up to Q_max falls inside
the error band.
"""

import logging
from collections.abc import Iterator
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from src.core.errors import SeriesError
from src.engine.estimator.multiplicity import MultiplicityEstimate

logger = logging.getLogger(__name__)

DEFAULT_Q_MAX = 10_000


class RationalityVerdict(Enum):
    """Outcome of the probe."""

    CONSISTENT_WITH_RATIONAL = "ConsistentWithRational"
    NO_SMALL_RATIONAL = "NoSmallRational"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Candidate:
    """A convergent numerator/denominator and its distance to the estimate."""

    numerator: int
    denominator: int
    distance: Fraction

    def as_dict(self) -> dict[str, object]:
        """Plain-data view."""
        return {
            "numerator": self.numerator,
            "denominator": self.denominator,
            "distance": str(self.distance),
        }


@dataclass(frozen=True)
class RationalityReport:
    """Convergents within the band and the resulting verdict."""

    verdict: RationalityVerdict
    candidates: tuple[Candidate, ...] = field(default_factory=tuple)
    best: Candidate | None = None
    q_max: int = DEFAULT_Q_MAX

    def as_dict(self) -> dict[str, object]:
        """Plain-data view."""
        return {
            "verdict": self.verdict.value,
            "q_max": self.q_max,
            "candidates": [c.as_dict() for c in self.candidates],
            "best": None if self.best is None else self.best.as_dict(),
        }


def continued_fraction(x: Fraction) -> Iterator[int]:
    """Partial quotients of an exact rational by the Euclidean algorithm."""
    numerator, denominator = x.numerator, x.denominator
    while denominator:
        quotient, remainder = divmod(numerator, denominator)
        yield quotient
        numerator, denominator = denominator, remainder


def convergents(x: Fraction | float, q_max: int) -> list[Fraction]:
    """Convergents h_k/k_k of x with k_k <= q_max, in order."""
    exact = Fraction(x)
    result = []
    h_prev, h = 1, 0
    k_prev, k = 0, 1
    for quotient in continued_fraction(exact):
        h_prev, h = h, quotient * h + h_prev
        k_prev, k = k, quotient * k + k_prev
        if k > q_max:
            break
        result.append(Fraction(h, k))
    return result


def rationality_probe(
    estimate: MultiplicityEstimate, q_max: int = DEFAULT_Q_MAX
) -> RationalityReport:
    """Look for a small-denominator rational inside the error band.

    Args:
        estimate: The multiplicity estimate.
        q_max: Largest denominator considered, at least 1.

    Returns:
        ConsistentWithRational when some convergent lies within the band,
        with the smallest-denominator one as best; NoSmallRational when
        none does and the estimate converged; Inconclusive otherwise.

    Raises:
        SeriesError: If q_max < 1.
    """
    if q_max < 1:
        raise SeriesError(f"Q_max must be at least 1, got {q_max}")
    value = Fraction(estimate.estimate)
    band = Fraction(estimate.error_band)
    candidates = tuple(
        Candidate(c.numerator, c.denominator, abs(value - c))
        for c in convergents(value, q_max)
        if abs(value - c) <= band
    )
    if candidates:
        verdict = RationalityVerdict.CONSISTENT_WITH_RATIONAL
    elif estimate.converged:
        verdict = RationalityVerdict.NO_SMALL_RATIONAL
    else:
        verdict = RationalityVerdict.INCONCLUSIVE
    logger.info(
        "probe of %s (band %s, Q_max=%d): %s",
        float(value),
        float(band),
        q_max,
        verdict.value,
    )
    best = candidates[0] if candidates else None
    return RationalityReport(verdict, candidates, best, q_max)
