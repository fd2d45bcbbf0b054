"""Reliability diagnostics: PIT histograms and central-interval coverage."""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy import stats

from apps.core.exceptions import InputError
from apps.distributions.families import PredictiveDist

PIT_BINS = 20
PIT_EDGES = tuple(float(edge) for edge in np.linspace(0.0, 1.0, PIT_BINS + 1))


@dataclass(frozen=True)
class PitHistogram:
    """PIT counts in twenty 5% bins.

    Fields:
        bin_edges (tuple[float, ...]): 21 edges from 0 to 1.
        counts (tuple[int, ...]): 20 bin counts.
        n_total (int): Number of PIT values; equals the sum of counts.
    """

    bin_edges: tuple[float, ...]
    counts: tuple[int, ...]
    n_total: int

    @property
    def frequencies(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=float) / self.n_total


def pit_histogram(pits: Sequence[float]) -> PitHistogram:
    """Bin PIT values; a value on an interior edge goes to the lower bin."""
    values = np.asarray(pits, dtype=float).reshape(-1)
    if np.any(~np.isfinite(values)) or np.any((values < 0.0) | (values > 1.0)):
        raise InputError("PIT values must lie in [0, 1]")
    bins = np.clip(np.searchsorted(PIT_EDGES, values, side="left") - 1, 0, PIT_BINS - 1)
    counts = np.bincount(bins, minlength=PIT_BINS)
    return PitHistogram(PIT_EDGES, tuple(int(c) for c in counts), int(values.size))


def pit_chi_square(histogram: PitHistogram) -> tuple[float, float]:
    """Chi-square statistic and p-value against a flat histogram."""
    result = stats.chisquare(histogram.counts)
    return float(result.statistic), float(result.pvalue)


def outer_bin_frequency(histogram: PitHistogram) -> float:
    """Share of PIT values in the first and last bins (0.1 when flat)."""
    return (histogram.counts[0] + histogram.counts[-1]) / histogram.n_total


def interval_coverage(
    dists: Sequence[PredictiveDist], ys: Sequence[float], level: float
) -> float:
    """Fraction of observations inside the closed central ``level`` interval."""
    if len(dists) != len(ys):
        raise InputError(f"{len(dists)} forecasts but {len(ys)} observations")
    if len(dists) == 0:
        raise InputError("coverage needs at least one forecast")
    if not 0.0 < level < 1.0:
        raise InputError(f"coverage level must lie in (0, 1), got {level}")
    lower_p, upper_p = (1.0 - level) / 2.0, (1.0 + level) / 2.0
    covered = sum(
        1 for d, y in zip(dists, ys) if d.quantile(lower_p) <= y <= d.quantile(upper_p)
    )
    return covered / len(dists)
