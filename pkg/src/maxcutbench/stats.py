"""Statistics for comparing solver trajectories.

Approximation ratios divide best-so-far normalized objectives by the
normalized optimum (exact when available, best-known otherwise). Paired
comparisons aggregate over (instance, run) pairs: means come with the
standard error of the mean, proportions with Wilson score intervals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .errors import (
    BadCounts,
    EmptyRange,
    EmptySummary,
    LengthMismatch,
    TooFewValues,
    ZeroReference,
)

__all__ = [
    "SummaryStatistics",
    "BinnedCorrelation",
    "approximation_ratio",
    "mean_sem",
    "wilson_interval",
    "prob_better",
    "success_probability",
    "difference_curve",
    "max_advantage",
    "binned_correlation",
]

SUCCESS_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class SummaryStatistics:
    """Per-checkpoint mean and SEM of paired differences."""

    mean: np.ndarray
    sem: np.ndarray
    count: int


@dataclass(frozen=True, eq=False)
class BinnedCorrelation:
    """Equal-width bins in x with the paired y statistics per bin."""

    bin_index: np.ndarray
    x_mean: np.ndarray
    x_std: np.ndarray
    y_mean: np.ndarray
    y_std: np.ndarray
    count: np.ndarray
    bin_width: float


def approximation_ratio(best_values, reference: float) -> np.ndarray:
    """Best-so-far values divided by the reference optimum."""
    if not reference > 0:
        raise ZeroReference(f"reference must be positive, got {reference}")
    return np.asarray(best_values, dtype=float) / reference


def mean_sem(values) -> tuple[float, float]:
    """Sample mean and standard error of the mean (ddof=1)."""
    data = np.asarray(values, dtype=float)
    if data.size < 2:
        raise TooFewValues("SEM needs at least two values")
    return float(data.mean()), float(data.std(ddof=1) / math.sqrt(data.size))


def wilson_interval(
    successes: int, trials: int, confidence: float = 0.95
) -> tuple[float, float]:
    """Two-sided Wilson score interval for a binomial proportion."""
    if trials < 1 or not (0 <= successes <= trials):
        raise BadCounts(f"bad counts: {successes}/{trials}")
    if not (0.0 < confidence < 1.0):
        raise ValueError(f"confidence must lie in (0, 1), got {confidence}")
    z = float(ndtri(1.0 - (1.0 - confidence) / 2.0))
    p_hat = successes / trials
    denom = 1.0 + z * z / trials
    center = (p_hat + z * z / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(
        p_hat * (1.0 - p_hat) / trials + z * z / (4.0 * trials * trials)
    )
    # the bounds are exactly 0 / 1 at the empirical extremes; keep them so
    low = 0.0 if successes == 0 else max(center - half, 0.0)
    high = 1.0 if successes == trials else min(center + half, 1.0)
    return low, high


def prob_better(
    alpha_a, alpha_b, confidence: float = 0.95
) -> tuple[float, float, float]:
    """Fraction of pairs with alpha_a strictly above alpha_b, with interval."""
    a = np.asarray(alpha_a, dtype=float)
    b = np.asarray(alpha_b, dtype=float)
    if a.shape != b.shape or a.ndim != 1 or a.size == 0:
        raise LengthMismatch(f"need equal-length 1-d pairings, got {a.shape}, {b.shape}")
    wins = int(np.sum(a > b))
    low, high = wilson_interval(wins, a.size, confidence)
    return wins / a.size, low, high


def success_probability(
    final_values, exact_normalized: float, confidence: float = 0.95
) -> tuple[float, float, float]:
    """Share of runs whose best value reaches the optimum (within 1e-9)."""
    values = np.asarray(final_values, dtype=float)
    if values.ndim != 1 or values.size == 0:
        raise LengthMismatch("need a non-empty 1-d array of final values")
    hits = int(np.sum(np.abs(values - exact_normalized) <= SUCCESS_TOLERANCE))
    low, high = wilson_interval(hits, values.size, confidence)
    return hits / values.size, low, high


def difference_curve(curves_a, curves_b) -> SummaryStatistics:
    """Per-checkpoint mean and SEM of alpha_a - alpha_b over paired runs."""
    a = np.asarray(curves_a, dtype=float)
    b = np.asarray(curves_b, dtype=float)
    if a.shape != b.shape or a.ndim != 2:
        raise LengthMismatch(f"need matching (pairs, checkpoints) arrays, got {a.shape}, {b.shape}")
    if a.shape[0] < 2:
        raise TooFewValues("need at least two pairs for a SEM")
    diff = a - b
    return SummaryStatistics(
        mean=diff.mean(axis=0),
        sem=diff.std(axis=0, ddof=1) / math.sqrt(diff.shape[0]),
        count=diff.shape[0],
    )


def max_advantage(summary: SummaryStatistics, n_shots: int) -> tuple[int, float, int]:
    """Checkpoint of maximal mean difference: (iteration, value, n_evals).

    Iterations are 1-based; ties resolve to the earliest checkpoint.
    """
    if summary.mean.size == 0:
        raise EmptySummary("empty difference curve")
    idx = int(np.argmax(summary.mean))
    iteration = idx + 1
    return iteration, float(summary.mean[idx]), iteration * n_shots


def binned_correlation(
    alpha_x,
    alpha_y,
    n_bins: int = 12,
    x_range: tuple[float, float] = (0.87856, 1.0),
) -> BinnedCorrelation:
    """Equal-width binned statistic of y against x over paired instances.

    Bins are half-open [lo, hi) with the last bin closed; pairs whose x
    falls outside x_range are excluded. Per bin the sample mean and
    standard deviation (ddof=1, zero for singletons) of both coordinates
    are reported; empty bins are omitted.
    """
    x = np.asarray(alpha_x, dtype=float)
    y = np.asarray(alpha_y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise LengthMismatch(f"need equal-length 1-d pairings, got {x.shape}, {y.shape}")
    lo, hi = float(x_range[0]), float(x_range[1])
    if not hi > lo:
        raise EmptyRange(f"x_range must have positive width, got {x_range}")
    if n_bins < 1:
        raise ValueError("n_bins must be >= 1")

    width = (hi - lo) / n_bins
    inside = (x >= lo) & (x <= hi)
    idx = np.floor((x[inside] - lo) / width).astype(int)
    idx = np.minimum(idx, n_bins - 1)  # closes the last bin at x == hi
    xs, ys = x[inside], y[inside]

    bins, x_mean, x_std, y_mean, y_std, count = [], [], [], [], [], []
    for b in range(n_bins):
        members = idx == b
        m = int(members.sum())
        if m == 0:
            continue
        bins.append(b)
        count.append(m)
        x_mean.append(xs[members].mean())
        y_mean.append(ys[members].mean())
        x_std.append(xs[members].std(ddof=1) if m > 1 else 0.0)
        y_std.append(ys[members].std(ddof=1) if m > 1 else 0.0)
    return BinnedCorrelation(
        bin_index=np.array(bins, dtype=np.int64),
        x_mean=np.array(x_mean),
        x_std=np.array(x_std),
        y_mean=np.array(y_mean),
        y_std=np.array(y_std),
        count=np.array(count, dtype=np.int64),
        bin_width=width,
    )
