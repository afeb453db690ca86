"""Stateless downsampling kernels for level-of-detail line rendering.

Every kernel maps a slice of samples plus a point budget to the set of
retained sample *indices*; callers map indices back to timestamps/values.
All functions are pure and safe to call concurrently.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Algorithm",
    "AggregationResult",
    "AggregatorConfig",
    "InvalidBudgetError",
    "SeriesSlice",
    "aggregate",
    "every_nth",
    "lttb",
    "minmax",
    "minmax_lttb",
    "triangle_area",
]


class InvalidBudgetError(ValueError):
    """Raised when the requested point budget is too small for the kernel."""


class Algorithm(str, enum.Enum):
    LTTB = "lttb"
    MINMAX = "minmax"
    MINMAX_LTTB = "minmaxlttb"
    EVERY_NTH = "everynth"


@dataclass
class SeriesSlice:
    """A contiguous run of samples handed to the downsampling kernels.

    ``xs`` holds 64-bit nanosecond timestamps (dimensionless sample indices
    are represented as nanosecond ticks) and must be non-decreasing; ``ys``
    holds 64-bit floats. Categorical and boolean series arrive pre-encoded
    as float codes. NaN values are reserved for explicit gap markers.
    """

    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self) -> None:
        self.xs = np.asarray(self.xs, dtype=np.int64)
        self.ys = np.asarray(self.ys, dtype=np.float64)
        if self.xs.ndim != 1 or self.ys.ndim != 1:
            raise ValueError("xs and ys must be one-dimensional")
        if len(self.xs) != len(self.ys):
            raise ValueError(
                f"xs and ys must have equal length ({len(self.xs)} != {len(self.ys)})"
            )

    @property
    def n_in(self) -> int:
        return len(self.xs)


@dataclass
class AggregationResult:
    """Retained sample positions plus bookkeeping for the caller.

    ``indices`` is strictly increasing, each in ``[0, n_in)``; ``aggregated``
    is true iff at least one input point was dropped.
    """

    indices: np.ndarray
    aggregated: bool
    n_out_requested: int


@dataclass
class AggregatorConfig:
    """Which kernel to run and its tuning knobs."""

    algorithm: Algorithm = Algorithm.MINMAX_LTTB
    minmax_ratio: int = 4

    def __post_init__(self) -> None:
        self.algorithm = Algorithm(self.algorithm)
        if self.minmax_ratio < 1:
            raise ValueError("minmax_ratio must be >= 1")


def triangle_area(
    a: tuple[float, float], b: tuple[float, float], c: tuple[float, float]
) -> float:
    """Area of the triangle spanned by three points (NaN in -> NaN out)."""
    ax, ay = a
    bx, by = b
    cx, cy = c
    return 0.5 * abs(ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))


def _identity(n_in: int, n_out: int) -> AggregationResult:
    return AggregationResult(
        indices=np.arange(n_in, dtype=np.int64),
        aggregated=False,
        n_out_requested=n_out,
    )


def every_nth(n_in: int, n_out: int) -> AggregationResult:
    """Strided subsampling: keep every ceil(n_in / n_out)-th point."""
    if n_out < 1:
        raise InvalidBudgetError("every_nth requires n_out >= 1")
    if n_in <= n_out:
        return _identity(n_in, n_out)
    step = -(-n_in // n_out)
    indices = np.arange(0, n_in, step, dtype=np.int64)
    return AggregationResult(indices=indices, aggregated=True, n_out_requested=n_out)


def _first_extreme_positions(block: np.ndarray, ufunc: np.ufunc) -> np.ndarray:
    """Per-row position of the first extreme non-NaN value (0 if all NaN).

    ``ufunc`` is np.fmin or np.fmax, both of which ignore NaN while
    reducing; NaN rows reduce to NaN, which the equality below never
    matches, so the first-index fallback kicks in.
    """
    extreme = ufunc.reduce(block, axis=1)
    hit = block == extreme[:, None]
    found = hit.any(axis=1)
    return np.where(found, hit.argmax(axis=1), 0)


def minmax(series: SeriesSlice, n_out: int) -> AggregationResult:
    """Per-bin extrema: floor(n_out / 2) equal-width bins over the index
    range, keeping the first minimal and first maximal y of each bin.

    The last bin absorbs the remainder. NaN values are only retained when a
    bin holds nothing else, in which case the bin's first index stands in.
    """
    if n_out < 2:
        raise InvalidBudgetError("minmax requires n_out >= 2")
    n_in = series.n_in
    if n_in <= n_out:
        return _identity(n_in, n_out)

    ys = series.ys
    n_bins = n_out // 2
    width = n_in // n_bins

    picks: list[np.ndarray] = []
    if n_bins > 1:
        regular = ys[: width * (n_bins - 1)].reshape(n_bins - 1, width)
        offsets = np.arange(n_bins - 1, dtype=np.int64) * width
        picks.append(offsets + _first_extreme_positions(regular, np.fmin))
        picks.append(offsets + _first_extreme_positions(regular, np.fmax))
    last = ys[width * (n_bins - 1) :].reshape(1, -1)
    last_off = width * (n_bins - 1)
    picks.append(last_off + _first_extreme_positions(last, np.fmin))
    picks.append(last_off + _first_extreme_positions(last, np.fmax))

    indices = np.unique(np.concatenate(picks))
    return AggregationResult(
        indices=indices,
        aggregated=len(indices) < n_in,
        n_out_requested=n_out,
    )


def _bucket_bounds(n_in: int, n_buckets: int) -> np.ndarray:
    """Equal-count boundaries over the interior index range [1, n_in - 1)."""
    interior = n_in - 2
    return (np.arange(n_buckets + 1, dtype=np.int64) * interior) // n_buckets + 1


def _centroid_y(ys: np.ndarray) -> float:
    """Mean y excluding NaN; NaN when nothing is left."""
    finite = ys[~np.isnan(ys)]
    if len(finite) == 0:
        return math.nan
    return float(finite.mean())


def lttb(series: SeriesSlice, n_out: int) -> AggregationResult:
    """Largest-triangle-three-buckets selection.

    The first and last points are always kept; the interior is split into
    n_out - 2 equal-count buckets, and each bucket contributes the point
    maximizing the triangle area with the previously selected point and the
    next bucket's centroid (the raw last point for the final bucket). Ties
    break to the lowest index; NaN areas rank below every finite area.

    Timestamps are translated so the slice starts at zero before the area
    math; selection is translation-invariant, and epoch-nanosecond
    magnitudes would otherwise cancel catastrophically in float64.
    """
    if n_out < 2:
        raise InvalidBudgetError("lttb requires n_out >= 2")
    n_in = series.n_in
    if n_in <= n_out:
        return _identity(n_in, n_out)

    if n_out == 2:
        return AggregationResult(
            indices=np.array([0, n_in - 1], dtype=np.int64),
            aggregated=True,
            n_out_requested=n_out,
        )

    xs = (series.xs - series.xs[0]).astype(np.float64)
    ys = series.ys
    selected = np.empty(n_out, dtype=np.int64)
    selected[0] = 0
    selected[-1] = n_in - 1

    n_buckets = n_out - 2
    bounds = _bucket_bounds(n_in, n_buckets)
    prev_x = xs[0]
    prev_y = ys[0]
    for k in range(n_buckets):
        lo = bounds[k]
        hi = bounds[k + 1]
        if k == n_buckets - 1:
            next_x = xs[n_in - 1]
            next_y = ys[n_in - 1]
        else:
            next_x = float(xs[bounds[k + 1] : bounds[k + 2]].mean())
            next_y = _centroid_y(ys[bounds[k + 1] : bounds[k + 2]])
        cand_x = xs[lo:hi]
        cand_y = ys[lo:hi]
        areas = 0.5 * np.abs(
            prev_x * (cand_y - next_y)
            + cand_x * (next_y - prev_y)
            + next_x * (prev_y - cand_y)
        )
        areas = np.where(np.isnan(areas), -np.inf, areas)
        pick = lo + int(np.argmax(areas))
        selected[k + 1] = pick
        prev_x = xs[pick]
        prev_y = ys[pick]

    return AggregationResult(indices=selected, aggregated=True, n_out_requested=n_out)


def minmax_lttb(series: SeriesSlice, n_out: int, ratio: int) -> AggregationResult:
    """LTTB over a per-bin extrema preselection of ratio * n_out points.

    Small inputs (n_in <= ratio * n_out) go straight to plain LTTB; the
    returned indices always refer to the original slice.
    """
    if n_out < 2:
        raise InvalidBudgetError("minmax_lttb requires n_out >= 2")
    if ratio < 1:
        raise ValueError("minmax_lttb requires ratio >= 1")
    n_in = series.n_in
    if n_in <= ratio * n_out:
        return lttb(series, n_out)

    pre = minmax(series, ratio * n_out).indices
    ends = np.array([0, n_in - 1], dtype=np.int64)
    pre = np.unique(np.concatenate([pre, ends]))
    sub = SeriesSlice(series.xs[pre], series.ys[pre])
    picked = lttb(sub, n_out)
    return AggregationResult(
        indices=pre[picked.indices],
        aggregated=True,
        n_out_requested=n_out,
    )


def aggregate(series: SeriesSlice, n_out: int, cfg: AggregatorConfig) -> AggregationResult:
    """Dispatch to the configured kernel."""
    if n_out < 2:
        raise InvalidBudgetError("aggregate requires n_out >= 2")
    if cfg.algorithm is Algorithm.LTTB:
        return lttb(series, n_out)
    if cfg.algorithm is Algorithm.MINMAX:
        return minmax(series, n_out)
    if cfg.algorithm is Algorithm.MINMAX_LTTB:
        return minmax_lttb(series, n_out, cfg.minmax_ratio)
    return every_nth(series.n_in, n_out)
