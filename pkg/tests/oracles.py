"""Straightforward reference implementations used as independent oracles.

Deliberately written with plain Python loops and no vectorization so that a
bug in the production kernels cannot be mirrored here. The only shared
convention is the algorithm definition itself: triangle selection uses the
classic three-point area formula, x values are translated so the slice
starts at zero, ties break to the lowest index, and NaN areas rank below
every finite area.
"""
from __future__ import annotations

import math


def oracle_every_nth(n_in: int, n_out: int) -> list[int]:
    if n_in <= n_out:
        return list(range(n_in))
    step = math.ceil(n_in / n_out)
    return list(range(0, n_in, step))


def oracle_minmax(ys, n_out: int) -> list[int]:
    n_in = len(ys)
    if n_in <= n_out:
        return list(range(n_in))
    n_bins = n_out // 2
    width = n_in // n_bins
    keep: set[int] = set()
    for b in range(n_bins):
        lo = b * width
        hi = (b + 1) * width if b < n_bins - 1 else n_in
        first_min = None
        first_max = None
        for i in range(lo, hi):
            v = float(ys[i])
            if math.isnan(v):
                continue
            if first_min is None or v < float(ys[first_min]):
                first_min = i
            if first_max is None or v > float(ys[first_max]):
                first_max = i
        if first_min is None:
            keep.add(lo)
        else:
            keep.add(first_min)
            keep.add(first_max)
    return sorted(keep)


def oracle_lttb(xs, ys, n_out: int) -> list[int]:
    n_in = len(xs)
    if n_in <= n_out:
        return list(range(n_in))
    if n_out == 2:
        return [0, n_in - 1]

    x0 = xs[0]
    out = [0]
    n_buckets = n_out - 2
    bounds = [(k * (n_in - 2)) // n_buckets + 1 for k in range(n_buckets + 1)]
    prev = 0
    for k in range(n_buckets):
        lo, hi = bounds[k], bounds[k + 1]
        if k == n_buckets - 1:
            next_x = float(xs[n_in - 1] - x0)
            next_y = float(ys[n_in - 1])
        else:
            nlo, nhi = bounds[k + 1], bounds[k + 2]
            next_x = sum(float(xs[j] - x0) for j in range(nlo, nhi)) / (nhi - nlo)
            finite = [float(ys[j]) for j in range(nlo, nhi) if not math.isnan(float(ys[j]))]
            next_y = sum(finite) / len(finite) if finite else math.nan
        prev_x = float(xs[prev] - x0)
        prev_y = float(ys[prev])
        best = lo
        best_area = -math.inf
        for i in range(lo, hi):
            cand_x = float(xs[i] - x0)
            cand_y = float(ys[i])
            area = 0.5 * abs(
                prev_x * (cand_y - next_y)
                + cand_x * (next_y - prev_y)
                + next_x * (prev_y - cand_y)
            )
            if math.isnan(area):
                area = -math.inf
            if area > best_area:
                best_area = area
                best = i
        out.append(best)
        prev = best
    out.append(n_in - 1)
    return out


def oracle_minmax_lttb(xs, ys, n_out: int, ratio: int) -> list[int]:
    n_in = len(xs)
    if n_in <= ratio * n_out:
        return oracle_lttb(xs, ys, n_out)
    pre = sorted(set(oracle_minmax(ys, ratio * n_out)) | {0, n_in - 1})
    sub_xs = [xs[i] for i in pre]
    sub_ys = [ys[i] for i in pre]
    return [pre[j] for j in oracle_lttb(sub_xs, sub_ys, n_out)]


def oracle_peak_to_peak(ys) -> float:
    finite = [float(v) for v in ys if math.isfinite(float(v))]
    if not finite:
        return 0.0
    return max(finite) - min(finite)
