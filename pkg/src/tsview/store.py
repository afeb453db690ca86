"""In-memory registry of full-resolution traces.

Traces are stored exactly as registered (no resampling at rest); view
slicing is a binary search returning index bounds that alias the stored
arrays, and anomalously large timestamp deltas are flagged so renderers can
break the line there.
"""
from __future__ import annotations

import enum
import threading
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "DuplicateTraceError",
    "GapMask",
    "Trace",
    "TraceRegistry",
    "TraceValidationError",
    "UnknownTraceError",
    "ValueArray",
    "ValueKind",
    "decode_values",
    "detect_gaps",
    "encode_values",
    "slice_view",
]

DEFAULT_GAP_FACTOR = 4.0


class TraceValidationError(ValueError):
    """Trace data violates an invariant (lengths, monotonicity, codes)."""


class DuplicateTraceError(ValueError):
    """A trace with this id is already registered."""


class UnknownTraceError(KeyError):
    """No trace with this id is registered."""


class ValueKind(str, enum.Enum):
    NUMERIC = "numeric"
    BOOLEAN = "boolean"
    CATEGORICAL = "categorical"


@dataclass
class ValueArray:
    """Typed value payload of one trace.

    Numeric data is float64, boolean data a bool array, categorical data
    integer codes into an ordered label table.
    """

    kind: ValueKind
    data: np.ndarray
    labels: tuple[str, ...] | None = None

    @classmethod
    def numeric(cls, values) -> "ValueArray":
        return cls(ValueKind.NUMERIC, np.asarray(values, dtype=np.float64))

    @classmethod
    def boolean(cls, values) -> "ValueArray":
        return cls(ValueKind.BOOLEAN, np.asarray(values, dtype=np.bool_))

    @classmethod
    def categorical(cls, codes, labels) -> "ValueArray":
        codes = np.asarray(codes, dtype=np.int64)
        labels = tuple(labels)
        if len(codes) and (codes.min() < 0 or codes.max() >= len(labels)):
            raise TraceValidationError(
                f"categorical codes must lie in [0, {len(labels)})"
            )
        return cls(ValueKind.CATEGORICAL, codes, labels)

    def __len__(self) -> int:
        return len(self.data)

    def view(self, lo: int, hi: int) -> "ValueArray":
        """A slice of this payload aliasing the same storage."""
        return ValueArray(self.kind, self.data[lo:hi], self.labels)


def encode_values(values: ValueArray) -> tuple[np.ndarray, tuple[str, ...] | None]:
    """Encode any payload as float64 for the downsampling kernels.

    Numeric passes through without a copy; booleans map to 0.0/1.0;
    categorical codes map to float(code) with the label table returned for
    client-side axis ticks. Lossless and invertible (see decode_values).
    """
    if values.kind is ValueKind.NUMERIC:
        return values.data.astype(np.float64, copy=False), None
    if values.kind is ValueKind.BOOLEAN:
        return values.data.astype(np.float64), None
    return values.data.astype(np.float64), values.labels


def decode_values(
    encoded: np.ndarray, kind: ValueKind, labels: tuple[str, ...] | None = None
) -> ValueArray:
    """Inverse of encode_values."""
    if kind is ValueKind.NUMERIC:
        return ValueArray.numeric(encoded)
    if kind is ValueKind.BOOLEAN:
        return ValueArray.boolean(np.asarray(encoded, dtype=np.float64) != 0.0)
    return ValueArray.categorical(np.asarray(encoded, dtype=np.int64), labels or ())


@dataclass
class Trace:
    """One named series held at full resolution."""

    trace_id: str
    name: str
    xs: np.ndarray
    values: ValueArray

    def __post_init__(self) -> None:
        self.xs = np.asarray(self.xs, dtype=np.int64)

    @property
    def row_count(self) -> int:
        return len(self.xs)

    def validate(self) -> None:
        if self.xs.ndim != 1:
            raise TraceValidationError("timestamps must be one-dimensional")
        if len(self.xs) != len(self.values):
            raise TraceValidationError(
                f"trace {self.trace_id!r}: {len(self.xs)} timestamps"
                f" vs {len(self.values)} values"
            )
        if len(self.xs) > 1 and np.any(np.diff(self.xs) < 0):
            raise TraceValidationError(
                f"trace {self.trace_id!r}: timestamps must be non-decreasing"
            )


@dataclass
class GapMask:
    """Indices i after which the line segment to sample i+1 must break."""

    gap_after: np.ndarray

    def __post_init__(self) -> None:
        self.gap_after = np.asarray(self.gap_after, dtype=np.int64)

    def __len__(self) -> int:
        return len(self.gap_after)


def detect_gaps(trace: Trace, gap_factor: float = DEFAULT_GAP_FACTOR) -> GapMask:
    """Flag deltas larger than gap_factor times the median delta.

    Traces with fewer than 3 samples yield an empty mask. The rule is
    invariant under time translation and positive scaling.
    """
    if gap_factor <= 0:
        raise ValueError("gap_factor must be positive")
    if trace.row_count < 3:
        return GapMask(np.empty(0, dtype=np.int64))
    deltas = np.diff(trace.xs)
    median = np.median(deltas)
    return GapMask(np.flatnonzero(deltas > gap_factor * median))


def slice_view(trace: Trace, t_start: int, t_end: int) -> tuple[int, int]:
    """Index range [lo, hi) covering the view plus one sample on each side.

    The extra sample lets rendered lines extend past the viewport edges.
    The bounds alias the stored arrays; no samples are copied. Lookup is
    binary search, O(log n).
    """
    if t_start > t_end:
        raise ValueError(f"t_start {t_start} > t_end {t_end}")
    n = trace.row_count
    first_inside = int(np.searchsorted(trace.xs, t_start, side="left"))
    last_inside = int(np.searchsorted(trace.xs, t_end, side="right")) - 1
    lo = max(first_inside - 1, 0)
    hi = min(last_inside + 2, n)
    return lo, max(lo, hi)


class TraceRegistry:
    """Id-keyed store of traces with a cached gap mask per trace.

    Many readers may run concurrently; registration is the only write and
    is serialized by a lock. A trace becomes visible in a single dict
    assignment, so readers never observe a partially registered trace.
    """

    def __init__(self, gap_factor: float = DEFAULT_GAP_FACTOR):
        if gap_factor <= 0:
            raise ValueError("gap_factor must be positive")
        self.gap_factor = gap_factor
        self._traces: dict[str, Trace] = {}
        self._gap_masks: dict[str, GapMask] = {}
        self._write_lock = threading.Lock()

    def register(self, trace: Trace) -> str:
        trace.validate()
        with self._write_lock:
            if trace.trace_id in self._traces:
                raise DuplicateTraceError(
                    f"trace {trace.trace_id!r} is already registered"
                )
            self._traces[trace.trace_id] = trace
        return trace.trace_id

    def get(self, trace_id: str) -> Trace:
        trace = self._traces.get(trace_id)
        if trace is None:
            raise UnknownTraceError(trace_id)
        return trace

    def gap_mask(self, trace_id: str) -> GapMask:
        """Gap mask over the full trace, computed on first use and cached."""
        mask = self._gap_masks.get(trace_id)
        if mask is None:
            mask = detect_gaps(self.get(trace_id), self.gap_factor)
            self._gap_masks[trace_id] = mask
        return mask

    def ids(self) -> list[str]:
        return list(self._traces)

    def __contains__(self, trace_id: str) -> bool:
        return trace_id in self._traces

    def __len__(self) -> int:
        return len(self._traces)
