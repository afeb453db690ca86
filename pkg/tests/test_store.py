import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tsview.store import (
    DuplicateTraceError,
    Trace,
    TraceRegistry,
    TraceValidationError,
    UnknownTraceError,
    ValueArray,
    ValueKind,
    decode_values,
    detect_gaps,
    encode_values,
    slice_view,
)


def numeric_trace(trace_id, xs, ys=None):
    xs = np.asarray(xs, dtype=np.int64)
    if ys is None:
        ys = np.zeros(len(xs))
    return Trace(trace_id, trace_id, xs, ValueArray.numeric(ys))


@st.composite
def timestamp_arrays(draw, min_n=0, max_n=300):
    n = draw(st.integers(min_n, max_n))
    deltas = draw(st.lists(st.integers(0, 10**6), min_size=n, max_size=n))
    start = draw(st.integers(-(2**40), 2**40))
    return start + np.cumsum(np.asarray(deltas, dtype=np.int64))


class TestRegistry:
    def test_register_three(self):
        registry = TraceRegistry()
        for tid in ("a", "b", "c"):
            registry.register(numeric_trace(tid, [0, 1, 2]))
        assert len(registry) == 3
        assert set(registry.ids()) == {"a", "b", "c"}

    def test_duplicate_id(self):
        registry = TraceRegistry()
        registry.register(numeric_trace("a", [0, 1]))
        with pytest.raises(DuplicateTraceError):
            registry.register(numeric_trace("a", [0, 1]))

    def test_non_monotonic_rejected(self):
        registry = TraceRegistry()
        with pytest.raises(TraceValidationError):
            registry.register(numeric_trace("bad", [2, 1]))

    def test_length_mismatch_rejected(self):
        trace = Trace("x", "x", np.arange(3), ValueArray.numeric([1.0]))
        with pytest.raises(TraceValidationError):
            TraceRegistry().register(trace)

    def test_unknown_lookup(self):
        with pytest.raises(UnknownTraceError):
            TraceRegistry().get("nope")

    def test_data_returned_verbatim(self):
        registry = TraceRegistry()
        ys = np.array([3.5, math.nan, -1.0])
        registry.register(numeric_trace("t", [0, 5, 9], ys))
        stored = registry.get("t")
        assert stored.xs.tolist() == [0, 5, 9]
        np.testing.assert_array_equal(stored.values.data, ys)


class TestSliceView:
    trace = numeric_trace("t", [0, 10, 20, 30, 40])

    def test_interior_view_extends_one_each_side(self):
        assert slice_view(self.trace, 5, 35) == (0, 5)

    def test_covering_view(self):
        assert slice_view(self.trace, -100, 100) == (0, 5)

    def test_view_right_of_data_keeps_nearest_left(self):
        assert slice_view(self.trace, 500, 600) == (4, 5)

    def test_view_left_of_data_keeps_nearest_right(self):
        assert slice_view(self.trace, -600, -500) == (0, 1)

    def test_empty_trace(self):
        empty = numeric_trace("e", [])
        assert slice_view(empty, 0, 10) == (0, 0)

    def test_reversed_range_rejected(self):
        with pytest.raises(ValueError):
            slice_view(self.trace, 10, 5)

    def test_result_aliases_storage(self):
        lo, hi = slice_view(self.trace, 5, 35)
        view = self.trace.xs[lo:hi]
        assert view.base is self.trace.xs or view.base is self.trace.xs.base

    @given(timestamp_arrays(min_n=1))
    def test_full_extent_covers_everything(self, xs):
        trace = numeric_trace("t", xs)
        assert slice_view(trace, int(xs[0]), int(xs[-1])) == (0, len(xs))

    @given(timestamp_arrays(min_n=1), st.integers(-(2**42), 2**42), st.integers(0, 2**41))
    def test_strict_interior_always_included(self, xs, t_start, span):
        trace = numeric_trace("t", xs)
        t_end = t_start + span
        lo, hi = slice_view(trace, t_start, t_end)
        inside = np.flatnonzero((xs > t_start) & (xs < t_end))
        if len(inside):
            assert lo <= inside[0] and inside[-1] < hi


class TestDetectGaps:
    def test_single_gap(self):
        trace = numeric_trace("t", [0, 1, 2, 10, 11, 12])
        assert detect_gaps(trace, 4.0).gap_after.tolist() == [2]

    def test_uniform_spacing(self):
        trace = numeric_trace("t", np.arange(0, 1000, 7))
        assert len(detect_gaps(trace, 4.0)) == 0

    def test_fewer_than_three_samples(self):
        assert len(detect_gaps(numeric_trace("t", [0, 5]), 4.0)) == 0
        assert len(detect_gaps(numeric_trace("t", [0]), 4.0)) == 0

    def test_factor_must_be_positive(self):
        with pytest.raises(ValueError):
            detect_gaps(numeric_trace("t", [0, 1, 2]), 0.0)

    @given(timestamp_arrays(min_n=3, max_n=200), st.integers(-(2**30), 2**30), st.integers(1, 50))
    @settings(max_examples=100)
    def test_translation_and_scaling_invariant(self, xs, shift, scale):
        base = detect_gaps(numeric_trace("t", xs), 4.0).gap_after.tolist()
        shifted = detect_gaps(numeric_trace("t", xs + shift), 4.0).gap_after.tolist()
        scaled = detect_gaps(numeric_trace("t", xs * scale), 4.0).gap_after.tolist()
        assert base == shifted == scaled

    def test_gap_cached_per_registry(self):
        registry = TraceRegistry()
        registry.register(numeric_trace("t", [0, 1, 2, 50, 51, 52]))
        first = registry.gap_mask("t")
        assert registry.gap_mask("t") is first
        assert first.gap_after.tolist() == [2]


class TestValueEncoding:
    def test_boolean(self):
        encoded, labels = encode_values(ValueArray.boolean([True, False, True]))
        assert encoded.tolist() == [1.0, 0.0, 1.0]
        assert labels is None

    def test_categorical(self):
        va = ValueArray.categorical([0, 2, 1], ["W", "N1", "REM"])
        encoded, labels = encode_values(va)
        assert encoded.tolist() == [0.0, 2.0, 1.0]
        assert labels == ("W", "N1", "REM")

    def test_numeric_passthrough(self):
        encoded, labels = encode_values(ValueArray.numeric([3.5, math.nan]))
        assert encoded[0] == 3.5 and math.isnan(encoded[1])
        assert labels is None

    def test_numeric_no_copy(self):
        va = ValueArray.numeric(np.arange(4, dtype=np.float64))
        encoded, _ = encode_values(va)
        assert encoded is va.data

    def test_bad_categorical_codes(self):
        with pytest.raises(TraceValidationError):
            ValueArray.categorical([0, 3], ["a", "b"])

    @given(st.lists(st.booleans()))
    def test_boolean_round_trip(self, bits):
        va = ValueArray.boolean(bits)
        encoded, labels = encode_values(va)
        back = decode_values(encoded, ValueKind.BOOLEAN, labels)
        assert back.data.tolist() == bits

    @given(st.integers(1, 10).flatmap(
        lambda k: st.tuples(
            st.lists(st.integers(0, k - 1)),
            st.just([f"L{i}" for i in range(k)]),
        )
    ))
    def test_categorical_round_trip(self, codes_labels):
        codes, labels = codes_labels
        va = ValueArray.categorical(codes, labels)
        encoded, out_labels = encode_values(va)
        back = decode_values(encoded, ValueKind.CATEGORICAL, out_labels)
        assert back.data.tolist() == codes
        assert back.labels == tuple(labels)
