import csv
import json

import numpy as np
import pytest

from tsview.bench import (
    NO_AGGREGATION,
    BenchConfig,
    SignalKind,
    aliasing_demo,
    generate_signal,
    raw_payload_bytes,
    run_benchmark,
)
from tsview.store import ValueKind

from oracles import oracle_peak_to_peak


class TestGenerateSignal:
    def test_seeded_determinism(self):
        a = generate_signal(100, 7, SignalKind.NOISY_SINE)
        b = generate_signal(100, 7, SignalKind.NOISY_SINE)
        np.testing.assert_array_equal(a.values.data, b.values.data)
        np.testing.assert_array_equal(a.xs, b.xs)

    def test_seed_changes_data(self):
        a = generate_signal(100, 7, SignalKind.NOISY_SINE)
        b = generate_signal(100, 8, SignalKind.NOISY_SINE)
        assert not np.array_equal(a.values.data, b.values.data)

    def test_categorical_label_budget(self):
        trace = generate_signal(10, 3, SignalKind.CATEGORICAL_STEPS)
        assert trace.values.kind is ValueKind.CATEGORICAL
        assert len(trace.values.labels) <= 10

    @pytest.mark.parametrize("kind", list(SignalKind))
    def test_every_kind_registers_cleanly(self, kind):
        trace = generate_signal(1000, 5, kind)
        trace.validate()
        assert trace.row_count == 1000

    def test_noisy_sine_shape(self):
        trace = generate_signal(10_000, 9, SignalKind.NOISY_SINE)
        ys = trace.values.data
        # sin(2*pi*i/1000) + N(0, 0.1): amplitude near 1, noise bounded
        assert 0.9 < ys.max() < 1.6
        assert -1.6 < ys.min() < -0.9

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            generate_signal(0, 1, SignalKind.NOISY_SINE)


class TestRunBenchmark:
    def test_single_cell_stats(self):
        cfg = BenchConfig(
            sample_sizes=(5_000,),
            trace_counts=(2,),
            algorithms=("minmaxlttb",),
            repetitions=3,
            cutoff_s=60.0,
        )
        report = run_benchmark(cfg)
        assert len(report.rows) == 1
        row = report.rows[0]
        assert row.mean_s is not None and row.mean_s > 0
        assert row.std_s is not None and row.std_s >= 0
        assert not row.truncated

    def test_cutoff_truncates_and_skips_larger_cells(self):
        cfg = BenchConfig(
            sample_sizes=(50_000,),
            trace_counts=(1, 2, 4),
            algorithms=("minmaxlttb",),
            repetitions=3,
            cutoff_s=1e-9,
        )
        report = run_benchmark(cfg)
        assert len(report.rows) == 1
        row = report.rows[0]
        assert row.truncated
        assert row.n_traces == 1
        assert row.mean_s is None and row.std_s is None

    def test_csv_columns_exact(self, tmp_path):
        cfg = BenchConfig(
            sample_sizes=(2_000,),
            trace_counts=(1,),
            algorithms=("everynth", NO_AGGREGATION),
            repetitions=1,
        )
        report = run_benchmark(cfg)
        out = tmp_path / "report.csv"
        report.write_csv(out)
        with out.open() as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == [
            "algorithm",
            "n_samples",
            "n_traces",
            "mean_s",
            "std_s",
            "peak_mem_bytes",
            "truncated",
        ]
        assert len(rows) == 3
        assert {r[0] for r in rows[1:]} == {"everynth", "none"}

    def test_structure_reproducible(self):
        cfg = BenchConfig(
            sample_sizes=(1_000, 2_000),
            trace_counts=(1, 2),
            algorithms=("minmaxlttb",),
            repetitions=1,
            seed=5,
        )
        first = [(r.algorithm, r.n_samples, r.n_traces, r.truncated) for r in run_benchmark(cfg).rows]
        second = [(r.algorithm, r.n_samples, r.n_traces, r.truncated) for r in run_benchmark(cfg).rows]
        assert first == second

    def test_config_round_trip(self, tmp_path):
        path = tmp_path / "bench.json"
        path.write_text(
            json.dumps(
                {
                    "sample_sizes": [1000],
                    "trace_counts": [1, 2],
                    "algorithms": ["lttb"],
                    "repetitions": 2,
                    "cutoff_s": 30,
                    "seed": 3,
                    "signal_kind": "random-walk",
                }
            )
        )
        cfg = BenchConfig.from_json(path)
        assert cfg.sample_sizes == (1000,)
        assert cfg.signal_kind is SignalKind.RANDOM_WALK

    def test_raw_payload_accounting(self):
        assert raw_payload_bytes(1_000, 10) == 160_000

    def test_doubling_traces_roughly_doubles_duration(self):
        cfg = BenchConfig(
            sample_sizes=(2_000_000,),
            trace_counts=(1, 2),
            algorithms=("minmaxlttb",),
            repetitions=5,
            seed=2,
        )
        rows = {r.n_traces: r for r in run_benchmark(cfg).rows}
        ratio = rows[2].mean_s / rows[1].mean_s
        assert 1.5 <= ratio <= 3.0, f"trace-doubling ratio {ratio:.2f}"


@pytest.fixture(scope="module")
def demo(tmp_path_factory):
    out = tmp_path_factory.mktemp("aliasing")
    summary = aliasing_demo(out, n=200_000, n_out=200)
    return out, summary


class TestAliasingDemo:
    def test_everynth_collapses_sine(self, demo):
        _, summary = demo
        # stride 1000 == sine period: strided sampling sees a constant
        assert summary["everynth"]["retention"] <= 0.10

    def test_minmaxlttb_keeps_envelope(self, demo):
        _, summary = demo
        assert summary["minmaxlttb"]["retention"] >= 0.95

    def test_contrast(self, demo):
        _, summary = demo
        assert summary["everynth"]["retention"] < summary["minmaxlttb"]["retention"]

    def test_budgets_respected(self, demo):
        _, summary = demo
        assert summary["everynth"]["n_points"] <= 202
        assert summary["minmaxlttb"]["n_points"] <= 202

    def test_files_written(self, demo):
        out, summary = demo
        for name in ("everynth.csv", "minmaxlttb.csv", "summary.json"):
            assert (out / name).is_file()
        with (out / "minmaxlttb.csv").open() as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["x", "y"]
        assert len(rows) - 1 == summary["minmaxlttb"]["n_points"]
        ys = [float(r[1]) for r in rows[1:]]
        assert oracle_peak_to_peak(ys) == pytest.approx(
            summary["minmaxlttb"]["peak_to_peak"]
        )
