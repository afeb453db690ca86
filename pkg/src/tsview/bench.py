"""Benchmark harness: runtime/memory scaling grid and the aliasing demo.

The benchmarked quantity per cell is ingest + one full-extent view request
+ JSON serialization; front-end render time is out of the loop (no browser
involved), which the report header states. Peak memory is the maximum
resident-set growth of this process while the cell runs.
"""
from __future__ import annotations

import csv
import enum
import json
import statistics
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import psutil

from .aggregation import (
    Algorithm,
    AggregatorConfig,
    SeriesSlice,
    every_nth,
    minmax_lttb,
)
from .protocol import ViewEntry, ViewRequest, dumps
from .service import ServerConfig, handle_view_request
from .store import Trace, TraceRegistry, ValueArray

__all__ = [
    "BenchConfig",
    "BenchReport",
    "BenchRow",
    "NO_AGGREGATION",
    "SignalKind",
    "aliasing_demo",
    "generate_signal",
    "raw_payload_bytes",
    "run_benchmark",
]

# Pseudo-algorithm benchmarked as the baseline: the budget is lifted to the
# trace size, so the full data crosses the pipeline unaggregated.
NO_AGGREGATION = "none"

SINE_PERIOD = 1000
REPORT_COLUMNS = [
    "algorithm",
    "n_samples",
    "n_traces",
    "mean_s",
    "std_s",
    "peak_mem_bytes",
    "truncated",
]


class SignalKind(str, enum.Enum):
    NOISY_SINE = "noisy-sine"
    RANDOM_WALK = "random-walk"
    CATEGORICAL_STEPS = "categorical-steps"
    BOOLEAN_BURSTS = "boolean-bursts"


def _run_lengths(rng: np.random.Generator, n: int, max_runs: int) -> np.ndarray:
    """Partition n samples into up to max_runs uneven runs."""
    n_runs = min(n, max_runs)
    cuts = np.unique(rng.integers(1, n, size=n_runs - 1)) if n_runs > 1 else []
    edges = np.concatenate([[0], cuts, [n]])
    return np.diff(edges)


def generate_signal(
    n: int,
    seed: int,
    kind: SignalKind = SignalKind.NOISY_SINE,
    trace_id: str | None = None,
) -> Trace:
    """Deterministic synthetic trace of n samples for the given (seed, kind)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    kind = SignalKind(kind)
    rng = np.random.default_rng(seed)
    xs = np.arange(n, dtype=np.int64)

    if kind is SignalKind.NOISY_SINE:
        ys = rng.normal(0.0, 0.1, n)
        phase = np.arange(n, dtype=np.float64)
        phase *= 2.0 * np.pi / SINE_PERIOD
        np.sin(phase, out=phase)
        ys += phase
        values = ValueArray.numeric(ys)
    elif kind is SignalKind.RANDOM_WALK:
        steps = rng.standard_normal(n)
        values = ValueArray.numeric(np.cumsum(steps))
    elif kind is SignalKind.CATEGORICAL_STEPS:
        n_labels = int(rng.integers(2, 11))
        lengths = _run_lengths(rng, n, max_runs=64)
        codes = np.repeat(rng.integers(0, n_labels, size=len(lengths)), lengths)
        labels = [f"S{i}" for i in range(n_labels)]
        values = ValueArray.categorical(codes, labels)
    else:
        lengths = _run_lengths(rng, n, max_runs=128)
        first = bool(rng.integers(0, 2))
        states = (np.arange(len(lengths)) % 2 == 0) == first
        values = ValueArray.boolean(np.repeat(states, lengths))

    trace_id = trace_id or f"{kind.value}-{seed}"
    return Trace(trace_id, trace_id, xs, values)


@dataclass
class BenchConfig:
    sample_sizes: tuple[int, ...] = (100_000, 1_000_000, 10_000_000)
    trace_counts: tuple[int, ...] = (1, 5, 10, 20)
    n_out: int = 1000
    algorithms: tuple[str, ...] = (Algorithm.MINMAX_LTTB.value, NO_AGGREGATION)
    repetitions: int = 5
    cutoff_s: float = 120.0
    seed: int = 0
    signal_kind: SignalKind = SignalKind.NOISY_SINE

    def __post_init__(self) -> None:
        if not all(s >= 1 for s in self.sample_sizes):
            raise ValueError("sample sizes must be >= 1")
        if not all(t >= 1 for t in self.trace_counts):
            raise ValueError("trace counts must be >= 1")
        if self.n_out < 2:
            raise ValueError("n_out must be >= 2")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")
        if self.cutoff_s <= 0:
            raise ValueError("cutoff must be positive")

    @classmethod
    def from_json(cls, path: str | Path) -> "BenchConfig":
        raw = json.loads(Path(path).read_text())
        if "sample_sizes" in raw:
            raw["sample_sizes"] = tuple(int(s) for s in raw["sample_sizes"])
        if "trace_counts" in raw:
            raw["trace_counts"] = tuple(int(t) for t in raw["trace_counts"])
        if "algorithms" in raw:
            raw["algorithms"] = tuple(raw["algorithms"])
        if "signal_kind" in raw:
            raw["signal_kind"] = SignalKind(raw["signal_kind"])
        return cls(**raw)


@dataclass
class BenchRow:
    algorithm: str
    n_samples: int
    n_traces: int
    mean_s: float | None
    std_s: float | None
    peak_mem_bytes: int
    truncated: bool


@dataclass
class BenchReport:
    """One row per completed cell.

    Cells are scanned per (algorithm, n_samples) series in ascending trace
    count; once a cell exceeds the cutoff it is recorded as truncated (with
    no duration) and the larger cells of that series are skipped.
    """

    rows: list[BenchRow] = field(default_factory=list)

    def write_csv(self, path: str | Path) -> None:
        with Path(path).open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(REPORT_COLUMNS)
            for row in self.rows:
                writer.writerow(
                    [
                        row.algorithm,
                        row.n_samples,
                        row.n_traces,
                        "" if row.mean_s is None else f"{row.mean_s:.6f}",
                        "" if row.std_s is None else f"{row.std_s:.6f}",
                        row.peak_mem_bytes,
                        "true" if row.truncated else "false",
                    ]
                )


def raw_payload_bytes(n_samples: int, n_traces: int) -> int:
    """Timestamps plus numeric values, 8 bytes each."""
    return n_samples * n_traces * 16


class _RssTracker:
    """Samples this process's RSS on a background thread; reports peak growth."""

    def __init__(self, interval_s: float = 0.01):
        self._proc = psutil.Process()
        self._interval = interval_s
        self._stop = threading.Event()
        self._thread: threading.Thread | None = None
        self.baseline = 0
        self.peak = 0

    def sample(self) -> None:
        rss = self._proc.memory_info().rss
        if rss > self.peak:
            self.peak = rss

    def __enter__(self) -> "_RssTracker":
        self.baseline = self._proc.memory_info().rss
        self.peak = self.baseline
        self._stop.clear()
        self._thread = threading.Thread(target=self._loop, daemon=True)
        self._thread.start()
        return self

    def _loop(self) -> None:
        while not self._stop.wait(self._interval):
            self.sample()

    def __exit__(self, *exc_info) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join()
        self.sample()

    @property
    def growth(self) -> int:
        return max(0, self.peak - self.baseline)


def _cell_aggregator(algorithm: str) -> AggregatorConfig:
    return AggregatorConfig(algorithm=Algorithm(algorithm))


def _run_cell(
    cfg: BenchConfig, algorithm: str, n_samples: int, n_traces: int
) -> BenchRow:
    if algorithm == NO_AGGREGATION:
        server = ServerConfig(aggregator=AggregatorConfig(), default_n_out=cfg.n_out)
        n_out = max(cfg.n_out, n_samples + 1)
    else:
        server = ServerConfig(
            aggregator=_cell_aggregator(algorithm), default_n_out=cfg.n_out
        )
        n_out = cfg.n_out

    durations: list[float] = []
    truncated = False
    with _RssTracker() as tracker:
        # Generation stands in for data that real deployments already hold in
        # memory: it counts toward the cell's peak memory but not its time.
        traces = [
            generate_signal(n_samples, cfg.seed + k, cfg.signal_kind, trace_id=f"t{k}")
            for k in range(n_traces)
        ]
        tracker.sample()
        for _ in range(cfg.repetitions):
            t0 = time.perf_counter()
            registry = TraceRegistry()
            for trace in traces:
                registry.register(trace)
            request = ViewRequest(
                updates=[ViewEntry(t.trace_id, None, None, n_out) for t in traces]
            )
            response = handle_view_request(registry, request, server)
            dumps(response.to_wire())
            elapsed = time.perf_counter() - t0
            tracker.sample()
            if elapsed > cfg.cutoff_s:
                truncated = True
                break
            durations.append(elapsed)

    if truncated:
        mean_s: float | None = None
        std_s: float | None = None
    else:
        mean_s = statistics.mean(durations)
        std_s = statistics.stdev(durations) if len(durations) > 1 else 0.0
    return BenchRow(
        algorithm=algorithm,
        n_samples=n_samples,
        n_traces=n_traces,
        mean_s=mean_s,
        std_s=std_s,
        peak_mem_bytes=tracker.growth,
        truncated=truncated,
    )


def run_benchmark(cfg: BenchConfig, on_progress=None) -> BenchReport:
    """Time every (algorithm, n_samples, n_traces) cell of the grid."""
    report = BenchReport()
    for algorithm in cfg.algorithms:
        for n_samples in sorted(cfg.sample_sizes):
            hit_cutoff = False
            for n_traces in sorted(cfg.trace_counts):
                if hit_cutoff:
                    break
                row = _run_cell(cfg, algorithm, n_samples, n_traces)
                report.rows.append(row)
                hit_cutoff = row.truncated
                if on_progress is not None:
                    on_progress(row)
    return report


def _peak_to_peak(values: np.ndarray) -> float:
    finite = values[np.isfinite(values)]
    if len(finite) == 0:
        return 0.0
    return float(finite.max() - finite.min())


def aliasing_demo(
    out_dir: str | Path,
    n: int = 1_000_000,
    n_out: int = 1000,
    ratio: int = 4,
) -> dict:
    """Aggregate one high-frequency sine two ways and record what survives.

    Strided subsampling lands in phase with the sine (the stride is an exact
    multiple of the period) and flattens it; the extrema-preselecting kernel
    keeps the envelope. Emits one CSV per method plus a retention summary.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    xs = np.arange(n, dtype=np.int64)
    ys = np.sin(np.arange(n, dtype=np.float64) * (2.0 * np.pi / SINE_PERIOD))
    series = SeriesSlice(xs, ys)
    input_ptp = _peak_to_peak(ys)

    summary: dict[str, dict] = {"input": {"n_points": n, "peak_to_peak": input_ptp}}
    for label, result in (
        ("everynth", every_nth(n, n_out)),
        ("minmaxlttb", minmax_lttb(series, n_out, ratio)),
    ):
        x_sel = xs[result.indices]
        y_sel = ys[result.indices]
        with (out_dir / f"{label}.csv").open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["x", "y"])
            writer.writerows(zip(x_sel.tolist(), y_sel.tolist()))
        ptp = _peak_to_peak(y_sel)
        summary[label] = {
            "n_points": int(len(result.indices)),
            "peak_to_peak": ptp,
            "retention": ptp / input_ptp if input_ptp else 0.0,
        }

    (out_dir / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    return summary
