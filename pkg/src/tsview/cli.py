"""Command line entry points: serve a CSV, run the benchmark grid, or emit
the aliasing demonstration files."""
from __future__ import annotations

import sys
from pathlib import Path

import click

from .aggregation import Algorithm, AggregatorConfig
from .bench import BenchConfig, aliasing_demo, run_benchmark
from .service import ServerConfig, ingest_csv, serve, sniff_csv_schema
from .store import TraceRegistry


@click.group()
def main() -> None:
    """Interactive level-of-detail viewer for large time series."""


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=click.IntRange(1, 65535), default=8080, show_default=True)
@click.option(
    "--data",
    "data_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    required=True,
    help="CSV file: a time column followed by value columns.",
)
@click.option("--n-out", type=int, default=1000, show_default=True)
@click.option(
    "--aggregator",
    type=click.Choice([a.value for a in Algorithm]),
    default=Algorithm.MINMAX_LTTB.value,
    show_default=True,
)
@click.option("--ratio", type=int, default=4, show_default=True)
@click.option("--gap-factor", type=float, default=4.0, show_default=True)
@click.option(
    "--static-dir",
    type=click.Path(exists=True, file_okay=False, path_type=Path),
    default=None,
    help="Directory with the built explorer UI (defaults to frontend/dist).",
)
def serve_cmd(
    host: str,
    port: int,
    data_path: Path,
    n_out: int,
    aggregator: str,
    ratio: int,
    gap_factor: float,
    static_dir: Path | None,
) -> None:
    """Ingest a CSV and serve the explorer."""
    registry = TraceRegistry(gap_factor=gap_factor)
    schema = sniff_csv_schema(data_path)
    trace_ids = ingest_csv(registry, data_path, schema)
    click.echo(f"loaded {len(trace_ids)} trace(s) from {data_path}")
    cfg = ServerConfig(
        host=host,
        port=port,
        default_n_out=n_out,
        aggregator=AggregatorConfig(algorithm=Algorithm(aggregator), minmax_ratio=ratio),
        gap_factor=gap_factor,
        static_dir=static_dir,
    )
    serve(registry, cfg)


@main.command("bench")
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    default=None,
    help="JSON file overriding BenchConfig fields; defaults are used if omitted.",
)
@click.option(
    "--out",
    "out_path",
    type=click.Path(dir_okay=False, path_type=Path),
    default=Path("report.csv"),
    show_default=True,
)
def bench_cmd(config_path: Path | None, out_path: Path) -> None:
    """Run the scaling grid and write the CSV report."""
    cfg = BenchConfig() if config_path is None else BenchConfig.from_json(config_path)
    click.echo(
        "benchmarked quantity: ingest + full-extent view + serialize"
        " (no browser render)",
        err=True,
    )

    def progress(row) -> None:
        status = "TRUNCATED" if row.truncated else f"{row.mean_s:.3f}s"
        click.echo(
            f"{row.algorithm} n={row.n_samples} traces={row.n_traces}: {status}",
            err=True,
        )

    report = run_benchmark(cfg, on_progress=progress)
    report.write_csv(out_path)
    click.echo(f"wrote {len(report.rows)} rows to {out_path}")


@main.command("demo-aliasing")
@click.option(
    "--out",
    "out_dir",
    type=click.Path(file_okay=False, path_type=Path),
    default=Path("aliasing-demo"),
    show_default=True,
)
def demo_aliasing_cmd(out_dir: Path) -> None:
    """Aggregate a high-frequency sine with and without extrema preselection."""
    summary = aliasing_demo(out_dir)
    for label in ("everynth", "minmaxlttb"):
        entry = summary[label]
        click.echo(
            f"{label}: {entry['n_points']} points,"
            f" peak-to-peak retention {entry['retention']:.4f}"
        )


if __name__ == "__main__":
    sys.exit(main())
