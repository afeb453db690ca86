"""The exploration loop: CSV ingest, viewport-change handling, HTTP serving.

Every request is answered by slicing the stored trace to the visible range,
aggregating to the point budget, and returning only the requested traces.
Aggregated traces get an "[R] " legend prefix plus a bin-size suffix so the
client can surface that it is looking at a reduced view.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import HTMLResponse, JSONResponse
from fastapi.staticfiles import StaticFiles

from .aggregation import AggregatorConfig, InvalidBudgetError, SeriesSlice, aggregate
from .protocol import (
    ERROR_BAD_RANGE,
    ERROR_NOT_FOUND,
    ProtocolError,
    TraceUpdate,
    ViewEntry,
    ViewError,
    ViewRequest,
    ViewResponse,
)
from .store import (
    DEFAULT_GAP_FACTOR,
    Trace,
    TraceRegistry,
    TraceValidationError,
    UnknownTraceError,
    ValueArray,
    ValueKind,
    encode_values,
    slice_view,
)

__all__ = [
    "ColumnSpec",
    "CsvSchema",
    "CsvValidationError",
    "ServerConfig",
    "create_app",
    "decorate_trace_name",
    "format_bin_size",
    "handle_view_request",
    "ingest_csv",
    "serve",
    "sniff_csv_schema",
    "trace_descriptors",
]

AGGREGATED_PREFIX = "[R] "

_UNITS = (
    ("d", 86_400_000_000_000),
    ("h", 3_600_000_000_000),
    ("m", 60_000_000_000),
    ("s", 1_000_000_000),
    ("ms", 1_000_000),
    ("µs", 1_000),
    ("ns", 1),
)


@dataclass
class ServerConfig:
    """How the service is wired: bind address, budget and kernel defaults."""

    host: str = "127.0.0.1"
    port: int = 8080
    default_n_out: int = 1000
    aggregator: AggregatorConfig = field(default_factory=AggregatorConfig)
    gap_factor: float = DEFAULT_GAP_FACTOR
    static_dir: Path | None = None

    def __post_init__(self) -> None:
        if self.default_n_out < 2:
            raise ValueError("default_n_out must be >= 2")


def format_bin_size(t_start: int, t_end: int, n_out: int) -> str:
    """Human estimate of the time span covered by one aggregation bin.

    Uses the largest unit out of ns/us/ms/s/m/h/d whose value is at least 1,
    rendered to at most 3 significant digits with a "~" prefix.
    """
    if t_end < t_start:
        raise ValueError("t_end must be >= t_start")
    if n_out < 1:
        raise ValueError("n_out must be >= 1")
    bin_ns = (t_end - t_start) / n_out
    for unit, factor in _UNITS:
        if bin_ns >= factor:
            value = bin_ns / factor
            text = f"{value:.3g}"
            if "e" in text:
                text = f"{value:.0f}"
            return f"~{text}{unit}"
    return "~0ns"


def decorate_trace_name(name: str, aggregated: bool, bin_suffix: str) -> str:
    """Legend string: "[R] " prefix and bin-size suffix when aggregated."""
    if not aggregated:
        return name
    return f"{AGGREGATED_PREFIX}{name} {bin_suffix}"


def _empty_update(trace: Trace) -> TraceUpdate:
    labels = trace.values.labels
    return TraceUpdate(
        trace_id=trace.trace_id,
        xs=[],
        ys=[],
        labels=None if labels is None else list(labels),
        aggregated=False,
        bin_size_ns=None,
        display_name=trace.name,
    )


def _build_trace_update(
    registry: TraceRegistry, entry: ViewEntry, cfg: ServerConfig
) -> TraceUpdate:
    trace = registry.get(entry.trace_id)
    if entry.start is not None and entry.end is not None and entry.start > entry.end:
        raise ValueError("start must be <= end")
    if trace.row_count == 0:
        return _empty_update(trace)

    t_first = int(trace.xs[0])
    t_last = int(trace.xs[-1])
    t_start = t_first if entry.start is None else entry.start
    t_end = t_last if entry.end is None else entry.end

    lo, hi = slice_view(trace, t_start, t_end)
    encoded, labels = encode_values(trace.values.view(lo, hi))
    view = SeriesSlice(trace.xs[lo:hi], encoded)
    result = aggregate(view, entry.n_out, cfg.aggregator)

    x_sel = view.xs[result.indices]
    y_sel = view.ys[result.indices]
    sel_global = lo + result.indices

    # Gap positions between consecutive retained points become explicit
    # break points (null y at the gap's midpoint timestamp).
    gaps = registry.gap_mask(trace.trace_id).gap_after
    if len(gaps) and len(sel_global) >= 2:
        in_span = gaps[(gaps >= sel_global[0]) & (gaps < sel_global[-1])]
    else:
        in_span = gaps[:0]
    if len(in_span):
        mids = (trace.xs[in_span] + trace.xs[in_span + 1]) // 2
        insert_at = np.searchsorted(sel_global, in_span, side="right")
        x_out = np.insert(x_sel, insert_at, mids)
        y_out = np.insert(y_sel, insert_at, np.nan)
        is_break = np.zeros(len(x_sel), dtype=bool)
        is_break = np.insert(is_break, insert_at, True)
    else:
        x_out = x_sel
        y_out = y_sel
        is_break = np.zeros(len(x_sel), dtype=bool)

    ys_wire: list[float | None] = [
        None if (brk or math.isnan(y)) else float(y)
        for y, brk in zip(y_out.tolist(), is_break.tolist())
    ]

    if result.aggregated:
        span_start = max(t_start, t_first)
        span_end = min(t_end, t_last)
        bin_size_ns = (span_end - span_start) // entry.n_out
        suffix = format_bin_size(span_start, span_end, entry.n_out)
        display_name = decorate_trace_name(trace.name, True, suffix)
    else:
        bin_size_ns = None
        display_name = trace.name

    return TraceUpdate(
        trace_id=trace.trace_id,
        xs=[int(x) for x in x_out.tolist()],
        ys=ys_wire,
        labels=None if labels is None else list(labels),
        aggregated=result.aggregated,
        bin_size_ns=bin_size_ns,
        display_name=display_name,
    )


def handle_view_request(
    registry: TraceRegistry, req: ViewRequest, cfg: ServerConfig
) -> ViewResponse:
    """Serve each requested trace; per-entry failures never fail the batch."""
    response = ViewResponse()
    for entry in req.updates:
        if entry.n_out < 2:
            response.errors.append(ViewError(entry.trace_id, ERROR_BAD_RANGE))
            continue
        try:
            response.traces.append(_build_trace_update(registry, entry, cfg))
        except UnknownTraceError:
            response.errors.append(ViewError(entry.trace_id, ERROR_NOT_FOUND))
        except (ValueError, InvalidBudgetError):
            response.errors.append(ViewError(entry.trace_id, ERROR_BAD_RANGE))
    return response


# --- CSV ingestion ---------------------------------------------------------


class CsvValidationError(ValueError):
    """CSV content violates the schema (unsorted time, unparseable cell)."""


@dataclass
class ColumnSpec:
    name: str
    kind: ValueKind


@dataclass
class CsvSchema:
    """Declares the time column and the typed value columns of a CSV file."""

    time_column: str
    value_columns: list[ColumnSpec]


_BOOL_TOKENS = {
    "true": True,
    "false": False,
    "t": True,
    "f": False,
    "1": True,
    "0": False,
    "on": True,
    "off": False,
    "yes": True,
    "no": False,
}


def _parse_time_cell(cell: str) -> int:
    """Integer ns, float seconds, or RFC 3339 -> nanoseconds since epoch."""
    text = cell.strip()
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return round(float(text) * 1e9)
    except ValueError:
        pass
    iso = text.replace("Z", "+00:00") if text.endswith("Z") else text
    dt = datetime.fromisoformat(iso)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return round(dt.timestamp() * 1e9)


def _parse_bool_cell(cell: str) -> bool:
    try:
        return _BOOL_TOKENS[cell.strip().lower()]
    except KeyError:
        raise ValueError(f"not a boolean token: {cell!r}") from None


def ingest_csv(registry: TraceRegistry, path: str | Path, schema: CsvSchema) -> list[str]:
    """Register one trace per declared value column; rows must be time-sorted.

    Numeric cells left empty become NaN gap markers; categorical labels are
    assigned codes in order of first appearance.
    """
    path = Path(path)
    timestamps: list[int] = []
    columns: dict[str, list] = {c.name: [] for c in schema.value_columns}
    label_tables: dict[str, dict[str, int]] = {
        c.name: {} for c in schema.value_columns if c.kind is ValueKind.CATEGORICAL
    }
    kinds = {c.name: c.kind for c in schema.value_columns}

    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise CsvValidationError(f"{path}: empty file")
        missing = [
            c
            for c in [schema.time_column, *columns]
            if c not in reader.fieldnames
        ]
        if missing:
            raise CsvValidationError(f"{path}: missing columns {missing}")

        prev_ts: int | None = None
        for row_num, row in enumerate(reader, start=1):
            cell = row[schema.time_column]
            try:
                ts = _parse_time_cell(cell)
            except ValueError as exc:
                raise CsvValidationError(
                    f"{path}: row {row_num}, column {schema.time_column!r}:"
                    f" unparseable time {cell!r}"
                ) from exc
            if prev_ts is not None and ts < prev_ts:
                raise CsvValidationError(
                    f"{path}: time goes backwards at row {row_num}"
                )
            prev_ts = ts
            timestamps.append(ts)

            for name, kind in kinds.items():
                cell = row[name]
                try:
                    if kind is ValueKind.NUMERIC:
                        value = math.nan if cell.strip() == "" else float(cell)
                    elif kind is ValueKind.BOOLEAN:
                        value = _parse_bool_cell(cell)
                    else:
                        table = label_tables[name]
                        value = table.setdefault(cell, len(table))
                except ValueError as exc:
                    raise CsvValidationError(
                        f"{path}: row {row_num}, column {name!r}:"
                        f" unparseable value {cell!r}"
                    ) from exc
                columns[name].append(value)

    xs = np.asarray(timestamps, dtype=np.int64)
    trace_ids = []
    for spec in schema.value_columns:
        raw = columns[spec.name]
        if spec.kind is ValueKind.NUMERIC:
            values = ValueArray.numeric(raw)
        elif spec.kind is ValueKind.BOOLEAN:
            values = ValueArray.boolean(raw)
        else:
            values = ValueArray.categorical(raw, list(label_tables[spec.name]))
        trace_ids.append(
            registry.register(Trace(spec.name, spec.name, xs, values))
        )
    return trace_ids


def sniff_csv_schema(path: str | Path, sample_rows: int = 1000) -> CsvSchema:
    """Guess a schema: first column is time; value columns are numeric when
    every sampled cell parses as a float, boolean when every cell is a
    boolean token, categorical otherwise."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or len(header) < 2:
            raise CsvValidationError(f"{path}: need a time column plus data columns")
        samples: list[list[str]] = [[] for _ in header[1:]]
        for i, row in enumerate(reader):
            if i >= sample_rows:
                break
            for j, cell in enumerate(row[1:]):
                samples[j].append(cell)

    def classify(cells: list[str]) -> ValueKind:
        non_empty = [c for c in cells if c.strip() != ""]
        if all(_is_float(c) for c in non_empty):
            return ValueKind.NUMERIC
        if all(c.strip().lower() in _BOOL_TOKENS for c in non_empty):
            return ValueKind.BOOLEAN
        return ValueKind.CATEGORICAL

    return CsvSchema(
        time_column=header[0],
        value_columns=[
            ColumnSpec(name, classify(cells))
            for name, cells in zip(header[1:], samples)
        ],
    )


def _is_float(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


# --- HTTP layer -------------------------------------------------------------


def trace_descriptors(registry: TraceRegistry) -> list[dict]:
    descriptors = []
    for trace_id in registry.ids():
        trace = registry.get(trace_id)
        n = trace.row_count
        descriptors.append(
            {
                "id": trace.trace_id,
                "name": trace.name,
                "kind": trace.values.kind.value,
                "n": n,
                "t0": int(trace.xs[0]) if n else None,
                "t1": int(trace.xs[-1]) if n else None,
            }
        )
    return descriptors


_FALLBACK_PAGE = """<!doctype html>
<html><head><title>tsview</title></head>
<body><h1>tsview</h1>
<p>The explorer UI is not built. Run <code>npm install && npm run build</code>
in <code>frontend/</code>, or restart with <code>--static-dir</code> pointing
at the built assets. The JSON API lives at <code>/api/traces</code> and
<code>/api/view</code>.</p></body></html>
"""


def _locate_static_dir(cfg: ServerConfig) -> Path | None:
    if cfg.static_dir is not None:
        return cfg.static_dir if cfg.static_dir.is_dir() else None
    candidates = [
        Path.cwd() / "frontend" / "dist",
        Path(__file__).resolve().parents[2] / "frontend" / "dist",
    ]
    for candidate in candidates:
        if (candidate / "index.html").is_file():
            return candidate
    return None


def create_app(registry: TraceRegistry, cfg: ServerConfig) -> FastAPI:
    """FastAPI app exposing the trace listing, view endpoint, and UI assets."""
    app = FastAPI(title="tsview", docs_url=None, redoc_url=None)

    @app.get("/api/traces")
    def list_traces() -> JSONResponse:
        return JSONResponse({"traces": trace_descriptors(registry)})

    @app.post("/api/view")
    async def view(request: Request) -> JSONResponse:
        try:
            body = await request.json()
        except Exception:
            return JSONResponse({"error": "body must be JSON"}, status_code=400)
        try:
            req = ViewRequest.from_wire(body)
        except ProtocolError as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        response = handle_view_request(registry, req, cfg)
        return JSONResponse(response.to_wire())

    static_dir = _locate_static_dir(cfg)
    if static_dir is not None:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    else:

        @app.get("/", response_class=HTMLResponse)
        def index() -> str:
            return _FALLBACK_PAGE

    return app


def serve(registry: TraceRegistry, cfg: ServerConfig) -> None:
    """Run the HTTP service until interrupted."""
    import uvicorn

    uvicorn.run(create_app(registry, cfg), host=cfg.host, port=cfg.port)
