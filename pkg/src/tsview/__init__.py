"""tsview: interactive level-of-detail visualization for large time series.

Full-resolution data stays in an in-memory registry; every viewport change
is answered by slicing to the visible range, aggregating to a point budget,
and sending only the changed traces to the client.
"""

from .aggregation import (
    Algorithm,
    AggregationResult,
    AggregatorConfig,
    InvalidBudgetError,
    SeriesSlice,
    aggregate,
    every_nth,
    lttb,
    minmax,
    minmax_lttb,
    triangle_area,
)
from .protocol import TraceUpdate, ViewEntry, ViewError, ViewRequest, ViewResponse
from .service import (
    ServerConfig,
    create_app,
    decorate_trace_name,
    format_bin_size,
    handle_view_request,
    ingest_csv,
    serve,
    sniff_csv_schema,
)
from .store import (
    DuplicateTraceError,
    GapMask,
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

__version__ = "0.1.0"
