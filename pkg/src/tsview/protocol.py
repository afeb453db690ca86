"""Wire messages for the view service.

JSON over HTTP POST, request-driven. Serialization is canonical (fixed key
order, compact separators) so identical messages always produce identical
bytes; timestamps cross the wire as integer nanoseconds and line breaks as
an explicit null y value, since JSON has no NaN literal.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

__all__ = [
    "ProtocolError",
    "TraceUpdate",
    "ViewEntry",
    "ViewError",
    "ViewRequest",
    "ViewResponse",
    "dumps",
]

ERROR_NOT_FOUND = "not_found"
ERROR_BAD_RANGE = "bad_range"


class ProtocolError(ValueError):
    """Malformed wire message."""


@dataclass
class ViewEntry:
    """One trace's visible range plus point budget; null bounds mean the
    trace's full extent."""

    trace_id: str
    start: int | None
    end: int | None
    n_out: int

    def to_wire(self) -> dict:
        return {
            "id": self.trace_id,
            "start": self.start,
            "end": self.end,
            "n_out": self.n_out,
        }

    @classmethod
    def from_wire(cls, obj: dict) -> "ViewEntry":
        if not isinstance(obj, dict):
            raise ProtocolError("view entry must be an object")
        try:
            trace_id = obj["id"]
            start = obj["start"]
            end = obj["end"]
            n_out = obj["n_out"]
        except KeyError as exc:
            raise ProtocolError(f"view entry missing field {exc}") from exc
        if not isinstance(trace_id, str):
            raise ProtocolError("view entry id must be a string")
        for bound, label in ((start, "start"), (end, "end")):
            if bound is not None and not isinstance(bound, int):
                raise ProtocolError(f"view entry {label} must be int or null")
        if not isinstance(n_out, int) or isinstance(n_out, bool):
            raise ProtocolError("view entry n_out must be an integer")
        return cls(trace_id=trace_id, start=start, end=end, n_out=n_out)


@dataclass
class ViewRequest:
    updates: list[ViewEntry]

    def to_wire(self) -> dict:
        return {"updates": [entry.to_wire() for entry in self.updates]}

    @classmethod
    def from_wire(cls, obj: dict) -> "ViewRequest":
        if not isinstance(obj, dict) or not isinstance(obj.get("updates"), list):
            raise ProtocolError("view request must carry an 'updates' list")
        return cls(updates=[ViewEntry.from_wire(e) for e in obj["updates"]])


@dataclass
class TraceUpdate:
    """Aggregated points for one trace, ready for the client.

    ``ys`` uses None for line breaks (gap markers); ``labels`` carries the
    categorical label table when applicable; ``display_name`` is the
    legend string, decorated when the data was aggregated.
    """

    trace_id: str
    xs: list[int]
    ys: list[float | None]
    labels: list[str] | None
    aggregated: bool
    bin_size_ns: int | None
    display_name: str

    def to_wire(self) -> dict:
        return {
            "id": self.trace_id,
            "x": self.xs,
            "y": self.ys,
            "labels": self.labels,
            "aggregated": self.aggregated,
            "bin_size_ns": self.bin_size_ns,
            "display_name": self.display_name,
        }

    @classmethod
    def from_wire(cls, obj: dict) -> "TraceUpdate":
        if not isinstance(obj, dict):
            raise ProtocolError("trace update must be an object")
        try:
            xs = obj["x"]
            ys = obj["y"]
            update = cls(
                trace_id=obj["id"],
                xs=list(xs),
                ys=list(ys),
                labels=None if obj["labels"] is None else list(obj["labels"]),
                aggregated=obj["aggregated"],
                bin_size_ns=obj["bin_size_ns"],
                display_name=obj["display_name"],
            )
        except KeyError as exc:
            raise ProtocolError(f"trace update missing field {exc}") from exc
        if len(update.xs) != len(update.ys):
            raise ProtocolError("trace update x and y must have equal length")
        for y in update.ys:
            if y is not None and not isinstance(y, (int, float)):
                raise ProtocolError("trace update y values must be numbers or null")
            if isinstance(y, float) and math.isnan(y):
                raise ProtocolError("trace update y values must use null, not NaN")
        return update


@dataclass
class ViewError:
    trace_id: str
    code: str

    def to_wire(self) -> dict:
        return {"id": self.trace_id, "code": self.code}

    @classmethod
    def from_wire(cls, obj: dict) -> "ViewError":
        try:
            return cls(trace_id=obj["id"], code=obj["code"])
        except (KeyError, TypeError) as exc:
            raise ProtocolError("malformed error entry") from exc


@dataclass
class ViewResponse:
    traces: list[TraceUpdate] = field(default_factory=list)
    errors: list[ViewError] = field(default_factory=list)

    def to_wire(self) -> dict:
        return {
            "traces": [t.to_wire() for t in self.traces],
            "errors": [e.to_wire() for e in self.errors],
        }

    @classmethod
    def from_wire(cls, obj: dict) -> "ViewResponse":
        if not isinstance(obj, dict):
            raise ProtocolError("view response must be an object")
        return cls(
            traces=[TraceUpdate.from_wire(t) for t in obj.get("traces", [])],
            errors=[ViewError.from_wire(e) for e in obj.get("errors", [])],
        )


def dumps(wire_obj: dict) -> str:
    """Canonical JSON text for a wire dict (compact, insertion-ordered)."""
    return json.dumps(wire_obj, separators=(",", ":"), allow_nan=False)
