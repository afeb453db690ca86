/** Wire types of the view service's JSON API.
 *
 * Timestamps are integer nanoseconds. JSON numbers arrive as doubles, so
 * epoch-scale values lose sub-microsecond precision in the browser; that is
 * fine for display and zoom arithmetic, and the server always works from
 * the exact integers it stores.
 */

export type TraceKind = "numeric" | "boolean" | "categorical";

export interface TraceDescriptor {
  id: string;
  name: string;
  kind: TraceKind;
  n: number;
  t0: number | null;
  t1: number | null;
}

export interface TraceListing {
  traces: TraceDescriptor[];
}

export interface ViewEntryWire {
  id: string;
  start: number | null;
  end: number | null;
  n_out: number;
}

export interface ViewRequestWire {
  updates: ViewEntryWire[];
}

export interface TraceUpdateWire {
  id: string;
  x: number[];
  y: (number | null)[];
  labels: string[] | null;
  aggregated: boolean;
  bin_size_ns: number | null;
  display_name: string;
}

export interface ViewErrorWire {
  id: string;
  code: string;
}

export interface ViewResponseWire {
  traces: TraceUpdateWire[];
  errors: ViewErrorWire[];
}
