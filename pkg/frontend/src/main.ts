import { ApiClient } from "./api.js";
import { ChartModel, ChartView } from "./chart.js";
import { ViewScheduler } from "./scheduler.js";
import { ViewportState } from "./viewport.js";
import type { TraceDescriptor, ViewResponseWire } from "./types.js";

const params = new URLSearchParams(window.location.search);
const api = new ApiClient(params.get("host") ?? "");
const nOutParam = params.get("nout");
const viewport = new ViewportState(
  4000,
  nOutParam !== null ? Number(nOutParam) : null,
);

const canvas = document.getElementById("chart") as HTMLCanvasElement;
const legendEl = document.getElementById("legend")!;
const bannerEl = document.getElementById("banner")!;
const model = new ChartModel();
const view = new ChartView(canvas);

let descriptors: TraceDescriptor[] = [];
let selection: { a: number; b: number } | null = null;
// x extent of the data currently drawn, for pixel->time mapping
let drawnRange: { x0: number; x1: number } | null = null;

function showBanner(message: string): void {
  bannerEl.textContent = message;
  bannerEl.classList.add("visible");
}

function hideBanner(): void {
  bannerEl.classList.remove("visible");
}

function redraw(): void {
  const visible = viewport.visibleIds(model.ids());
  view.draw(model, visible, selection ?? undefined);
  const bounds = model.bounds(visible);
  drawnRange = bounds ? { x0: bounds.x0, x1: bounds.x1 } : null;
}

function applyResponse(response: ViewResponseWire): void {
  hideBanner();
  model.applyUpdates(response.traces);
  if (response.errors.length > 0) {
    showBanner(
      "some traces failed: " +
        response.errors.map((e) => `${e.id} (${e.code})`).join(", "),
    );
  }
  refreshLegend();
  redraw();
}

const scheduler = new ViewScheduler(
  (request) => api.postView(request),
  applyResponse,
  () => showBanner("view request failed; showing last good data"),
);

function requestView(): void {
  void scheduler.commit(
    viewport.buildEntries(
      descriptors.map((d) => d.id),
      view.plotWidth(),
    ),
  );
}

function refreshLegend(): void {
  legendEl.replaceChildren(
    ...descriptors.map((descriptor) => {
      const item = document.createElement("label");
      item.className = "legend-item";
      const checkbox = document.createElement("input");
      checkbox.type = "checkbox";
      checkbox.checked = viewport.isVisible(descriptor.id);
      checkbox.addEventListener("change", () => {
        viewport.setVisible(descriptor.id, checkbox.checked);
        redraw();
        requestView();
      });
      const swatch = document.createElement("span");
      swatch.className = "swatch";
      swatch.style.background = model.color(descriptor.id);
      const text = document.createElement("span");
      // legend text mirrors the server's display_name exactly
      text.textContent = model.legendText(descriptor.id);
      item.append(checkbox, swatch, text);
      return item;
    }),
  );
}

// --- gestures ---------------------------------------------------------------

canvas.addEventListener("mousedown", (ev) => {
  if (ev.button !== 0) return;
  selection = { a: ev.offsetX, b: ev.offsetX };
  redraw();
});

canvas.addEventListener("mousemove", (ev) => {
  if (!selection) return;
  selection.b = ev.offsetX;
  redraw();
});

window.addEventListener("mouseup", () => {
  if (!selection || !drawnRange) {
    selection = null;
    return;
  }
  const { a, b } = selection;
  selection = null;
  redraw();
  if (Math.abs(a - b) < 4) return; // a click, not a zoom
  const t0 = view.xAtPixel(Math.min(a, b), drawnRange.x0, drawnRange.x1);
  const t1 = view.xAtPixel(Math.max(a, b), drawnRange.x0, drawnRange.x1);
  viewport.setRange(t0, t1);
  requestView();
});

canvas.addEventListener("wheel", (ev) => {
  if (!drawnRange) return;
  ev.preventDefault();
  const { x0, x1 } = drawnRange;
  const pivot = view.xAtPixel(ev.offsetX, x0, x1);
  const factor = ev.deltaY < 0 ? 0.8 : 1.25;
  const newStart = pivot - (pivot - x0) * factor;
  const newEnd = pivot + (x1 - pivot) * factor;
  viewport.setRange(newStart, newEnd);
  drawnRange = { x0: newStart, x1: newEnd };
  // debounced: one request when the wheel gesture settles
  scheduler.schedule(() =>
    viewport.buildEntries(
      descriptors.map((d) => d.id),
      view.plotWidth(),
    ),
  );
});

canvas.addEventListener("dblclick", () => {
  viewport.reset();
  requestView();
});

window.addEventListener("resize", () => {
  redraw();
  scheduler.schedule(() =>
    viewport.buildEntries(
      descriptors.map((d) => d.id),
      view.plotWidth(),
    ),
  );
});

// --- bootstrap ---------------------------------------------------------------

async function start(): Promise<void> {
  try {
    const listing = await api.listTraces();
    descriptors = listing.traces;
    for (const descriptor of descriptors) {
      model.register(descriptor.id);
    }
    refreshLegend();
    requestView(); // overview first: full extent of every trace
  } catch (error) {
    showBanner(`cannot reach the view service: ${String(error)}`);
  }
}

void start();
