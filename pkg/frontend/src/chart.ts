import type { TraceUpdateWire } from "./types.js";

export interface SeriesState {
  update: TraceUpdateWire;
  color: string;
}

const PALETTE = [
  "#1f77b4",
  "#ff7f0e",
  "#2ca02c",
  "#d62728",
  "#9467bd",
  "#8c564b",
  "#e377c2",
  "#17becf",
  "#bcbd22",
  "#7f7f7f",
];

/** Holds the per-trace data currently on screen.
 *
 * Updates replace only the traces they name; legend text is the
 * server-provided display_name, verbatim — the client never recomputes
 * aggregation decorations.
 */
export class ChartModel {
  private series = new Map<string, SeriesState>();
  private order: string[] = [];

  register(id: string): void {
    if (!this.series.has(id)) {
      const color = PALETTE[this.order.length % PALETTE.length];
      this.order.push(id);
      this.series.set(id, {
        update: {
          id,
          x: [],
          y: [],
          labels: null,
          aggregated: false,
          bin_size_ns: null,
          display_name: id,
        },
        color,
      });
    }
  }

  applyUpdates(updates: TraceUpdateWire[]): void {
    for (const update of updates) {
      this.register(update.id);
      const state = this.series.get(update.id)!;
      state.update = update;
    }
  }

  ids(): string[] {
    return [...this.order];
  }

  get(id: string): SeriesState | undefined {
    return this.series.get(id);
  }

  legendText(id: string): string {
    return this.series.get(id)?.update.display_name ?? id;
  }

  color(id: string): string {
    return this.series.get(id)?.color ?? "#000";
  }

  pointCount(id: string): number {
    return this.series.get(id)?.update.x.length ?? 0;
  }

  /** Data extent over the given traces; null when nothing is drawable. */
  bounds(ids: string[]): { x0: number; x1: number; y0: number; y1: number } | null {
    let x0 = Infinity;
    let x1 = -Infinity;
    let y0 = Infinity;
    let y1 = -Infinity;
    for (const id of ids) {
      const state = this.series.get(id);
      if (!state) continue;
      const { x, y } = state.update;
      for (let i = 0; i < x.length; i++) {
        const yi = y[i];
        if (yi === null) continue;
        if (x[i] < x0) x0 = x[i];
        if (x[i] > x1) x1 = x[i];
        if (yi < y0) y0 = yi;
        if (yi > y1) y1 = yi;
      }
    }
    if (!isFinite(x0) || !isFinite(y0)) return null;
    if (x0 === x1) {
      x0 -= 1;
      x1 += 1;
    }
    if (y0 === y1) {
      y0 -= 1;
      y1 += 1;
    }
    return { x0, x1, y0, y1 };
  }
}

const MARGIN = { top: 12, right: 16, bottom: 28, left: 64 };

function formatTimeTick(ns: number, spanNs: number): string {
  if (spanNs < 10_000_000_000) {
    // sub-10s spans: show raw offset in ms/us/ns
    if (spanNs >= 10_000_000) return `${(ns / 1e6).toFixed(1)}ms`;
    if (spanNs >= 10_000) return `${(ns / 1e3).toFixed(1)}µs`;
    return `${ns.toFixed(0)}ns`;
  }
  const date = new Date(ns / 1e6);
  if (spanNs > 3 * 86_400e9) {
    return date.toISOString().slice(0, 10);
  }
  return date.toISOString().slice(11, 19);
}

function formatValueTick(v: number): string {
  if (v !== 0 && (Math.abs(v) >= 1e6 || Math.abs(v) < 1e-3)) {
    return v.toExponential(1);
  }
  return `${Math.round(v * 1000) / 1000}`;
}

/** Canvas renderer: multi-trace polylines on a shared time axis, broken at
 * null y values; categorical traces label the y ticks when they are alone
 * on screen. */
export class ChartView {
  constructor(private canvas: HTMLCanvasElement) {}

  plotArea(): { left: number; top: number; width: number; height: number } {
    const w = this.canvas.clientWidth;
    const h = this.canvas.clientHeight;
    return {
      left: MARGIN.left,
      top: MARGIN.top,
      width: Math.max(1, w - MARGIN.left - MARGIN.right),
      height: Math.max(1, h - MARGIN.top - MARGIN.bottom),
    };
  }

  plotWidth(): number {
    return this.plotArea().width;
  }

  /** Pixel x -> timestamp, for zoom gestures. */
  xAtPixel(px: number, x0: number, x1: number): number {
    const area = this.plotArea();
    const frac = (px - area.left) / area.width;
    return x0 + Math.min(Math.max(frac, 0), 1) * (x1 - x0);
  }

  draw(model: ChartModel, visible: string[], selection?: { a: number; b: number }): void {
    const dpr = window.devicePixelRatio || 1;
    const cssW = this.canvas.clientWidth;
    const cssH = this.canvas.clientHeight;
    if (this.canvas.width !== cssW * dpr || this.canvas.height !== cssH * dpr) {
      this.canvas.width = cssW * dpr;
      this.canvas.height = cssH * dpr;
    }
    const ctx = this.canvas.getContext("2d")!;
    ctx.setTransform(dpr, 0, 0, dpr, 0, 0);
    ctx.clearRect(0, 0, cssW, cssH);
    const area = this.plotArea();

    const bounds = model.bounds(visible);
    if (!bounds) {
      ctx.fillStyle = "#888";
      ctx.font = "13px sans-serif";
      ctx.fillText("no data in view", area.left + 8, area.top + 20);
      return;
    }
    const { x0, x1, y0, y1 } = bounds;
    const padY = (y1 - y0) * 0.05;
    const yLo = y0 - padY;
    const yHi = y1 + padY;

    const toPx = (x: number) => area.left + ((x - x0) / (x1 - x0)) * area.width;
    const toPy = (y: number) =>
      area.top + area.height - ((y - yLo) / (yHi - yLo)) * area.height;

    this.drawGridAndAxes(ctx, model, visible, area, x0, x1, yLo, yHi, toPy);

    ctx.save();
    ctx.beginPath();
    ctx.rect(area.left, area.top, area.width, area.height);
    ctx.clip();
    for (const id of visible) {
      const state = model.get(id);
      if (!state) continue;
      const { x, y } = state.update;
      ctx.strokeStyle = state.color;
      ctx.lineWidth = 1.4;
      ctx.beginPath();
      let penDown = false;
      for (let i = 0; i < x.length; i++) {
        const yi = y[i];
        if (yi === null) {
          penDown = false; // gap: break the line
          continue;
        }
        const px = toPx(x[i]);
        const py = toPy(yi);
        if (penDown) {
          ctx.lineTo(px, py);
        } else {
          ctx.moveTo(px, py);
          penDown = true;
        }
      }
      ctx.stroke();
    }
    ctx.restore();

    if (selection) {
      const a = Math.min(selection.a, selection.b);
      const b = Math.max(selection.a, selection.b);
      ctx.fillStyle = "rgba(80, 120, 200, 0.18)";
      ctx.fillRect(a, area.top, b - a, area.height);
    }
  }

  private drawGridAndAxes(
    ctx: CanvasRenderingContext2D,
    model: ChartModel,
    visible: string[],
    area: { left: number; top: number; width: number; height: number },
    x0: number,
    x1: number,
    yLo: number,
    yHi: number,
    toPy: (y: number) => number,
  ): void {
    ctx.strokeStyle = "#e3e6ea";
    ctx.fillStyle = "#556";
    ctx.font = "11px sans-serif";
    ctx.lineWidth = 1;

    // y ticks: categorical labels when a lone categorical trace is shown
    const categorical =
      visible.length === 1 ? model.get(visible[0])?.update.labels ?? null : null;
    if (categorical) {
      categorical.forEach((label, code) => {
        if (code < yLo || code > yHi) return;
        const py = toPy(code);
        ctx.strokeStyle = "#e3e6ea";
        ctx.beginPath();
        ctx.moveTo(area.left, py);
        ctx.lineTo(area.left + area.width, py);
        ctx.stroke();
        ctx.textAlign = "right";
        ctx.fillText(label, area.left - 6, py + 4);
      });
    } else {
      const ticks = 5;
      for (let i = 0; i <= ticks; i++) {
        const v = yLo + ((yHi - yLo) * i) / ticks;
        const py = toPy(v);
        ctx.beginPath();
        ctx.moveTo(area.left, py);
        ctx.lineTo(area.left + area.width, py);
        ctx.stroke();
        ctx.textAlign = "right";
        ctx.fillText(formatValueTick(v), area.left - 6, py + 4);
      }
    }

    const span = x1 - x0;
    const xTicks = Math.max(2, Math.floor(area.width / 140));
    ctx.textAlign = "center";
    for (let i = 0; i <= xTicks; i++) {
      const x = x0 + (span * i) / xTicks;
      const px = area.left + (area.width * i) / xTicks;
      ctx.fillText(
        formatTimeTick(x, span),
        px,
        area.top + area.height + 18,
      );
    }
  }
}
