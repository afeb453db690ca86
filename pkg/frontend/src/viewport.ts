import type { ViewEntryWire } from "./types.js";

export interface TimeRange {
  start: number | null;
  end: number | null;
}

const MIN_N_OUT = 2;

/** Shared time axis state: current range, per-trace visibility, and the
 * point budget derived from the canvas pixel width. Null bounds mean the
 * full extent of each trace. */
export class ViewportState {
  private range: TimeRange = { start: null, end: null };
  private hidden = new Set<string>();

  constructor(
    private maxNOut = 4000,
    private fixedNOut: number | null = null,
  ) {}

  nOut(canvasPixelWidth: number): number {
    const wanted = this.fixedNOut ?? Math.round(canvasPixelWidth);
    return Math.min(Math.max(wanted, MIN_N_OUT), this.maxNOut);
  }

  currentRange(): TimeRange {
    return { ...this.range };
  }

  setRange(start: number, end: number): void {
    if (end < start) {
      [start, end] = [end, start];
    }
    this.range = { start: Math.round(start), end: Math.round(end) };
  }

  reset(): void {
    this.range = { start: null, end: null };
  }

  isFullExtent(): boolean {
    return this.range.start === null && this.range.end === null;
  }

  setVisible(id: string, visible: boolean): void {
    if (visible) {
      this.hidden.delete(id);
    } else {
      this.hidden.add(id);
    }
  }

  isVisible(id: string): boolean {
    return !this.hidden.has(id);
  }

  visibleIds(allIds: string[]): string[] {
    return allIds.filter((id) => this.isVisible(id));
  }

  /** One request entry per visible trace, all sharing the current range. */
  buildEntries(allIds: string[], canvasPixelWidth: number): ViewEntryWire[] {
    const nOut = this.nOut(canvasPixelWidth);
    return this.visibleIds(allIds).map((id) => ({
      id,
      start: this.range.start,
      end: this.range.end,
      n_out: nOut,
    }));
  }
}
