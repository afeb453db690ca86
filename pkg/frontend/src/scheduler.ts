import type { ViewEntryWire, ViewRequestWire, ViewResponseWire } from "./types.js";

export type PostView = (request: ViewRequestWire) => Promise<ViewResponseWire>;

/** Issues view requests at gesture granularity and drops stale responses.
 *
 * Every issued request gets a monotonically increasing sequence number; a
 * response is applied only when no newer request has been issued meanwhile,
 * so out-of-order arrivals can never roll the chart back. High-frequency
 * event streams (wheel zoom) go through schedule(), which debounces until
 * the gesture settles; discrete gestures (drag end, double click) call
 * commit() directly — exactly one request per committed gesture.
 */
export class ViewScheduler {
  private issuedSeq = 0;
  private appliedSeq = 0;
  private timer: ReturnType<typeof setTimeout> | null = null;
  requestCount = 0;

  constructor(
    private post: PostView,
    private onApply: (response: ViewResponseWire) => void,
    private onError: (error: unknown) => void = () => {},
    private debounceMs = 150,
  ) {}

  /** Issue one batched request for the gesture that just committed. */
  commit(entries: ViewEntryWire[]): Promise<void> {
    this.cancelPending();
    return this.issue(entries);
  }

  /** Debounce: (re)arm a timer; only the settled gesture issues a request. */
  schedule(buildEntries: () => ViewEntryWire[]): void {
    this.cancelPending();
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.issue(buildEntries());
    }, this.debounceMs);
  }

  cancelPending(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
  }

  private async issue(entries: ViewEntryWire[]): Promise<void> {
    if (entries.length === 0) {
      return;
    }
    const seq = ++this.issuedSeq;
    this.requestCount += 1;
    try {
      const response = await this.post({ updates: entries });
      if (seq !== this.issuedSeq || seq <= this.appliedSeq) {
        return; // superseded by a newer request
      }
      this.appliedSeq = seq;
      this.onApply(response);
    } catch (error) {
      if (seq === this.issuedSeq) {
        this.onError(error);
      }
    }
  }
}
