import type { TraceListing, ViewRequestWire, ViewResponseWire } from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Thin client for the view service; the fetch function is injectable so
 * tests can stub the network. */
export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  async listTraces(): Promise<TraceListing> {
    const resp = await this.fetchFn(`${this.baseUrl}/api/traces`);
    if (!resp.ok) {
      throw new Error(`GET /api/traces failed: ${resp.status}`);
    }
    return (await resp.json()) as TraceListing;
  }

  async postView(request: ViewRequestWire): Promise<ViewResponseWire> {
    const resp = await this.fetchFn(`${this.baseUrl}/api/view`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(request),
    });
    if (!resp.ok) {
      throw new Error(`POST /api/view failed: ${resp.status}`);
    }
    return (await resp.json()) as ViewResponseWire;
  }
}
