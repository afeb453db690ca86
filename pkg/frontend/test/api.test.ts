import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";

function jsonResponse(payload: unknown, status = 200): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

describe("ApiClient", () => {
  it("lists traces from /api/traces", async () => {
    const calls: string[] = [];
    const client = new ApiClient("", async (input) => {
      calls.push(input);
      return jsonResponse({
        traces: [
          { id: "a", name: "a", kind: "numeric", n: 10, t0: 0, t1: 9 },
        ],
      });
    });

    const listing = await client.listTraces();
    expect(calls).toEqual(["/api/traces"]);
    expect(listing.traces[0].id).toBe("a");
  });

  it("posts view requests as JSON", async () => {
    let body: string | undefined;
    const client = new ApiClient("http://10.0.0.5:8080", async (input, init) => {
      expect(input).toBe("http://10.0.0.5:8080/api/view");
      expect(init?.method).toBe("POST");
      body = init?.body as string;
      return jsonResponse({ traces: [], errors: [] });
    });

    await client.postView({
      updates: [{ id: "a", start: null, end: null, n_out: 640 }],
    });
    expect(JSON.parse(body!)).toEqual({
      updates: [{ id: "a", start: null, end: null, n_out: 640 }],
    });
  });

  it("throws on non-2xx responses", async () => {
    const client = new ApiClient("", async () => jsonResponse({}, 500));
    await expect(client.listTraces()).rejects.toThrow("500");
  });
});
