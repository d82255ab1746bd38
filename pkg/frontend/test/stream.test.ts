import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import { StateStream } from "../src/stream.js";
import type { ApiEvent, ConnectionStatus, StateView } from "../src/types.js";
import { apiEvent, stateView } from "./fixtures.js";

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

function jsonResponse(body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status: 200,
    headers: { "content-type": "application/json" },
  });
}

afterEach(() => vi.unstubAllGlobals());

function collectingStream(options: { pollIntervalMs: number; staleAfterMs?: number }) {
  const states: StateView[] = [];
  const events: ApiEvent[] = [];
  const statuses: ConnectionStatus[] = [];
  const stream = new StateStream(new ApiClient(), {
    onState: (s) => states.push(s),
    onEvent: (e) => events.push(e),
    onStatus: (s) => statuses.push(s),
  }, { forcePolling: true, ...options });
  return { stream, states, events, statuses };
}

describe("state stream (polling fallback)", () => {
  it("delivers events in order, each at most once, then the state", async () => {
    const eventBatches: ApiEvent[][] = [
      [apiEvent({ seq: 1 }), apiEvent({ seq: 2 })],
      [apiEvent({ seq: 1 }), apiEvent({ seq: 2 }), apiEvent({ seq: 3 })],  // overlap
      [],
    ];
    let call = 0;
    vi.stubGlobal("fetch", vi.fn(async (url: string) => {
      if (String(url).includes("/api/events")) {
        return jsonResponse(eventBatches[Math.min(call++, eventBatches.length - 1)]);
      }
      const view = stateView();
      view.last_event_seq = 0; // let events drive the cursor
      return jsonResponse(view);
    }));

    const { stream, states, events } = collectingStream({ pollIntervalMs: 20 });
    stream.start();
    await sleep(120);
    stream.stop();

    expect(events.map((e) => e.seq)).toEqual([1, 2, 3]);
    expect(states.length).toBeGreaterThanOrEqual(2);
  });

  it("reports polling liveness and goes stale after silence", async () => {
    let healthy = true;
    vi.stubGlobal("fetch", vi.fn(async (url: string) => {
      if (!healthy) throw new Error("unreachable");
      if (String(url).includes("/api/events")) return jsonResponse([]);
      return jsonResponse(stateView());
    }));

    const { stream, statuses } = collectingStream({ pollIntervalMs: 20, staleAfterMs: 80 });
    stream.start();
    await sleep(60);
    expect(statuses).toContain("polling");
    healthy = false;
    await sleep(200);
    stream.stop();
    expect(statuses.at(-1)).toBe("stale");
  });

  it("asks only for events newer than the last state seq", async () => {
    const seen: string[] = [];
    vi.stubGlobal("fetch", vi.fn(async (url: string) => {
      seen.push(String(url));
      if (String(url).includes("/api/events")) return jsonResponse([]);
      const view = stateView();
      view.last_event_seq = 7;
      return jsonResponse(view);
    }));

    const { stream } = collectingStream({ pollIntervalMs: 20 });
    stream.start();
    await sleep(90);
    stream.stop();
    expect(seen[0]).toBe("/api/events?since=0");
    expect(seen.filter((u) => u.includes("since=7")).length).toBeGreaterThan(0);
  });
});
