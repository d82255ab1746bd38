import type { ApiClient } from "./api.js";
import type { ApiEvent, ConnectionStatus, StateView, StreamMessage } from "./types.js";

export interface StreamHandlers {
  onState(view: StateView): void;
  onEvent(event: ApiEvent): void;
  onStatus(status: ConnectionStatus): void;
}

export interface StreamOptions {
  /** Polling cadence used when the push stream is unavailable. */
  pollIntervalMs?: number;
  /** Silence threshold after which the UI shows a stale indicator. */
  staleAfterMs?: number;
  /** Skip the WebSocket entirely (tests, environments without WS). */
  forcePolling?: boolean;
}

const DEFAULT_POLL_MS = 2000;
const DEFAULT_STALE_MS = 3000;

/**
 * Live state feed: WebSocket push stream with an HTTP polling fallback.
 * Events are delivered in sequence order, each at most once.
 */
export class StateStream {
  private ws: WebSocket | null = null;
  private pollTimer: ReturnType<typeof setInterval> | null = null;
  private staleTimer: ReturnType<typeof setTimeout> | null = null;
  private lastSeq = 0;
  private stopped = true;
  private polling = false;

  constructor(
    private readonly api: ApiClient,
    private readonly handlers: StreamHandlers,
    private readonly options: StreamOptions = {},
  ) {}

  start(): void {
    this.stopped = false;
    this.handlers.onStatus("connecting");
    const wsAvailable = typeof WebSocket !== "undefined";
    if (this.options.forcePolling || !wsAvailable) {
      this.startPolling();
      return;
    }
    this.connectWebSocket();
  }

  stop(): void {
    this.stopped = true;
    if (this.ws) {
      this.ws.onclose = null;
      this.ws.onerror = null;
      this.ws.close();
      this.ws = null;
    }
    if (this.pollTimer !== null) clearInterval(this.pollTimer);
    this.pollTimer = null;
    if (this.staleTimer !== null) clearTimeout(this.staleTimer);
    this.staleTimer = null;
    this.polling = false;
  }

  private wsUrl(): string {
    const base = this.api.baseUrl || (typeof location !== "undefined" ? location.origin : "");
    return base.replace(/^http/, "ws") + "/api/stream";
  }

  private connectWebSocket(): void {
    let socket: WebSocket;
    try {
      socket = new WebSocket(this.wsUrl());
    } catch {
      this.startPolling();
      return;
    }
    this.ws = socket;
    socket.onopen = () => this.handlers.onStatus("live");
    socket.onmessage = (raw) => {
      let message: StreamMessage;
      try {
        message = JSON.parse(String(raw.data)) as StreamMessage;
      } catch {
        return;
      }
      this.deliver(message);
    };
    const fallBack = () => {
      if (this.stopped) return;
      this.ws = null;
      this.startPolling();
    };
    socket.onerror = fallBack;
    socket.onclose = fallBack;
  }

  private startPolling(): void {
    if (this.polling || this.stopped) return;
    this.polling = true;
    const interval = this.options.pollIntervalMs ?? DEFAULT_POLL_MS;
    const poll = () => void this.pollOnce();
    this.pollTimer = setInterval(poll, interval);
    poll();
  }

  private async pollOnce(): Promise<void> {
    try {
      const events = await this.api.eventsSince(this.lastSeq);
      if (this.stopped) return;
      for (const event of events) this.deliver({ type: "event", event });
      const view = await this.api.state();
      if (this.stopped) return;
      this.deliver({ type: "state", state: view });
    } catch {
      // server unreachable: let the stale watchdog speak
    }
  }

  private deliver(message: StreamMessage): void {
    if (message.type === "event") {
      if (message.event.seq <= this.lastSeq) return; // at most once
      this.lastSeq = message.event.seq;
      this.handlers.onEvent(message.event);
      return;
    }
    this.lastSeq = Math.max(this.lastSeq, message.state.last_event_seq);
    this.touch();
    this.handlers.onStatus(this.polling ? "polling" : "live");
    this.handlers.onState(message.state);
  }

  private touch(): void {
    if (this.staleTimer !== null) clearTimeout(this.staleTimer);
    if (this.stopped) return;
    const staleAfter = this.options.staleAfterMs ?? DEFAULT_STALE_MS;
    this.staleTimer = setTimeout(() => this.handlers.onStatus("stale"), staleAfter);
  }
}
