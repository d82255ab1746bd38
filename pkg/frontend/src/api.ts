import type { ApiError, ApiEvent, SecurityView, Slot, StateView } from "./types.js";

export type CommandResult<T> =
  | { ok: true; value: T }
  | { ok: false; error: ApiError };

async function asError(response: Response): Promise<ApiError> {
  try {
    const body = (await response.json()) as Partial<ApiError>;
    return {
      http_status: body.http_status ?? response.status,
      code: body.code ?? "error",
      message: body.message ?? response.statusText,
    };
  } catch {
    return { http_status: response.status, code: "error", message: response.statusText };
  }
}

/** Thin typed wrapper over the telemetry endpoints. */
export class ApiClient {
  constructor(readonly baseUrl: string = "") {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  async state(): Promise<StateView> {
    const response = await fetch(this.url("/api/state"));
    if (!response.ok) throw new Error(`GET /api/state failed: ${response.status}`);
    return (await response.json()) as StateView;
  }

  async eventsSince(seq: number): Promise<ApiEvent[]> {
    const response = await fetch(this.url(`/api/events?since=${seq}`));
    if (!response.ok) throw new Error(`GET /api/events failed: ${response.status}`);
    return (await response.json()) as ApiEvent[];
  }

  async water(action: "start" | "stop"): Promise<CommandResult<unknown>> {
    const response = await fetch(this.url("/api/water"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ action }),
    });
    if (!response.ok) return { ok: false, error: await asError(response) };
    return { ok: true, value: await response.json() };
  }

  async setArmed(armed: boolean): Promise<CommandResult<SecurityView>> {
    const response = await fetch(this.url("/api/security"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ armed }),
    });
    if (!response.ok) return { ok: false, error: await asError(response) };
    return { ok: true, value: (await response.json()) as SecurityView };
  }

  async schedules(): Promise<Slot[]> {
    const response = await fetch(this.url("/api/schedules"));
    if (!response.ok) throw new Error(`GET /api/schedules failed: ${response.status}`);
    return (await response.json()) as Slot[];
  }

  async addSlot(time: string): Promise<CommandResult<Slot>> {
    const response = await fetch(this.url("/api/schedules"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ time }),
    });
    if (!response.ok) return { ok: false, error: await asError(response) };
    return { ok: true, value: (await response.json()) as Slot };
  }

  async removeSlot(id: string): Promise<CommandResult<null>> {
    const response = await fetch(this.url(`/api/schedules/${encodeURIComponent(id)}`), {
      method: "DELETE",
    });
    if (!response.ok) return { ok: false, error: await asError(response) };
    return { ok: true, value: null };
  }
}
