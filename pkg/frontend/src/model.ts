import type { ApiEvent, ConnectionStatus, StateView } from "./types.js";

// Event kinds surfaced as dismissible banners, newest first.
const BANNER_KINDS = new Set(["motion_detected", "saturation_alert", "ambient_alert"]);

const MAX_ALERTS = 20;
const MAX_HISTORY = 300;

export interface AlertItem {
  /** Event seq, or a negative synthetic id for local command rejections. */
  id: number;
  timestamp: number;
  kind: string;
  message: string;
}

export interface PendingFlags {
  water: boolean;
  security: boolean;
  schedule: boolean;
}

export interface ViewModel {
  view: StateView | null;
  connection: ConnectionStatus;
  pending: PendingFlags;
  alerts: AlertItem[];
  moistureHistory: { t: number; value: number }[];
  scheduleError: string | null;
}

export function initialModel(): ViewModel {
  return {
    view: null,
    connection: "connecting",
    pending: { water: false, security: false, schedule: false },
    alerts: [],
    moistureHistory: [],
    scheduleError: null,
  };
}

/** A fresh server view reconciles every optimistic pending flag. */
export function applyState(model: ViewModel, view: StateView): ViewModel {
  const history = model.moistureHistory.slice(-(MAX_HISTORY - 1));
  if (view.frame) {
    history.push({ t: view.frame.timestamp, value: view.frame.soil_moisture });
  }
  return {
    ...model,
    view,
    pending: { water: false, security: false, schedule: false },
    moistureHistory: history,
  };
}

function bannerText(event: ApiEvent): string {
  const message = event.payload["message"];
  if (typeof message === "string") return message;
  if (event.kind === "motion_detected") return "motion detected";
  return event.kind.replaceAll("_", " ");
}

export function applyEvent(model: ViewModel, event: ApiEvent): ViewModel {
  if (!BANNER_KINDS.has(event.kind)) return model;
  const item: AlertItem = {
    id: event.seq,
    timestamp: event.timestamp,
    kind: event.kind,
    message: bannerText(event),
  };
  return { ...model, alerts: [item, ...model.alerts].slice(0, MAX_ALERTS) };
}

let syntheticId = 0;

/** Command rejections (e.g. HTTP 409 bodies) shown verbatim as banners. */
export function pushRejection(model: ViewModel, message: string): ViewModel {
  syntheticId -= 1;
  const item: AlertItem = {
    id: syntheticId,
    timestamp: model.view?.timestamp ?? 0,
    kind: "command_rejected",
    message,
  };
  return { ...model, alerts: [item, ...model.alerts].slice(0, MAX_ALERTS) };
}

/** Dismissal is purely local; the server keeps its own log. */
export function dismissAlert(model: ViewModel, id: number): ViewModel {
  return { ...model, alerts: model.alerts.filter((a) => a.id !== id) };
}

export function setConnection(model: ViewModel, status: ConnectionStatus): ViewModel {
  return { ...model, connection: status };
}

export function setPending(model: ViewModel, flag: keyof PendingFlags): ViewModel {
  return { ...model, pending: { ...model.pending, [flag]: true } };
}

export function setScheduleError(model: ViewModel, message: string | null): ViewModel {
  return { ...model, scheduleError: message };
}

/**
 * The saturation refusal text as received from the service (last entry of
 * active_alerts while the guard is latched); used verbatim as the water
 * button tooltip. Never composed client-side.
 */
export function saturationMessage(view: StateView): string | null {
  if (!view.irrigation.saturation_alert_active) return null;
  return view.active_alerts[view.active_alerts.length - 1] ?? null;
}
