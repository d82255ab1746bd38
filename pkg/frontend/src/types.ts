// Wire types mirroring the telemetry service JSON. Field names match the
// API exactly; the dashboard never derives its own health or bands.

export interface RgbColor {
  red: number;
  green: number;
  blue: number;
}

export interface Frame {
  timestamp: number;
  soil_moisture: number;
  plant_temp: number;
  plant_humidity: number;
  ambient_temp: number;
  ambient_humidity: number;
  leaf_color: RgbColor;
  motion: boolean;
}

export interface FactorVerdict {
  factor: string;
  ok: boolean;
}

export interface Health {
  verdicts: FactorVerdict[];
  score: number;
  healthy: boolean;
}

export interface Session {
  kind: string;
  target_moisture: number;
  started_at: number;
  max_duration_s: number;
}

export interface IrrigationView {
  valve_open: boolean;
  session: Session | null;
  saturation_alert_active: boolean;
}

export interface SecurityView {
  armed: boolean;
  buzzer_on: boolean;
  lights_on: boolean;
  deter_until: number | null;
}

export interface Slot {
  id: string;
  time_of_day: string;
  enabled: boolean;
}

export interface ProfileView {
  moisture_low: number;
  moisture_mid: number;
  moisture_high: number;
}

export interface StateView {
  timestamp: number;
  frame: Frame | null;
  health: Health | null;
  moisture_band: string | null;
  irrigation: IrrigationView;
  security: SecurityView;
  active_alerts: string[];
  slots: Slot[];
  profile: ProfileView;
  last_event_seq: number;
}

export interface ApiEvent {
  seq: number;
  timestamp: number;
  kind: string;
  payload: Record<string, unknown>;
}

export interface ApiError {
  http_status: number;
  code: string;
  message: string;
}

export type StreamMessage =
  | { type: "state"; state: StateView }
  | { type: "event"; event: ApiEvent };

export type ConnectionStatus = "connecting" | "live" | "polling" | "stale";
