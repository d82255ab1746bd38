import type { ApiEvent, StateView } from "../src/types.js";

export function stateView(overrides: Partial<StateView> = {}): StateView {
  return {
    timestamp: 21600,
    frame: {
      timestamp: 21600,
      soil_moisture: 50,
      plant_temp: 25,
      plant_humidity: 70,
      ambient_temp: 25,
      ambient_humidity: 60,
      leaf_color: { red: 120, green: 900, blue: 700 },
      motion: false,
    },
    health: {
      verdicts: [
        { factor: "temperature", ok: true },
        { factor: "humidity", ok: true },
        { factor: "color", ok: true },
      ],
      score: 90,
      healthy: true,
    },
    moisture_band: "adequate",
    irrigation: { valve_open: false, session: null, saturation_alert_active: false },
    security: { armed: false, buzzer_on: false, lights_on: false, deter_until: null },
    active_alerts: [],
    slots: [],
    profile: { moisture_low: 40, moisture_mid: 70, moisture_high: 100 },
    last_event_seq: 1,
    ...overrides,
  };
}

export function apiEvent(overrides: Partial<ApiEvent> = {}): ApiEvent {
  return { seq: 1, timestamp: 21600, kind: "motion_detected", payload: {}, ...overrides };
}

export const SATURATION_TEXT =
  "Do not water the plant until the water level comes between a minimum and average level";

export function saturatedView(): StateView {
  const view = stateView({ moisture_band: "saturated", active_alerts: [SATURATION_TEXT] });
  view.frame!.soil_moisture = 85;
  view.irrigation.saturation_alert_active = true;
  return view;
}
