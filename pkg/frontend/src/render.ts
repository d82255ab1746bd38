import { saturationMessage, type ViewModel } from "./model.js";
import type { StateView } from "./types.js";

export interface Handlers {
  onWaterStart(): void;
  onWaterStop(): void;
  onArmToggle(): void;
  onAddSlot(time: string): void;
  onRemoveSlot(id: string): void;
  onDismiss(id: number): void;
}

export interface View {
  update(model: ViewModel): void;
}

const CONNECTION_LABELS: Record<string, string> = {
  connecting: "connecting…",
  live: "live",
  polling: "polling",
  stale: "stale",
};

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, className?: string, testId?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (testId) node.dataset.testid = testId;
  return node;
}

function fmt(value: number, unit: string): string {
  return `${value.toFixed(1)}${unit}`;
}

/** Raw sensor counts scaled into a displayable sRGB swatch (display only). */
function swatchColor(color: { red: number; green: number; blue: number }): string {
  const scale = (v: number) => Math.min(255, Math.round((v / 2000) * 255));
  return `rgb(${scale(color.red)}, ${scale(color.green)}, ${scale(color.blue)})`;
}

function card(title: string): { root: HTMLElement; body: HTMLElement } {
  const root = el("section", "card");
  const heading = el("h2");
  heading.textContent = title;
  const body = el("div", "card-body");
  root.append(heading, body);
  return { root, body };
}

/** Builds the static skeleton once; update() only touches dynamic nodes. */
export function createView(root: HTMLElement, handlers: Handlers): View {
  root.textContent = "";
  root.classList.add("dashboard");

  const header = el("header");
  const title = el("h1");
  title.textContent = "verdant";
  const connection = el("span", "connection", "connection");
  header.append(title, connection);

  const alertFeed = el("ul", "alert-feed", "alert-feed");

  const grid = el("main", "grid");

  // soil moisture card
  const moisture = card("Soil moisture");
  const moistureValue = el("div", "big-value", "moisture-value");
  const moistureBand = el("div", "band", "moisture-band");
  const gauge = el("div", "gauge", "moisture-gauge");
  const gaugeFill = el("div", "gauge-fill", "moisture-gauge-fill");
  const markerLow = el("div", "gauge-marker", "marker-low");
  const markerMid = el("div", "gauge-marker", "marker-mid");
  gauge.append(gaugeFill, markerLow, markerMid);
  const sparkline = document.createElementNS("http://www.w3.org/2000/svg", "svg");
  sparkline.setAttribute("viewBox", "0 0 100 30");
  sparkline.setAttribute("preserveAspectRatio", "none");
  sparkline.classList.add("sparkline");
  sparkline.dataset.testid = "sparkline";
  const sparkLow = document.createElementNS("http://www.w3.org/2000/svg", "line");
  const sparkMid = document.createElementNS("http://www.w3.org/2000/svg", "line");
  for (const line of [sparkLow, sparkMid]) {
    line.setAttribute("x1", "0");
    line.setAttribute("x2", "100");
    line.classList.add("spark-band");
  }
  const sparkPath = document.createElementNS("http://www.w3.org/2000/svg", "polyline");
  sparkPath.classList.add("spark-path");
  sparkline.append(sparkLow, sparkMid, sparkPath);
  const valveIndicator = el("span", "indicator", "valve-indicator");
  const sessionInfo = el("span", "session-info", "session-info");
  const waterStart = el("button", "primary", "water-start");
  waterStart.textContent = "Water";
  waterStart.addEventListener("click", () => handlers.onWaterStart());
  const waterStop = el("button", "", "water-stop");
  waterStop.textContent = "Stop";
  waterStop.addEventListener("click", () => handlers.onWaterStop());
  const valveRow = el("div", "row");
  valveRow.append(valveIndicator, sessionInfo);
  const waterRow = el("div", "row");
  waterRow.append(waterStart, waterStop);
  moisture.body.append(moistureValue, moistureBand, gauge, sparkline, valveRow, waterRow);

  // health card
  const health = card("Plant health");
  const healthBadge = el("div", "badge", "health-badge");
  const verdicts = el("ul", "verdicts", "verdicts");
  const leafRow = el("div", "row");
  const leafSwatch = el("span", "swatch", "leaf-swatch");
  const leafCounts = el("span", "leaf-counts", "leaf-counts");
  leafRow.append(leafSwatch, leafCounts);
  health.body.append(healthBadge, verdicts, leafRow);

  // environment card
  const environment = card("Environment");
  const ambientTemp = el("div", "reading", "ambient-temp");
  const ambientHumidity = el("div", "reading", "ambient-humidity");
  const plantTemp = el("div", "reading", "plant-temp");
  const plantHumidity = el("div", "reading", "plant-humidity");
  environment.body.append(ambientTemp, ambientHumidity, plantTemp, plantHumidity);

  // security card
  const security = card("Security");
  const armedState = el("div", "badge", "armed-state");
  const armToggle = el("button", "", "arm-toggle");
  armToggle.addEventListener("click", () => handlers.onArmToggle());
  const buzzer = el("span", "indicator", "buzzer-indicator");
  const lights = el("span", "indicator", "lights-indicator");
  const motion = el("span", "indicator", "motion-indicator");
  const securityRow = el("div", "row");
  securityRow.append(buzzer, lights, motion);
  security.body.append(armedState, armToggle, securityRow);

  // schedule card
  const schedule = card("Watering schedule");
  const slotList = el("ul", "slot-list", "slot-list");
  const slotForm = el("div", "row");
  const slotTime = el("input", "", "slot-time");
  slotTime.type = "time";
  const slotAdd = el("button", "", "slot-add");
  slotAdd.textContent = "Add slot";
  slotAdd.addEventListener("click", () => handlers.onAddSlot(slotTime.value));
  const scheduleError = el("div", "error", "schedule-error");
  slotForm.append(slotTime, slotAdd);
  schedule.body.append(slotList, slotForm, scheduleError);

  grid.append(moisture.root, health.root, environment.root, security.root, schedule.root);
  root.append(header, alertFeed, grid);

  function renderAlerts(model: ViewModel): void {
    alertFeed.textContent = "";
    for (const alert of model.alerts) {
      const item = el("li", `alert alert-${alert.kind}`);
      item.dataset.alertId = String(alert.id);
      const text = el("span", "alert-text");
      text.textContent = alert.message;
      const stamp = el("span", "alert-time");
      stamp.textContent = `t=${alert.timestamp.toFixed(0)}s`;
      const dismiss = el("button", "dismiss");
      dismiss.textContent = "×";
      dismiss.setAttribute("aria-label", "dismiss");
      dismiss.addEventListener("click", () => handlers.onDismiss(alert.id));
      item.append(text, stamp, dismiss);
      alertFeed.append(item);
    }
  }

  function renderSlots(view: StateView): void {
    slotList.textContent = "";
    for (const slot of view.slots) {
      const item = el("li", "slot");
      const time = el("span");
      time.textContent = slot.time_of_day;
      const remove = el("button", "dismiss");
      remove.textContent = "remove";
      remove.dataset.slotId = slot.id;
      remove.addEventListener("click", () => handlers.onRemoveSlot(slot.id));
      item.append(time, remove);
      slotList.append(item);
    }
  }

  function renderSparkline(model: ViewModel, view: StateView): void {
    const history = model.moistureHistory;
    const y = (value: number) => 30 - (value / 100) * 30;
    sparkLow.setAttribute("y1", String(y(view.profile.moisture_low)));
    sparkLow.setAttribute("y2", String(y(view.profile.moisture_low)));
    sparkMid.setAttribute("y1", String(y(view.profile.moisture_mid)));
    sparkMid.setAttribute("y2", String(y(view.profile.moisture_mid)));
    if (history.length < 2) {
      sparkPath.setAttribute("points", "");
      return;
    }
    const step = 100 / (history.length - 1);
    sparkPath.setAttribute(
      "points",
      history.map((p, i) => `${(i * step).toFixed(2)},${y(p.value).toFixed(2)}`).join(" "),
    );
  }

  function update(model: ViewModel): void {
    connection.textContent = CONNECTION_LABELS[model.connection] ?? model.connection;
    connection.className = `connection connection-${model.connection}`;
    renderAlerts(model);

    const view = model.view;
    if (!view || !view.frame) return;
    const frame = view.frame;

    moistureValue.textContent = fmt(frame.soil_moisture, "%");
    moistureBand.textContent = view.moisture_band ?? "";
    gaugeFill.style.width = `${frame.soil_moisture}%`;
    markerLow.style.left = `${(view.profile.moisture_low / view.profile.moisture_high) * 100}%`;
    markerLow.title = `low ${view.profile.moisture_low}%`;
    markerMid.style.left = `${(view.profile.moisture_mid / view.profile.moisture_high) * 100}%`;
    markerMid.title = `mid ${view.profile.moisture_mid}%`;
    renderSparkline(model, view);

    valveIndicator.textContent = view.irrigation.valve_open ? "valve open" : "valve closed";
    valveIndicator.className =
      `indicator ${view.irrigation.valve_open ? "indicator-on" : "indicator-off"}`;
    sessionInfo.textContent = view.irrigation.session
      ? `${view.irrigation.session.kind} watering to ${view.irrigation.session.target_moisture}%`
      : "";

    const saturated = view.moisture_band === "saturated";
    waterStart.disabled = saturated || model.pending.water;
    const refusal = saturationMessage(view);
    if (saturated && refusal) {
      waterStart.title = refusal;
    } else {
      waterStart.removeAttribute("title");
    }
    waterStop.disabled = model.pending.water;

    if (view.health) {
      healthBadge.textContent =
        `${view.health.score}% — ${view.health.healthy ? "Healthy" : "Not healthy"}`;
      healthBadge.className = `badge ${view.health.healthy ? "badge-ok" : "badge-bad"}`;
      verdicts.textContent = "";
      for (const verdict of view.health.verdicts) {
        const chip = el("li", `chip ${verdict.ok ? "chip-ok" : "chip-bad"}`);
        chip.textContent = `${verdict.factor}: ${verdict.ok ? "ok" : "not ok"}`;
        verdicts.append(chip);
      }
    }
    leafSwatch.style.backgroundColor = swatchColor(frame.leaf_color);
    leafCounts.textContent =
      `R ${frame.leaf_color.red.toFixed(0)} · G ${frame.leaf_color.green.toFixed(0)}` +
      ` · B ${frame.leaf_color.blue.toFixed(0)}`;

    ambientTemp.textContent = `ambient ${fmt(frame.ambient_temp, " °C")}`;
    ambientHumidity.textContent = `ambient humidity ${fmt(frame.ambient_humidity, "%")}`;
    plantTemp.textContent = `plant ${fmt(frame.plant_temp, " °C")}`;
    plantHumidity.textContent = `plant humidity ${fmt(frame.plant_humidity, "%")}`;

    armedState.textContent = view.security.armed ? "armed" : "disarmed";
    armedState.className = `badge ${view.security.armed ? "badge-ok" : "badge-muted"}`;
    armToggle.textContent = view.security.armed ? "Disarm" : "Arm";
    armToggle.disabled = model.pending.security;
    buzzer.textContent = view.security.buzzer_on ? "buzzer on" : "buzzer off";
    buzzer.className = `indicator ${view.security.buzzer_on ? "indicator-on" : "indicator-off"}`;
    lights.textContent = view.security.lights_on ? "lights on" : "lights off";
    lights.className = `indicator ${view.security.lights_on ? "indicator-on" : "indicator-off"}`;
    motion.textContent = frame.motion ? "motion!" : "no motion";
    motion.className = `indicator ${frame.motion ? "indicator-on" : "indicator-off"}`;

    renderSlots(view);
    slotAdd.disabled = model.pending.schedule;
    scheduleError.textContent = model.scheduleError ?? "";
  }

  return { update };
}
