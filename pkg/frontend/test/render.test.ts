import { beforeEach, describe, expect, it, vi } from "vitest";

import { applyEvent, applyState, initialModel, setConnection } from "../src/model.js";
import { createView, type Handlers } from "../src/render.js";
import { apiEvent, SATURATION_TEXT, saturatedView, stateView } from "./fixtures.js";

function handlers(): Handlers {
  return {
    onWaterStart: vi.fn(),
    onWaterStop: vi.fn(),
    onArmToggle: vi.fn(),
    onAddSlot: vi.fn(),
    onRemoveSlot: vi.fn(),
    onDismiss: vi.fn(),
  };
}

function q<T extends Element>(root: HTMLElement, testId: string): T {
  const node = root.querySelector(`[data-testid="${testId}"]`);
  if (!node) throw new Error(`missing [data-testid=${testId}]`);
  return node as T;
}

let root: HTMLElement;

beforeEach(() => {
  document.body.innerHTML = "";
  root = document.createElement("div");
  document.body.append(root);
});

describe("rendering", () => {
  it("renders the healthy badge from the API score", () => {
    const view = createView(root, handlers());
    view.update(applyState(initialModel(), stateView()));
    expect(q(root, "health-badge").textContent).toBe("90% — Healthy");
  });

  it("renders an unhealthy badge verbatim from the API", () => {
    const view = createView(root, handlers());
    const state = stateView();
    state.health = {
      verdicts: [
        { factor: "temperature", ok: false },
        { factor: "humidity", ok: true },
        { factor: "color", ok: false },
      ],
      score: 30,
      healthy: false,
    };
    view.update(applyState(initialModel(), state));
    expect(q(root, "health-badge").textContent).toBe("30% — Not healthy");
  });

  it("never recomputes health client-side", () => {
    // deliberately inconsistent payload: the badge must echo the API values
    const view = createView(root, handlers());
    const state = stateView();
    state.health!.score = 60; // contradicts the three ok verdicts
    state.health!.healthy = false;
    view.update(applyState(initialModel(), state));
    expect(q(root, "health-badge").textContent).toBe("60% — Not healthy");
  });

  it("disables the water button when saturated, with the refusal tooltip", () => {
    const view = createView(root, handlers());
    view.update(applyState(initialModel(), saturatedView()));
    const button = q<HTMLButtonElement>(root, "water-start");
    expect(button.disabled).toBe(true);
    expect(button.title).toBe(SATURATION_TEXT);
  });

  it("keeps the water button enabled in the adequate band", () => {
    const view = createView(root, handlers());
    view.update(applyState(initialModel(), stateView()));
    const button = q<HTMLButtonElement>(root, "water-start");
    expect(button.disabled).toBe(false);
    expect(button.title).toBe("");
  });

  it("places the band markers from the live profile", () => {
    const view = createView(root, handlers());
    view.update(applyState(initialModel(), stateView()));
    expect(q<HTMLElement>(root, "marker-low").style.left).toBe("40%");
    expect(q<HTMLElement>(root, "marker-mid").style.left).toBe("70%");
  });

  it("shows valve state and session details", () => {
    const view = createView(root, handlers());
    const state = stateView();
    state.irrigation = {
      valve_open: true,
      session: { kind: "manual", target_moisture: 70, started_at: 21600, max_duration_s: 900 },
      saturation_alert_active: false,
    };
    view.update(applyState(initialModel(), state));
    expect(q(root, "valve-indicator").textContent).toBe("valve open");
    expect(q(root, "session-info").textContent).toContain("manual watering to 70%");
  });

  it("renders alert banners newest first and dismisses locally", () => {
    const view = createView(root, handlers());
    let model = applyState(initialModel(), stateView());
    model = applyEvent(model, apiEvent({ seq: 5, kind: "motion_detected" }));
    model = applyEvent(model, apiEvent({
      seq: 6, kind: "ambient_alert", payload: { message: "surrounding humidity is low" },
    }));
    view.update(model);
    const texts = [...root.querySelectorAll(".alert-text")].map((n) => n.textContent);
    expect(texts).toEqual(["surrounding humidity is low", "motion detected"]);
  });

  it("invokes handlers from the control buttons", () => {
    const h = handlers();
    const view = createView(root, h);
    view.update(applyState(initialModel(), stateView()));
    q<HTMLButtonElement>(root, "water-start").click();
    expect(h.onWaterStart).toHaveBeenCalledTimes(1);
    q<HTMLButtonElement>(root, "arm-toggle").click();
    expect(h.onArmToggle).toHaveBeenCalledTimes(1);
  });

  it("renders slots with working remove buttons", () => {
    const h = handlers();
    const view = createView(root, h);
    const state = stateView({
      slots: [{ id: "slot-0630", time_of_day: "06:30", enabled: true }],
    });
    view.update(applyState(initialModel(), state));
    const item = root.querySelector(".slot");
    expect(item?.textContent).toContain("06:30");
    item?.querySelector("button")?.click();
    expect(h.onRemoveSlot).toHaveBeenCalledWith("slot-0630");
  });

  it("shows the connection pill states", () => {
    const view = createView(root, handlers());
    view.update(setConnection(initialModel(), "stale"));
    expect(q(root, "connection").textContent).toBe("stale");
    view.update(setConnection(initialModel(), "live"));
    expect(q(root, "connection").textContent).toBe("live");
  });

  it("renders environment readings from the frame", () => {
    const view = createView(root, handlers());
    view.update(applyState(initialModel(), stateView()));
    expect(q(root, "ambient-temp").textContent).toBe("ambient 25.0 °C");
    expect(q(root, "plant-humidity").textContent).toBe("plant humidity 70.0%");
  });

  it("renders the leaf swatch and raw counts", () => {
    const view = createView(root, handlers());
    view.update(applyState(initialModel(), stateView()));
    expect(q(root, "leaf-counts").textContent).toBe("R 120 · G 900 · B 700");
    expect(q<HTMLElement>(root, "leaf-swatch").style.backgroundColor).not.toBe("");
  });
});
