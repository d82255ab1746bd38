import { ApiClient } from "./api.js";
import {
  applyEvent, applyState, dismissAlert, initialModel, pushRejection,
  setConnection, setPending, setScheduleError, type ViewModel,
} from "./model.js";
import { createView } from "./render.js";
import { StateStream, type StreamOptions } from "./stream.js";

export interface AppOptions extends StreamOptions {
  baseUrl?: string;
}

export interface App {
  api: ApiClient;
  stream: StateStream;
  getModel(): ViewModel;
  stop(): void;
}

/** Wires API client, live stream, view model and DOM together. */
export function createApp(root: HTMLElement, options: AppOptions = {}): App {
  const api = new ApiClient(options.baseUrl ?? "");
  let model = initialModel();

  const commit = (next: ViewModel) => {
    model = next;
    view.update(model);
  };

  const view = createView(root, {
    onWaterStart: () => void water("start"),
    onWaterStop: () => void water("stop"),
    onArmToggle: () => void toggleArmed(),
    onAddSlot: (time) => void addSlot(time),
    onRemoveSlot: (id) => void removeSlot(id),
    onDismiss: (id) => commit(dismissAlert(model, id)),
  });

  async function water(action: "start" | "stop"): Promise<void> {
    commit(setPending(model, "water"));
    const result = await api.water(action);
    if (!result.ok) {
      // rejection bodies (409) carry the user-facing text; show it verbatim
      commit(pushRejection(model, result.error.message));
    }
  }

  async function toggleArmed(): Promise<void> {
    const armed = model.view?.security.armed ?? false;
    commit(setPending(model, "security"));
    const result = await api.setArmed(!armed);
    if (!result.ok) {
      commit(pushRejection(model, result.error.message));
    }
  }

  async function addSlot(time: string): Promise<void> {
    if (!time) {
      commit(setScheduleError(model, "pick a time first"));
      return;
    }
    commit(setPending(setScheduleError(model, null), "schedule"));
    const result = await api.addSlot(time);
    commit(result.ok ? setScheduleError(model, null)
                     : setScheduleError(model, result.error.message));
  }

  async function removeSlot(id: string): Promise<void> {
    commit(setPending(model, "schedule"));
    const result = await api.removeSlot(id);
    if (!result.ok) {
      commit(setScheduleError(model, result.error.message));
    }
  }

  const stream = new StateStream(api, {
    onState: (state) => commit(applyState(model, state)),
    onEvent: (event) => commit(applyEvent(model, event)),
    onStatus: (status) => commit(setConnection(model, status)),
  }, options);

  view.update(model);
  stream.start();

  return {
    api,
    stream,
    getModel: () => model,
    stop: () => stream.stop(),
  };
}
