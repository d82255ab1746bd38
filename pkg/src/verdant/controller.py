"""Per-tick control loop and command handling.

Each tick runs, in a fixed order: health assessment, ambient alert
checks, the irrigation step, then the security step, and returns the
actuator commands implied by the new state. Every externally visible
occurrence is appended to a gap-free event log. Commands (manual
watering, arm/disarm, schedule edits) are applied between ticks by
whoever owns the controller; the controller itself is single-threaded.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from . import irrigation, security
from .ambient import AmbientReading, check_ambient
from .events import Event, EventKind
from .health import HealthAssessment, assess_health
from .irrigation import (IrrigationConfig, IrrigationState, ManualAction,
                         classify_moisture)
from .security import SecurityConfig, SecurityState
from .sensors import SensorFrame
from .thresholds import ThresholdProfile, default_profile


class CommandKind(str, Enum):
    WATER_START = "water_start"
    WATER_STOP = "water_stop"
    ARM = "arm"
    DISARM = "disarm"
    ADD_SLOT = "add_slot"
    REMOVE_SLOT = "remove_slot"


@dataclass(frozen=True)
class ActuatorCommands:
    valve_open: bool
    buzzer_on: bool
    lights_on: bool

    def to_dict(self) -> dict:
        return {"valve_open": self.valve_open, "buzzer_on": self.buzzer_on,
                "lights_on": self.lights_on}


@dataclass(frozen=True)
class CommandOutcome:
    accepted: bool
    code: str     # ok | noop | saturated | already_watering | duplicate_slot | unknown_slot | no_data
    message: str
    payload: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"accepted": self.accepted, "code": self.code,
                "message": self.message, **self.payload}


class Controller:
    """Owns the composed module states and the append-only event log."""

    def __init__(self, profile: ThresholdProfile | None = None,
                 irrigation_config: IrrigationConfig | None = None,
                 security_config: SecurityConfig | None = None,
                 clock: float = 0.0, first_seq: int = 1):
        self.profile = profile or default_profile()
        self.irrigation_config = irrigation_config or irrigation.DEFAULT_CONFIG
        self.security_config = security_config or security.DEFAULT_CONFIG
        self.irrigation = IrrigationState()
        self.security = SecurityState()
        self.last_health: HealthAssessment | None = None
        self.last_frame: SensorFrame | None = None
        self.active_ambient: tuple[str, ...] = ()
        self._events: list[Event] = []
        self._seq = first_seq - 1
        self._clock = clock

    # -- event log ---------------------------------------------------------

    @property
    def event_log(self) -> tuple[Event, ...]:
        return tuple(self._events)

    @property
    def last_seq(self) -> int:
        return self._seq

    def events_since(self, seq: int) -> list[Event]:
        """Events with sequence numbers greater than seq, in order."""
        return [e for e in self._events if e.seq > seq]

    def _emit(self, kind: EventKind, payload: dict, clock: float) -> Event:
        self._seq += 1
        event = Event(seq=self._seq, timestamp=clock, kind=kind, payload=payload)
        self._events.append(event)
        return event

    # -- per-tick pipeline --------------------------------------------------

    def tick(self, frame: SensorFrame, clock: float) -> ActuatorCommands:
        """Process one sensor frame. Invalid frames are rejected before any
        state changes."""
        frame.validate()
        if clock < self._clock:
            raise ValueError(f"clock moved backwards: {clock} < {self._clock}")

        health = assess_health(frame.plant_temp, frame.plant_humidity,
                               frame.leaf_color, self.profile)
        ambient_alerts = check_ambient(
            AmbientReading(frame.ambient_temp, frame.ambient_humidity, clock),
            self.profile)
        irr_state, irr_events = irrigation.step_decision(
            self.irrigation, frame.soil_moisture, clock, self.profile,
            self.irrigation_config)
        sec_state, sec_events = security.on_motion(
            self.security, frame.motion, clock, self.security_config)

        # All transitions computed; commit and log.
        if self.last_health is None or health.score != self.last_health.score:
            self._emit(EventKind.HEALTH_CHANGED,
                       {"score": health.score, "healthy": health.healthy}, clock)
        previously_active = set(self.active_ambient)
        for alert in ambient_alerts:
            if alert.message not in previously_active:
                self._emit(EventKind.AMBIENT_ALERT, alert.to_dict(), clock)
        for kind, payload in irr_events:
            self._emit(kind, payload, clock)
        for kind, payload in sec_events:
            self._emit(kind, payload, clock)

        self.last_health = health
        self.active_ambient = tuple(a.message for a in ambient_alerts)
        self.irrigation = irr_state
        self.security = sec_state
        self.last_frame = frame
        self._clock = clock
        return ActuatorCommands(valve_open=irr_state.valve_open,
                                buzzer_on=sec_state.buzzer_on,
                                lights_on=sec_state.lights_on)

    # -- commands ------------------------------------------------------------

    def handle_command(self, kind: CommandKind, args: dict | None = None,
                       clock: float | None = None) -> CommandOutcome:
        """Apply one user command between ticks. Rejections come back as
        outcomes (plus a ManualRejected event), not exceptions."""
        kind = CommandKind(kind)
        args = args or {}
        clock = self._clock if clock is None else clock

        if kind in (CommandKind.WATER_START, CommandKind.WATER_STOP):
            return self._handle_water(kind, clock)
        if kind in (CommandKind.ARM, CommandKind.DISARM):
            sec_state, events = security.set_armed(
                self.security, kind is CommandKind.ARM, clock)
            for ev_kind, payload in events:
                self._emit(ev_kind, payload, clock)
            self.security = sec_state
            return CommandOutcome(True, "ok", "armed" if sec_state.armed else "disarmed",
                                  {"security": sec_state.to_dict()})
        if kind is CommandKind.ADD_SLOT:
            return self._handle_add_slot(args, clock)
        if kind is CommandKind.REMOVE_SLOT:
            return self._handle_remove_slot(args, clock)
        raise ValueError(f"unknown command: {kind!r}")

    def _reject(self, command: CommandKind, code: str, message: str,
                clock: float) -> CommandOutcome:
        self._emit(EventKind.MANUAL_REJECTED,
                   {"command": command.value, "message": message}, clock)
        return CommandOutcome(False, code, message)

    def _handle_water(self, kind: CommandKind, clock: float) -> CommandOutcome:
        if self.last_frame is None:
            return self._reject(kind, "no_data", "no sensor data yet", clock)
        moisture = self.last_frame.soil_moisture
        action = ManualAction.START if kind is CommandKind.WATER_START else ManualAction.STOP
        irr_state, outcome, events = irrigation.request_manual(
            self.irrigation, action, moisture, clock, self.profile,
            self.irrigation_config)
        if outcome.status == "rejected":
            code = ("already_watering" if outcome.message == "already watering"
                    else "saturated")
            return self._reject(kind, code, outcome.message, clock)
        for ev_kind, payload in events:
            self._emit(ev_kind, payload, clock)
        self.irrigation = irr_state
        return CommandOutcome(True, outcome.status if outcome.status == "noop" else "ok",
                              outcome.message)

    def _handle_add_slot(self, args: dict, clock: float) -> CommandOutcome:
        time_of_day = args.get("time")
        if time_of_day is None:
            raise ValueError("add_slot requires a 'time' argument")
        try:
            irr_state, slot = irrigation.add_slot(self.irrigation, time_of_day, clock)
        except irrigation.DuplicateSlotError as exc:
            return self._reject(CommandKind.ADD_SLOT, "duplicate_slot", str(exc), clock)
        self.irrigation = irr_state
        return CommandOutcome(True, "ok", "slot added", {"slot": slot.to_dict()})

    def _handle_remove_slot(self, args: dict, clock: float) -> CommandOutcome:
        slot_id = args.get("id")
        if slot_id is None:
            raise ValueError("remove_slot requires an 'id' argument")
        try:
            irr_state = irrigation.remove_slot(self.irrigation, slot_id)
        except irrigation.UnknownSlotError as exc:
            return self._reject(CommandKind.REMOVE_SLOT, "unknown_slot", str(exc), clock)
        self.irrigation = irr_state
        return CommandOutcome(True, "ok", "slot removed")

    # -- read model ------------------------------------------------------------

    def snapshot(self) -> dict:
        """Immutable view of everything a client can observe."""
        frame = self.last_frame
        band = (classify_moisture(frame.soil_moisture, self.profile).value
                if frame is not None else None)
        active_alerts = list(self.active_ambient)
        if self.irrigation.saturation_alert_active:
            active_alerts.append(irrigation.SATURATION_ALERT_TEXT)
        return {
            "timestamp": self._clock,
            "frame": frame.to_dict() if frame is not None else None,
            "health": self.last_health.to_dict() if self.last_health is not None else None,
            "moisture_band": band,
            "irrigation": self.irrigation.to_dict(),
            "security": self.security.to_dict(),
            "active_alerts": active_alerts,
            "slots": [s.to_dict() for s in self.irrigation.slots],
            "profile": {
                "moisture_low": self.profile.moisture_low,
                "moisture_mid": self.profile.moisture_mid,
                "moisture_high": self.profile.moisture_high,
            },
            "last_event_seq": self._seq,
        }
