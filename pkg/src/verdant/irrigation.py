"""Watering state machine.

Moisture classifies into three bands: Dry below the low threshold,
Adequate between low and mid (both boundaries included), Saturated above
mid. Automatic watering starts in the Dry band and stops a small
hysteresis above the low threshold so the valve does not chatter at the
boundary. Schedule slots fire once per day at the first tick at or past
their time and only water when moisture is under the mid threshold.
Manual watering is refused outright while the soil sits above mid; the
refusal message doubles as the saturation alert text.

All transitions are pure functions over an explicit state value; the
controller owns the single live instance.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Mapping

from .events import Emission, EventKind
from .simclock import day_index, format_time_of_day, parse_time_of_day, seconds_of_day
from .thresholds import ThresholdProfile

SATURATION_ALERT_TEXT = ("Do not water the plant until the water level comes "
                         "between a minimum and average level")


class MoistureBand(str, Enum):
    DRY = "dry"
    ADEQUATE = "adequate"
    SATURATED = "saturated"


class SessionKind(str, Enum):
    AUTO = "auto"
    SCHEDULED = "scheduled"
    MANUAL = "manual"


class ManualAction(str, Enum):
    START = "start"
    STOP = "stop"


class ScheduleError(ValueError):
    pass


class DuplicateSlotError(ScheduleError):
    pass


class UnknownSlotError(ScheduleError):
    pass


@dataclass(frozen=True)
class IrrigationConfig:
    """Tunables that are not calibration thresholds."""

    auto_hysteresis: float = 5.0        # percent above moisture_low where auto watering stops
    session_max_minutes: float = 15.0   # fail-safe cap on any single session

    @property
    def session_max_seconds(self) -> float:
        return self.session_max_minutes * 60.0


DEFAULT_CONFIG = IrrigationConfig()


@dataclass(frozen=True)
class ScheduleSlot:
    id: str
    time_of_day: str  # "HH:MM"
    enabled: bool = True

    @property
    def seconds(self) -> int:
        return parse_time_of_day(self.time_of_day)

    def to_dict(self) -> dict:
        return {"id": self.id, "time_of_day": self.time_of_day, "enabled": self.enabled}


@dataclass(frozen=True)
class WateringSession:
    kind: SessionKind
    target_moisture: float
    started_at: float
    max_duration_s: float

    def __post_init__(self):
        if self.max_duration_s <= 0:
            raise ValueError("session max duration must be positive")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "target_moisture": self.target_moisture,
            "started_at": self.started_at,
            "max_duration_s": self.max_duration_s,
        }


@dataclass(frozen=True)
class ManualOutcome:
    status: str   # "accepted" | "rejected" | "noop"
    message: str

    @property
    def accepted(self) -> bool:
        return self.status == "accepted"


@dataclass(frozen=True)
class IrrigationState:
    valve_open: bool = False
    session: WateringSession | None = None
    slots: tuple[ScheduleSlot, ...] = ()
    fired: Mapping[str, int] = field(default_factory=dict)  # slot id -> last day fired
    saturation_alert_active: bool = False

    def __post_init__(self):
        if self.valve_open != (self.session is not None):
            raise ValueError("valve_open must mirror session presence")

    def to_dict(self) -> dict:
        return {
            "valve_open": self.valve_open,
            "session": self.session.to_dict() if self.session else None,
            "saturation_alert_active": self.saturation_alert_active,
        }


def classify_moisture(m: float, profile: ThresholdProfile) -> MoistureBand:
    """Band for a moisture percentage; low and mid belong to Adequate."""
    if not 0 <= m <= 100:
        raise ValueError(f"moisture must be within [0, 100], got {m!r}")
    if m < profile.moisture_low:
        return MoistureBand.DRY
    if m <= profile.moisture_mid:
        return MoistureBand.ADEQUATE
    return MoistureBand.SATURATED


def _session_end_reason(session: WateringSession, m: float, clock: float) -> str | None:
    if m >= session.target_moisture:
        return "target_reached"
    if clock - session.started_at >= session.max_duration_s:
        return "max_duration"
    return None


def _close_events(session: WateringSession, reason: str, m: float) -> list[Emission]:
    return [
        (EventKind.VALVE_CLOSED, {"reason": reason}),
        (EventKind.WATERING_ENDED,
         {"kind": session.kind.value, "reason": reason, "moisture": m}),
    ]


def step_decision(state: IrrigationState, m: float, clock: float,
                  profile: ThresholdProfile,
                  config: IrrigationConfig = DEFAULT_CONFIG,
                  ) -> tuple[IrrigationState, list[Emission]]:
    """One control step: end a finished session, maintain the saturation
    latch, then start an automatic or scheduled session if warranted."""
    events: list[Emission] = []
    session = state.session

    if session is not None:
        reason = _session_end_reason(session, m, clock)
        if reason:
            events.extend(_close_events(session, reason, m))
            session = None

    band = classify_moisture(m, profile)
    saturated = state.saturation_alert_active
    if band is MoistureBand.SATURATED and not saturated:
        saturated = True
        events.append((EventKind.SATURATION_ALERT,
                       {"message": SATURATION_ALERT_TEXT, "moisture": m}))
    elif m <= profile.moisture_mid:
        saturated = False

    # Consume every slot whose time has come, once per day, whether or not
    # it results in watering (a slot firing during a session is skipped).
    today = day_index(clock)
    tod = seconds_of_day(clock)
    due = [s for s in state.slots
           if s.enabled and tod >= s.seconds and state.fired.get(s.id) != today]
    fired = state.fired
    if due:
        fired = dict(fired)
        for slot in due:
            fired[slot.id] = today

    if session is None:
        if band is MoistureBand.DRY:
            target = min(profile.moisture_low + config.auto_hysteresis, profile.moisture_high)
            session = WateringSession(SessionKind.AUTO, target, clock, config.session_max_seconds)
            events.append((EventKind.VALVE_OPENED,
                           {"kind": session.kind.value, "target": target}))
        elif due and m < profile.moisture_mid:
            session = WateringSession(SessionKind.SCHEDULED, profile.moisture_mid, clock,
                                      config.session_max_seconds)
            events.append((EventKind.VALVE_OPENED,
                           {"kind": session.kind.value, "target": session.target_moisture,
                            "slot_id": due[0].id}))

    new_state = replace(state, valve_open=session is not None, session=session,
                        fired=fired, saturation_alert_active=saturated)
    return new_state, events


def request_manual(state: IrrigationState, action: ManualAction, m: float, clock: float,
                   profile: ThresholdProfile,
                   config: IrrigationConfig = DEFAULT_CONFIG,
                   ) -> tuple[IrrigationState, ManualOutcome, list[Emission]]:
    """Start or stop a manual watering session.

    Start is refused while another session runs or while moisture sits above
    the mid threshold; stop only ever ends a manual session.
    """
    if action is ManualAction.START:
        if state.session is not None:
            return state, ManualOutcome("rejected", "already watering"), []
        if m > profile.moisture_mid:
            return state, ManualOutcome("rejected", SATURATION_ALERT_TEXT), []
        session = WateringSession(SessionKind.MANUAL, profile.moisture_mid, clock,
                                  config.session_max_seconds)
        events: list[Emission] = [(EventKind.VALVE_OPENED,
                                   {"kind": session.kind.value,
                                    "target": session.target_moisture})]
        return (replace(state, valve_open=True, session=session),
                ManualOutcome("accepted", "manual watering started"), events)

    session = state.session
    if session is not None and session.kind is SessionKind.MANUAL:
        events = _close_events(session, "manual_stop", m)
        return (replace(state, valve_open=False, session=None),
                ManualOutcome("accepted", "manual watering stopped"), events)
    return state, ManualOutcome("noop", "no manual watering session active"), []


def _slot_id(time_of_day: str) -> str:
    return "slot-" + time_of_day.replace(":", "")


def add_slot(state: IrrigationState, time_of_day: str,
             clock: float | None = None) -> tuple[IrrigationState, ScheduleSlot]:
    """Add a daily slot. A slot added after its time has already passed
    today first fires tomorrow."""
    normalized = format_time_of_day(parse_time_of_day(time_of_day))
    if any(s.time_of_day == normalized for s in state.slots):
        raise DuplicateSlotError(f"slot at {normalized} already exists")
    slot = ScheduleSlot(id=_slot_id(normalized), time_of_day=normalized)
    fired = dict(state.fired)
    if clock is not None and seconds_of_day(clock) >= slot.seconds:
        fired[slot.id] = day_index(clock)
    return replace(state, slots=state.slots + (slot,), fired=fired), slot


def remove_slot(state: IrrigationState, slot_id: str) -> IrrigationState:
    remaining = tuple(s for s in state.slots if s.id != slot_id)
    if len(remaining) == len(state.slots):
        raise UnknownSlotError(f"no slot with id {slot_id!r}")
    fired = {k: v for k, v in state.fired.items() if k != slot_id}
    return replace(state, slots=remaining, fired=fired)


def list_slots(state: IrrigationState) -> tuple[ScheduleSlot, ...]:
    return state.slots
