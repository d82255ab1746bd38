"""Motion deterrence: buzzer and lights behind an arm/disarm gate.

Buzzer and lights always actuate together. While armed, any detected
motion turns them on and (re)starts a hold timer; they switch off at the
first motion-free tick at or past the hold deadline. A MotionDetected
event is emitted once per detection edge, not per tick of continuous
motion. Disarming silences everything immediately.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .events import Emission, EventKind


@dataclass(frozen=True)
class SecurityConfig:
    deter_hold_seconds: float = 30.0


DEFAULT_CONFIG = SecurityConfig()


@dataclass(frozen=True)
class SecurityState:
    armed: bool = False
    buzzer_on: bool = False
    lights_on: bool = False
    deter_until: float | None = None
    last_motion: bool = False  # previous tick's detector output, for edge detection

    def __post_init__(self):
        if self.buzzer_on != self.lights_on:
            raise ValueError("buzzer and lights must actuate together")
        if self.buzzer_on and not self.armed:
            raise ValueError("deterrence cannot run while disarmed")

    def to_dict(self) -> dict:
        return {
            "armed": self.armed,
            "buzzer_on": self.buzzer_on,
            "lights_on": self.lights_on,
            "deter_until": self.deter_until,
        }


def on_motion(state: SecurityState, detected: bool, clock: float,
              config: SecurityConfig = DEFAULT_CONFIG,
              ) -> tuple[SecurityState, list[Emission]]:
    """Advance the deterrence machine by one tick of detector output."""
    events: list[Emission] = []
    if not state.armed:
        new_state = replace(state, buzzer_on=False, lights_on=False,
                            deter_until=None, last_motion=detected)
        return new_state, events

    active = state.buzzer_on
    deter_until = state.deter_until
    if detected:
        if not state.last_motion:
            events.append((EventKind.MOTION_DETECTED, {}))
        active = True
        deter_until = clock + config.deter_hold_seconds
    elif deter_until is not None and clock >= deter_until:
        active = False
        deter_until = None

    new_state = replace(state, buzzer_on=active, lights_on=active,
                        deter_until=deter_until, last_motion=detected)
    return new_state, events


def set_armed(state: SecurityState, armed: bool, clock: float,
              ) -> tuple[SecurityState, list[Emission]]:
    """Arm or disarm; emits an event only when the value actually changes."""
    if armed == state.armed:
        return state, []
    if armed:
        return replace(state, armed=True), [(EventKind.ARMED, {})]
    new_state = replace(state, armed=False, buzzer_on=False, lights_on=False,
                        deter_until=None)
    return new_state, [(EventKind.DISARMED, {})]
