"""Event records shared by the controller, simulator traces and the API."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Mapping


class EventKind(str, Enum):
    VALVE_OPENED = "valve_opened"
    VALVE_CLOSED = "valve_closed"
    WATERING_ENDED = "watering_ended"
    SATURATION_ALERT = "saturation_alert"
    AMBIENT_ALERT = "ambient_alert"
    MOTION_DETECTED = "motion_detected"
    ARMED = "armed"
    DISARMED = "disarmed"
    HEALTH_CHANGED = "health_changed"
    MANUAL_REJECTED = "manual_rejected"


# Modules below the controller hand back (kind, payload) pairs; the
# controller stamps them with a sequence number and timestamp.
Emission = tuple[EventKind, dict]


@dataclass(frozen=True)
class Event:
    """One logged occurrence. seq is gap-free and strictly increasing."""

    seq: int
    timestamp: float
    kind: EventKind
    payload: Mapping[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "seq": self.seq,
            "timestamp": self.timestamp,
            "kind": self.kind.value,
            "payload": dict(self.payload),
        }
