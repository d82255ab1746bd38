"""Surrounding-condition checks: display values plus two threshold alerts.

Unlike the plant health ranges, the ambient comparisons are inclusive:
exactly 40 degrees already counts as high, exactly 30 percent already
counts as low. The alert strings are part of the wire contract and are
rendered verbatim by clients.
"""

from __future__ import annotations

from dataclasses import dataclass

from .thresholds import ThresholdProfile

TEMPERATURE_HIGH_ALERT = "surrounding temperature is high"
HUMIDITY_LOW_ALERT = "surrounding humidity is low"


@dataclass(frozen=True)
class AmbientReading:
    """One surrounding temperature/humidity sample."""

    temperature: float
    humidity: float
    timestamp: float = 0.0

    def __post_init__(self):
        if not 0 <= self.humidity <= 100:
            raise ValueError(f"ambient humidity must be within [0, 100], got {self.humidity!r}")


@dataclass(frozen=True)
class AmbientAlert:
    factor: str  # "temperature" | "humidity"
    message: str
    value: float

    def to_dict(self) -> dict:
        return {"factor": self.factor, "message": self.message, "value": self.value}


def check_ambient(reading: AmbientReading, profile: ThresholdProfile) -> list[AmbientAlert]:
    """Alerts currently warranted by the reading. Pure; edge-triggering is
    the controller's job."""
    alerts = []
    if reading.temperature >= profile.ambient_temp_high:
        alerts.append(AmbientAlert("temperature", TEMPERATURE_HIGH_ALERT, reading.temperature))
    if reading.humidity <= profile.ambient_humidity_low:
        alerts.append(AmbientAlert("humidity", HUMIDITY_LOW_ALERT, reading.humidity))
    return alerts
