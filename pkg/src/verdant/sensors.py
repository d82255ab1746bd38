"""Sensor frames: one timestamped reading of everything the garden senses."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .health import RgbReading


@dataclass(frozen=True)
class SensorFrame:
    timestamp: float
    soil_moisture: float
    plant_temp: float
    plant_humidity: float
    ambient_temp: float
    ambient_humidity: float
    leaf_color: RgbReading
    motion: bool

    def validate(self) -> None:
        """Raise ValueError if any reading is outside its physical range."""
        if not 0 <= self.soil_moisture <= 100:
            raise ValueError(f"soil moisture out of range: {self.soil_moisture!r}")
        for name in ("plant_temp", "ambient_temp"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value)):
                raise ValueError(f"{name} must be finite, got {value!r}")
        for name in ("plant_humidity", "ambient_humidity"):
            value = getattr(self, name)
            if not 0 <= value <= 100:
                raise ValueError(f"{name} out of range: {value!r}")

    def to_dict(self) -> dict:
        return {
            "timestamp": self.timestamp,
            "soil_moisture": self.soil_moisture,
            "plant_temp": self.plant_temp,
            "plant_humidity": self.plant_humidity,
            "ambient_temp": self.ambient_temp,
            "ambient_humidity": self.ambient_humidity,
            "leaf_color": self.leaf_color.to_dict(),
            "motion": self.motion,
        }
