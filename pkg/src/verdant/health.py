"""Plant health assessment from temperature, humidity and leaf color.

Each factor passes or fails independently; the plant scores 30 points per
passing factor (so 0/30/60/90) and counts as healthy when at least two
factors pass. Temperature and humidity pass strictly inside their ranges.
The color intervals are unhealthy-leaf signatures: a channel reading that
falls strictly inside any of its intervals fails the color factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .thresholds import ColorChannel, ThresholdProfile


class HealthFactor(str, Enum):
    TEMPERATURE = "temperature"
    HUMIDITY = "humidity"
    COLOR = "color"


@dataclass(frozen=True)
class RgbReading:
    """One leaf color sample, raw sensor counts per channel."""

    red: float
    green: float
    blue: float

    def __post_init__(self):
        for channel in ColorChannel:
            value = self.channel_value(channel)
            if not (isinstance(value, (int, float)) and math.isfinite(value)):
                raise ValueError(f"{channel.value} count must be a finite number, got {value!r}")
            if value < 0:
                raise ValueError(f"{channel.value} count must be >= 0, got {value!r}")

    def channel_value(self, channel: ColorChannel) -> float:
        return {ColorChannel.RED: self.red,
                ColorChannel.GREEN: self.green,
                ColorChannel.BLUE: self.blue}[channel]

    def to_dict(self) -> dict:
        return {"red": self.red, "green": self.green, "blue": self.blue}


@dataclass(frozen=True)
class FactorVerdict:
    factor: HealthFactor
    ok: bool

    def to_dict(self) -> dict:
        return {"factor": self.factor.value, "ok": self.ok}


@dataclass(frozen=True)
class HealthAssessment:
    """Three factor verdicts plus the aggregate score and healthy flag."""

    verdicts: tuple[FactorVerdict, FactorVerdict, FactorVerdict]
    score: int
    healthy: bool

    def to_dict(self) -> dict:
        return {
            "verdicts": [v.to_dict() for v in self.verdicts],
            "score": self.score,
            "healthy": self.healthy,
        }


def check_temperature(t: float, profile: ThresholdProfile) -> FactorVerdict:
    """Pass iff t lies strictly between the plant temperature bounds."""
    if not (isinstance(t, (int, float)) and math.isfinite(t)):
        raise ValueError(f"temperature must be a finite number, got {t!r}")
    ok = profile.plant_temp_min < t < profile.plant_temp_max
    return FactorVerdict(HealthFactor.TEMPERATURE, ok)


def check_humidity(h: float, profile: ThresholdProfile) -> FactorVerdict:
    """Pass iff h lies strictly between the plant humidity bounds."""
    if not (isinstance(h, (int, float)) and 0 <= h <= 100):
        raise ValueError(f"humidity must be within [0, 100], got {h!r}")
    ok = profile.plant_humidity_min < h < profile.plant_humidity_max
    return FactorVerdict(HealthFactor.HUMIDITY, ok)


def check_color(rgb: RgbReading, profile: ThresholdProfile) -> FactorVerdict:
    """Pass iff no channel falls strictly inside any unhealthy interval."""
    ok = all(
        not profile.unhealthy_for(channel).contains(rgb.channel_value(channel))
        for channel in ColorChannel
    )
    return FactorVerdict(HealthFactor.COLOR, ok)


def assess_health(t: float, h: float, rgb: RgbReading,
                  profile: ThresholdProfile) -> HealthAssessment:
    """Run all three factor checks and aggregate the score."""
    verdicts = (
        check_temperature(t, profile),
        check_humidity(h, profile),
        check_color(rgb, profile),
    )
    n_ok = sum(1 for v in verdicts if v.ok)
    return HealthAssessment(verdicts, score=min(30 * n_ok, 90), healthy=n_ok >= 2)
