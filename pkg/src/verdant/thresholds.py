"""Threshold configuration for the garden controller.

Every numeric set point lives here: the soil moisture bands, the plant
temperature and humidity ranges, the ambient alert levels, and the
per-channel leaf color intervals that flag a reading as unhealthy. Other
modules never hardcode a number; they read a ThresholdProfile.

The defaults were calibrated for turmeric grown in loam soil. Leaf color
intervals are raw sensor counts sampled from diseased leaves at several
positions and angles, so a single channel carries several distinct
intervals (baby and mature leaves read differently). One blue pair arrives
inverted in the calibration sheet and is normalized by swapping its
endpoints. Two of the green intervals overlap; membership in either one
counts, so the overlap is harmless.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Any, Mapping


class ColorChannel(str, Enum):
    RED = "red"
    GREEN = "green"
    BLUE = "blue"


class ProfileError(ValueError):
    """A threshold document is malformed or violates an invariant."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field_name = field_name


@dataclass(frozen=True)
class ColorIntervalSet:
    """Unhealthy-leaf intervals for one color channel, in raw sensor counts."""

    channel: ColorChannel
    intervals: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not self.intervals:
            raise ProfileError(f"unhealthy_color.{self.channel.value}",
                               "interval list must not be empty")
        for lo, hi in self.intervals:
            if lo > hi:
                raise ProfileError(f"unhealthy_color.{self.channel.value}",
                                   f"interval ({lo}, {hi}) has lo > hi")

    @classmethod
    def from_pairs(cls, channel: ColorChannel | str, pairs) -> "ColorIntervalSet":
        """Build from (lo, hi) pairs, swapping any inverted pair."""
        channel = ColorChannel(channel)
        field = f"unhealthy_color.{channel.value}"
        normalized = []
        for pair in pairs:
            try:
                lo, hi = float(pair[0]), float(pair[1])
            except (TypeError, ValueError, IndexError, KeyError):
                raise ProfileError(field, f"expected a (lo, hi) pair, got {pair!r}") from None
            if lo > hi:
                lo, hi = hi, lo
            normalized.append((lo, hi))
        return cls(channel, tuple(normalized))

    def contains(self, value: float) -> bool:
        """True when the value falls strictly inside any interval."""
        return any(lo < value < hi for lo, hi in self.intervals)

    def to_pairs(self) -> list[list[float]]:
        return [[lo, hi] for lo, hi in self.intervals]


# Default calibration values. Each channel pairs the i-th low bound with the
# i-th high bound; the (1698, 1290) blue pair is the inverted one.
_COLOR_LOWS = {
    ColorChannel.RED: (5, 645, 820, 1110),
    ColorChannel.GREEN: (4, 770, 1050, 1550),
    ColorChannel.BLUE: (4, 1090, 1698, 2490),
}
_COLOR_HIGHS = {
    ColorChannel.RED: (9, 698, 1095, 1350),
    ColorChannel.GREEN: (6, 835, 1565, 2245),
    ColorChannel.BLUE: (5, 1207, 1290, 2793),
}

_NUMERIC_FIELDS = (
    "moisture_low",
    "moisture_mid",
    "moisture_high",
    "plant_temp_min",
    "plant_temp_max",
    "plant_humidity_min",
    "plant_humidity_max",
    "ambient_temp_high",
    "ambient_humidity_low",
)


@dataclass(frozen=True)
class ThresholdProfile:
    """Validated, immutable set of control thresholds.

    Moisture bands are percent of saturation; plant ranges are exclusive
    bounds for the health checks; ambient levels are inclusive alert
    triggers. ``unhealthy_color`` holds one interval set per channel in
    (red, green, blue) order.
    """

    moisture_low: float
    moisture_mid: float
    moisture_high: float
    plant_temp_min: float
    plant_temp_max: float
    plant_humidity_min: float
    plant_humidity_max: float
    ambient_temp_high: float
    ambient_humidity_low: float
    unhealthy_color: tuple[ColorIntervalSet, ColorIntervalSet, ColorIntervalSet]

    def __post_init__(self):
        if not 0 <= self.moisture_low:
            raise ProfileError("moisture_low", "must be >= 0")
        if not self.moisture_low < self.moisture_mid:
            raise ProfileError("moisture_mid",
                               f"must be greater than moisture_low ({self.moisture_low})")
        if not self.moisture_mid < self.moisture_high:
            raise ProfileError("moisture_high",
                               f"must be greater than moisture_mid ({self.moisture_mid})")
        if self.moisture_high > 100:
            raise ProfileError("moisture_high", "must be <= 100")
        if not self.plant_temp_min < self.plant_temp_max:
            raise ProfileError("plant_temp_max",
                               f"must be greater than plant_temp_min ({self.plant_temp_min})")
        if not self.plant_humidity_min < self.plant_humidity_max:
            raise ProfileError("plant_humidity_max",
                               f"must be greater than plant_humidity_min ({self.plant_humidity_min})")
        expected = (ColorChannel.RED, ColorChannel.GREEN, ColorChannel.BLUE)
        channels = tuple(s.channel for s in self.unhealthy_color)
        if channels != expected:
            raise ProfileError("unhealthy_color",
                               f"expected one interval set per channel {[c.value for c in expected]}, "
                               f"got {[c.value for c in channels]}")

    def unhealthy_for(self, channel: ColorChannel) -> ColorIntervalSet:
        """Interval set for one channel."""
        return self.unhealthy_color[(ColorChannel.RED, ColorChannel.GREEN,
                                     ColorChannel.BLUE).index(channel)]


def default_profile() -> ThresholdProfile:
    """The shipped calibration profile (turmeric, loam soil)."""
    sets = tuple(
        ColorIntervalSet.from_pairs(ch, list(zip(_COLOR_LOWS[ch], _COLOR_HIGHS[ch])))
        for ch in (ColorChannel.RED, ColorChannel.GREEN, ColorChannel.BLUE)
    )
    return ThresholdProfile(
        moisture_low=40.0,
        moisture_mid=70.0,
        moisture_high=100.0,
        plant_temp_min=20.0,
        plant_temp_max=35.0,
        plant_humidity_min=60.0,
        plant_humidity_max=80.0,
        ambient_temp_high=40.0,
        ambient_humidity_low=30.0,
        unhealthy_color=sets,  # type: ignore[arg-type]
    )


def to_document(profile: ThresholdProfile) -> dict[str, Any]:
    """Serialize a profile to the plain-JSON document shape."""
    doc: dict[str, Any] = {name: getattr(profile, name) for name in _NUMERIC_FIELDS}
    doc["unhealthy_color"] = {
        s.channel.value: s.to_pairs() for s in profile.unhealthy_color
    }
    return doc


def load_profile(source: Mapping[str, Any] | str | Path) -> ThresholdProfile:
    """Load and validate a profile document.

    ``source`` is either an already-parsed mapping or a path to a JSON file.
    Fields omitted from the document keep their default values; unknown
    fields are rejected so typos cannot silently disable a threshold.
    """
    if isinstance(source, Mapping):
        doc = dict(source)
    else:
        path = Path(source)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ProfileError("document", f"cannot read {path}: {exc}") from exc
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ProfileError("document", f"cannot parse {path}: {exc}") from exc
        if not isinstance(doc, dict):
            raise ProfileError("document", f"expected a JSON object in {path}")

    merged = to_document(default_profile())
    for key, value in doc.items():
        if key not in merged:
            raise ProfileError(key, "unknown field")
        merged[key] = value

    kwargs: dict[str, Any] = {}
    for name in _NUMERIC_FIELDS:
        value = merged[name]
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ProfileError(name, f"expected a number, got {value!r}")
        kwargs[name] = float(value)

    color_doc = merged["unhealthy_color"]
    if not isinstance(color_doc, Mapping):
        raise ProfileError("unhealthy_color", "expected an object with red/green/blue keys")
    sets = []
    for ch in (ColorChannel.RED, ColorChannel.GREEN, ColorChannel.BLUE):
        if ch.value not in color_doc:
            raise ProfileError(f"unhealthy_color.{ch.value}", "missing channel")
        sets.append(ColorIntervalSet.from_pairs(ch, color_doc[ch.value]))
    unknown = set(color_doc) - {c.value for c in ColorChannel}
    if unknown:
        raise ProfileError(f"unhealthy_color.{sorted(unknown)[0]}", "unknown channel")
    kwargs["unhealthy_color"] = tuple(sets)

    return ThresholdProfile(**kwargs)


def packaged_default_document() -> dict[str, Any]:
    """The canonical profile document shipped with the package."""
    text = resources.files("verdant").joinpath("thresholds.default.json").read_text()
    return json.loads(text)
