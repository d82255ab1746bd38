"""Simulated-clock helpers.

Timestamps are seconds since midnight of day zero of the simulation, so a
scenario that starts at 06:00 begins at t = 21600. Day indexing and
time-of-day arithmetic derive from that single number.
"""

from __future__ import annotations

DAY_SECONDS = 86400


def parse_time_of_day(text: str) -> int:
    """Parse "HH:MM" into seconds past midnight."""
    parts = str(text).split(":")
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise ValueError(f"expected time of day as HH:MM, got {text!r}")
    hours, minutes = int(parts[0]), int(parts[1])
    if not (0 <= hours <= 23 and 0 <= minutes <= 59):
        raise ValueError(f"time of day out of range: {text!r}")
    return hours * 3600 + minutes * 60


def format_time_of_day(seconds: float) -> str:
    seconds = int(seconds) % DAY_SECONDS
    return f"{seconds // 3600:02d}:{seconds % 3600 // 60:02d}"


def day_index(t: float) -> int:
    """Which simulated day an absolute timestamp falls in."""
    return int(t // DAY_SECONDS)


def seconds_of_day(t: float) -> float:
    return t % DAY_SECONDS
