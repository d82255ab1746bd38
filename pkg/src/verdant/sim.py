"""Deterministic discrete-time garden simulator.

Stands in for the physical pot: soil moisture driven by evaporation and
the valve, a sinusoidal daily weather profile that the plant microclimate
tracks with fixed offsets, a leaf color that drifts toward a stress color
after prolonged dryness and relaxes back once watered, and scripted or
Poisson motion events. Everything is seeded; the same scenario and seed
reproduce the exact same trace, byte for byte.

Dynamics are intentionally simple (forward Euler at the scenario tick):

    moisture' = clamp(moisture + inflow*dt - E*dt, 0, 100)
    E = e0 * (1 + max(0, ambient_temp - 20) / 20) * (1 - ambient_humidity / 100)

with rates in percent per minute. The weather sinusoid bottoms out at
04:00 and peaks at 16:00; humidity runs in anti-phase.
"""

from __future__ import annotations

import json
import math
import random
from bisect import bisect_left
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

from .ambient import AmbientReading
from .controller import CommandKind, Controller
from .health import RgbReading, check_color
from .irrigation import add_slot
from .sensors import SensorFrame
from .simclock import DAY_SECONDS, parse_time_of_day
from .thresholds import ThresholdProfile, default_profile


class ScenarioError(ValueError):
    """A scenario document is malformed or inconsistent."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field_name = field_name


@dataclass(frozen=True)
class WeatherProfile:
    """Daily sinusoid bounds for ambient temperature and humidity."""

    temp_min: float = 22.0
    temp_max: float = 30.0
    humidity_min: float = 55.0
    humidity_max: float = 75.0

    def __post_init__(self):
        if self.temp_min > self.temp_max:
            raise ScenarioError("weather.temp_min", "must not exceed temp_max")
        if self.humidity_min > self.humidity_max:
            raise ScenarioError("weather.humidity_min", "must not exceed humidity_max")
        if not (0 <= self.humidity_min and self.humidity_max <= 100):
            raise ScenarioError("weather.humidity_min", "humidity bounds must lie in [0, 100]")

    def at(self, t: float) -> tuple[float, float]:
        """(temperature, humidity) at an absolute sim timestamp."""
        phase = math.cos(2 * math.pi * ((t % DAY_SECONDS) / 3600.0 - 4.0) / 24.0)
        temp = (self.temp_min + self.temp_max) / 2 - (self.temp_max - self.temp_min) / 2 * phase
        humidity = (self.humidity_min + self.humidity_max) / 2 \
            + (self.humidity_max - self.humidity_min) / 2 * phase
        return temp, humidity

    def to_dict(self) -> dict:
        return {"temp_min": self.temp_min, "temp_max": self.temp_max,
                "humidity_min": self.humidity_min, "humidity_max": self.humidity_max}


@dataclass(frozen=True)
class ColorDynamics:
    """Leaf color drift model: linear motion toward stress while dryness has
    persisted past the delay, linear relaxation toward baseline otherwise."""

    baseline: RgbReading = RgbReading(120.0, 900.0, 700.0)
    stress: RgbReading = RgbReading(660.0, 1200.0, 1500.0)
    stress_delay_min: float = 60.0
    drift_rate: float = 20.0        # counts per minute, per channel
    stress_threshold: float = 40.0  # moisture percent below which dryness accumulates

    def __post_init__(self):
        if self.drift_rate < 0:
            raise ScenarioError("color_dynamics.drift_rate", "must be >= 0")
        if self.stress_delay_min < 0:
            raise ScenarioError("color_dynamics.stress_delay_min", "must be >= 0")

    def to_dict(self) -> dict:
        return {
            "baseline": [self.baseline.red, self.baseline.green, self.baseline.blue],
            "stress": [self.stress.red, self.stress.green, self.stress.blue],
            "stress_delay_min": self.stress_delay_min,
            "drift_rate": self.drift_rate,
            "stress_threshold": self.stress_threshold,
        }


@dataclass(frozen=True)
class PlantOffsets:
    """Fixed offsets of the plant microclimate from ambient."""

    temp: float = 1.0
    humidity: float = 3.0

    def to_dict(self) -> dict:
        return {"temp": self.temp, "humidity": self.humidity}


@dataclass(frozen=True)
class MotionScript:
    """Motion events: explicit times (seconds from scenario start) plus an
    optional Poisson rate. Poisson events are drawn from the scenario seed
    at load time and only cover the scenario duration."""

    times: tuple[float, ...] = ()
    rate_per_hour: float = 0.0

    def __post_init__(self):
        if self.rate_per_hour < 0:
            raise ScenarioError("motion.rate_per_hour", "must be >= 0")
        if any(t < 0 for t in self.times):
            raise ScenarioError("motion.times", "must be >= 0")

    def to_dict(self) -> dict:
        return {"times": list(self.times), "rate_per_hour": self.rate_per_hour}


@dataclass(frozen=True)
class ControllerSetup:
    """Initial controller configuration a scenario ships with."""

    armed: bool = False
    slots: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {"armed": self.armed, "slots": list(self.slots)}


@dataclass(frozen=True)
class Scenario:
    name: str
    seed: int = 0
    duration_s: float = 600.0
    tick_s: float = 1.0
    start_time: str = "06:00"
    initial_moisture: float = 50.0
    initial_color: RgbReading | None = None
    weather: WeatherProfile = field(default_factory=WeatherProfile)
    evaporation_base: float = 0.05  # e0, percent per minute
    inflow_rate: float = 2.0        # valve-open inflow, percent per minute
    noise_amplitude: float = 0.0
    plant_offsets: PlantOffsets = field(default_factory=PlantOffsets)
    color_dynamics: ColorDynamics = field(default_factory=ColorDynamics)
    motion: MotionScript = field(default_factory=MotionScript)
    controller: ControllerSetup = field(default_factory=ControllerSetup)

    def __post_init__(self):
        if self.tick_s <= 0:
            raise ScenarioError("tick_s", "must be positive")
        if self.duration_s <= 0:
            raise ScenarioError("duration_s", "must be positive")
        if self.inflow_rate <= 0:
            raise ScenarioError("inflow_rate", "must be positive")
        if self.evaporation_base < 0:
            raise ScenarioError("evaporation_base", "must be >= 0")
        if not 0 <= self.initial_moisture <= 100:
            raise ScenarioError("initial.soil_moisture", "must lie in [0, 100]")
        if self.noise_amplitude < 0:
            raise ScenarioError("noise_amplitude", "must be >= 0")
        parse_time_of_day(self.start_time)
        object.__setattr__(self, "_motion_times_abs", self._resolve_motion_times())

    @property
    def start_offset(self) -> int:
        return parse_time_of_day(self.start_time)

    @property
    def ticks(self) -> int:
        return int(round(self.duration_s / self.tick_s))

    @property
    def motion_times(self) -> tuple[float, ...]:
        """Absolute timestamps of all motion events, sorted."""
        return self._motion_times_abs  # type: ignore[attr-defined]

    def _resolve_motion_times(self) -> tuple[float, ...]:
        offset = parse_time_of_day(self.start_time)
        times = [offset + t for t in self.motion.times]
        if self.motion.rate_per_hour > 0:
            rng = random.Random(self.seed ^ 0x6D6F7469)  # independent of sensor noise
            t = 0.0
            while True:
                t += rng.expovariate(self.motion.rate_per_hour / 3600.0)
                if t >= self.duration_s:
                    break
                times.append(offset + t)
        return tuple(sorted(times))

    def to_dict(self) -> dict:
        initial: dict[str, Any] = {"soil_moisture": self.initial_moisture}
        if self.initial_color is not None:
            initial["leaf_color"] = [self.initial_color.red, self.initial_color.green,
                                     self.initial_color.blue]
        return {
            "name": self.name,
            "seed": self.seed,
            "duration_s": self.duration_s,
            "tick_s": self.tick_s,
            "start_time": self.start_time,
            "initial": initial,
            "weather": self.weather.to_dict(),
            "evaporation_base": self.evaporation_base,
            "inflow_rate": self.inflow_rate,
            "noise_amplitude": self.noise_amplitude,
            "plant_offsets": self.plant_offsets.to_dict(),
            "color_dynamics": self.color_dynamics.to_dict(),
            "motion": self.motion.to_dict(),
            "controller": self.controller.to_dict(),
        }


# -- scenario documents --------------------------------------------------------

def _require(doc: Mapping, key: str, kind, field_name: str):
    value = doc[key]
    if kind is float:
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ScenarioError(field_name, f"expected a number, got {value!r}")
        return float(value)
    if not isinstance(value, kind):
        raise ScenarioError(field_name, f"expected {kind.__name__}, got {value!r}")
    return value


def _rgb(values, field_name: str) -> RgbReading:
    if not isinstance(values, (list, tuple)) or len(values) != 3:
        raise ScenarioError(field_name, f"expected [red, green, blue], got {values!r}")
    try:
        return RgbReading(*(float(v) for v in values))
    except (TypeError, ValueError) as exc:
        raise ScenarioError(field_name, str(exc)) from None


def scenario_from_dict(doc: Mapping[str, Any]) -> Scenario:
    """Build and validate a Scenario from a plain document."""
    known = {"name", "seed", "duration_s", "tick_s", "start_time", "initial",
             "weather", "evaporation_base", "inflow_rate", "noise_amplitude",
             "plant_offsets", "color_dynamics", "motion", "controller"}
    unknown = set(doc) - known
    if unknown:
        raise ScenarioError(sorted(unknown)[0], "unknown field")
    if "name" not in doc:
        raise ScenarioError("name", "missing required field")

    merged: dict[str, Any] = {"name": _require(doc, "name", str, "name")}
    for key in ("seed",):
        if key in doc:
            merged[key] = int(_require(doc, key, float, key))
    for key in ("duration_s", "tick_s", "evaporation_base", "inflow_rate",
                "noise_amplitude"):
        if key in doc:
            merged[key] = _require(doc, key, float, key)
    if "start_time" in doc:
        merged["start_time"] = _require(doc, "start_time", str, "start_time")

    initial = doc.get("initial", {})
    if not isinstance(initial, Mapping):
        raise ScenarioError("initial", "expected an object")
    if "soil_moisture" in initial:
        merged["initial_moisture"] = _require(initial, "soil_moisture", float,
                                              "initial.soil_moisture")
    if "leaf_color" in initial:
        merged["initial_color"] = _rgb(initial["leaf_color"], "initial.leaf_color")

    def section(key: str, builder, fields: dict):
        raw = doc.get(key, {})
        if not isinstance(raw, Mapping):
            raise ScenarioError(key, "expected an object")
        unknown = set(raw) - set(fields)
        if unknown:
            raise ScenarioError(f"{key}.{sorted(unknown)[0]}", "unknown field")
        kwargs = {}
        for name, conv in fields.items():
            if name in raw:
                kwargs[name] = conv(raw[name], f"{key}.{name}")
        return builder(**kwargs)

    num = lambda v, f: _require({"v": v}, "v", float, f)
    merged["weather"] = section("weather", WeatherProfile, {
        "temp_min": num, "temp_max": num, "humidity_min": num, "humidity_max": num})
    merged["plant_offsets"] = section("plant_offsets", PlantOffsets, {
        "temp": num, "humidity": num})
    merged["color_dynamics"] = section("color_dynamics", ColorDynamics, {
        "baseline": _rgb, "stress": _rgb, "stress_delay_min": num,
        "drift_rate": num, "stress_threshold": num})

    def times(v, f):
        if not isinstance(v, (list, tuple)):
            raise ScenarioError(f, "expected a list of seconds")
        return tuple(num(x, f) for x in v)

    merged["motion"] = section("motion", MotionScript, {
        "times": times, "rate_per_hour": num})

    def slot_list(v, f):
        if not isinstance(v, (list, tuple)) or not all(isinstance(s, str) for s in v):
            raise ScenarioError(f, "expected a list of HH:MM strings")
        return tuple(v)

    merged["controller"] = section("controller", ControllerSetup, {
        "armed": lambda v, f: bool(v), "slots": slot_list})

    return Scenario(**merged)


def load_scenario(source: Mapping[str, Any] | str | Path) -> Scenario:
    """Load a scenario from a parsed mapping or a JSON file path."""
    if isinstance(source, Mapping):
        return scenario_from_dict(source)
    path = Path(source)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError("document", f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError("document", f"cannot parse {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ScenarioError("document", f"expected a JSON object in {path}")
    return scenario_from_dict(doc)


def builtin_scenario_names() -> list[str]:
    root = resources.files("verdant").joinpath("scenarios")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def builtin_scenario(name: str) -> Scenario:
    """One of the scenarios shipped with the package."""
    entry = resources.files("verdant").joinpath(f"scenarios/{name}.json")
    try:
        text = entry.read_text()
    except FileNotFoundError:
        raise ScenarioError(
            "name", f"unknown builtin scenario {name!r}; "
            f"available: {', '.join(builtin_scenario_names())}") from None
    return scenario_from_dict(json.loads(text))


def validate_scenario(scenario: Scenario, profile: ThresholdProfile) -> None:
    """Cross-checks that need the active threshold profile."""
    dynamics = scenario.color_dynamics
    if not check_color(dynamics.baseline, profile).ok:
        raise ScenarioError("color_dynamics.baseline",
                            "baseline color must classify as healthy under the active profile")
    initial = scenario.initial_color or dynamics.baseline
    for channel in ("red", "green", "blue"):
        value = getattr(initial, channel)
        lo = min(getattr(dynamics.baseline, channel), getattr(dynamics.stress, channel))
        hi = max(getattr(dynamics.baseline, channel), getattr(dynamics.stress, channel))
        if not lo <= value <= hi:
            raise ScenarioError("initial.leaf_color",
                                f"{channel} must lie between baseline and stress colors")


# -- state and dynamics ----------------------------------------------------------

@dataclass(frozen=True)
class GardenState:
    """Simulator ground truth at one instant."""

    soil_moisture: float
    leaf_color: RgbReading
    plant_temp: float
    plant_humidity: float
    ambient: AmbientReading
    sim_clock: float
    dry_minutes: float
    rng: random.Random


def _clamp(value: float, lo: float, hi: float) -> float:
    return max(lo, min(hi, value))


def _microclimate(scenario: Scenario, t: float) -> tuple[float, float, AmbientReading]:
    amb_temp, amb_hum = scenario.weather.at(t)
    ambient = AmbientReading(amb_temp, amb_hum, t)
    plant_temp = amb_temp + scenario.plant_offsets.temp
    plant_hum = _clamp(amb_hum + scenario.plant_offsets.humidity, 0.0, 100.0)
    return plant_temp, plant_hum, ambient


def initial_state(scenario: Scenario) -> GardenState:
    t0 = float(scenario.start_offset)
    plant_temp, plant_hum, ambient = _microclimate(scenario, t0)
    color = scenario.initial_color or scenario.color_dynamics.baseline
    return GardenState(
        soil_moisture=float(scenario.initial_moisture),
        leaf_color=color,
        plant_temp=plant_temp,
        plant_humidity=plant_hum,
        ambient=ambient,
        sim_clock=t0,
        dry_minutes=0.0,
        rng=random.Random(scenario.seed),
    )


def _toward(value: float, target: float, max_step: float) -> float:
    delta = target - value
    if abs(delta) <= max_step:
        return target
    return value + math.copysign(max_step, delta)


def step(state: GardenState, valve_open: bool, scenario: Scenario) -> GardenState:
    """Advance the garden by one tick with the given valve state."""
    dt_min = scenario.tick_s / 60.0
    evaporation = (scenario.evaporation_base
                   * (1.0 + max(0.0, state.ambient.temperature - 20.0) / 20.0)
                   * (1.0 - state.ambient.humidity / 100.0))
    inflow = scenario.inflow_rate if valve_open else 0.0
    moisture = _clamp(state.soil_moisture + (inflow - evaporation) * dt_min, 0.0, 100.0)

    dynamics = scenario.color_dynamics
    if state.soil_moisture < dynamics.stress_threshold:
        dry_minutes = state.dry_minutes + dt_min
    else:
        dry_minutes = 0.0
    target = dynamics.stress if dry_minutes > dynamics.stress_delay_min else dynamics.baseline
    step_size = dynamics.drift_rate * dt_min
    color = RgbReading(
        _toward(state.leaf_color.red, target.red, step_size),
        _toward(state.leaf_color.green, target.green, step_size),
        _toward(state.leaf_color.blue, target.blue, step_size),
    )

    t = state.sim_clock + scenario.tick_s
    plant_temp, plant_hum, ambient = _microclimate(scenario, t)
    return GardenState(
        soil_moisture=moisture,
        leaf_color=color,
        plant_temp=plant_temp,
        plant_humidity=plant_hum,
        ambient=ambient,
        sim_clock=t,
        dry_minutes=dry_minutes,
        rng=state.rng,
    )


def sample_sensors(state: GardenState, scenario: Scenario) -> SensorFrame:
    """Read every sensor at the current instant.

    With a zero noise amplitude the frame equals ground truth exactly;
    otherwise uniform zero-mean noise from the run's seeded generator is
    added and the result clamped back to physical ranges.
    """
    t = state.sim_clock
    amp = scenario.noise_amplitude
    if amp > 0:
        noise = lambda: state.rng.uniform(-amp, amp)
        soil = _clamp(state.soil_moisture + noise(), 0.0, 100.0)
        plant_temp = state.plant_temp + noise()
        plant_hum = _clamp(state.plant_humidity + noise(), 0.0, 100.0)
        amb_temp = state.ambient.temperature + noise()
        amb_hum = _clamp(state.ambient.humidity + noise(), 0.0, 100.0)
        color = RgbReading(max(0.0, state.leaf_color.red + noise()),
                           max(0.0, state.leaf_color.green + noise()),
                           max(0.0, state.leaf_color.blue + noise()))
    else:
        soil = state.soil_moisture
        plant_temp = state.plant_temp
        plant_hum = state.plant_humidity
        amb_temp = state.ambient.temperature
        amb_hum = state.ambient.humidity
        color = state.leaf_color

    times = scenario.motion_times
    idx = bisect_left(times, t)
    motion = idx < len(times) and times[idx] < t + scenario.tick_s

    frame = SensorFrame(
        timestamp=t,
        soil_moisture=soil,
        plant_temp=plant_temp,
        plant_humidity=plant_hum,
        ambient_temp=amb_temp,
        ambient_humidity=amb_hum,
        leaf_color=color,
        motion=motion,
    )
    frame.validate()
    return frame


# -- running ----------------------------------------------------------------------

@dataclass
class Trace:
    """Everything a run produced: one entry per tick plus the event log."""

    scenario_name: str
    seed: int
    tick_s: float
    duration_s: float
    entries: list[dict]
    events: list[dict]
    final_state: dict

    def to_ndjson(self) -> str:
        return "".join(json.dumps(entry, separators=(",", ":")) + "\n"
                       for entry in self.entries)

    def write_ndjson(self, path: str | Path) -> None:
        Path(path).write_text(self.to_ndjson())


def make_controller(scenario: Scenario, profile: ThresholdProfile | None = None) -> Controller:
    """Default controller for a scenario, with its setup block applied."""
    profile = profile or default_profile()
    ctrl = Controller(profile, clock=float(scenario.start_offset))
    for time_of_day in scenario.controller.slots:
        ctrl.irrigation, _ = add_slot(ctrl.irrigation, time_of_day)
    if scenario.controller.armed:
        ctrl.handle_command(CommandKind.ARM)
    return ctrl


def run(scenario: Scenario, profile: ThresholdProfile | None = None,
        controller=None) -> Trace:
    """Run a scenario to completion against a controller.

    ``controller`` may be anything with ``tick(frame, clock) -> commands``;
    by default a fresh Controller configured from the scenario is used.
    """
    profile = profile or default_profile()
    validate_scenario(scenario, profile)
    if controller is None:
        controller = make_controller(scenario, profile)

    state = initial_state(scenario)
    last_seq = getattr(controller, "last_seq", 0)
    setup_events = [e.to_dict() for e in controller.events_since(0)] \
        if hasattr(controller, "events_since") else []

    entries: list[dict] = []
    events: list[dict] = list(setup_events)
    for _ in range(scenario.ticks):
        frame = sample_sensors(state, scenario)
        commands = controller.tick(frame, state.sim_clock)
        if hasattr(controller, "events_since"):
            new_events = [e.to_dict() for e in controller.events_since(last_seq)]
            last_seq = controller.last_seq
        else:
            new_events = []
        entries.append({
            "t": state.sim_clock,
            "frame": frame.to_dict(),
            "commands": commands.to_dict(),
            "events": new_events,
        })
        events.extend(new_events)
        state = step(state, commands.valve_open, scenario)

    final_state = controller.snapshot() if hasattr(controller, "snapshot") else {}
    return Trace(
        scenario_name=scenario.name,
        seed=scenario.seed,
        tick_s=scenario.tick_s,
        duration_s=scenario.duration_s,
        entries=entries,
        events=events,
        final_state=final_state,
    )
