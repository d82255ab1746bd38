"""Verdant: a smart-garden monitoring, watering and security controller.

The package pairs a pure control core (thresholds, health checks,
irrigation and security state machines) with a deterministic garden
simulator, a composing controller, a local HTTP/WebSocket telemetry
service, and a CLI for headless runs.
"""

from .ambient import (AmbientAlert, AmbientReading, HUMIDITY_LOW_ALERT,
                      TEMPERATURE_HIGH_ALERT, check_ambient)
from .controller import (ActuatorCommands, CommandKind, CommandOutcome,
                         Controller)
from .events import Event, EventKind
from .health import (FactorVerdict, HealthAssessment, HealthFactor,
                     RgbReading, assess_health, check_color,
                     check_humidity, check_temperature)
from .irrigation import (IrrigationConfig, IrrigationState, ManualAction,
                         MoistureBand, SATURATION_ALERT_TEXT, ScheduleSlot,
                         SessionKind, WateringSession, add_slot,
                         classify_moisture, list_slots, remove_slot,
                         request_manual, step_decision)
from .security import SecurityConfig, SecurityState, on_motion, set_armed
from .sensors import SensorFrame
from .sim import (GardenState, Scenario, ScenarioError, Trace,
                  builtin_scenario, builtin_scenario_names, initial_state,
                  load_scenario, make_controller, run, sample_sensors, step,
                  validate_scenario)
from .thresholds import (ColorChannel, ColorIntervalSet, ProfileError,
                         ThresholdProfile, default_profile, load_profile,
                         to_document)

__version__ = "0.1.0"

__all__ = [
    "ActuatorCommands", "AmbientAlert", "AmbientReading", "ColorChannel",
    "ColorIntervalSet", "CommandKind", "CommandOutcome", "Controller",
    "Event", "EventKind", "FactorVerdict", "GardenState",
    "HUMIDITY_LOW_ALERT", "HealthAssessment", "HealthFactor",
    "IrrigationConfig", "IrrigationState", "ManualAction", "MoistureBand",
    "ProfileError", "RgbReading", "SATURATION_ALERT_TEXT", "Scenario",
    "ScenarioError", "ScheduleSlot", "SecurityConfig", "SecurityState",
    "SensorFrame", "SessionKind", "TEMPERATURE_HIGH_ALERT",
    "ThresholdProfile", "Trace", "WateringSession", "add_slot",
    "assess_health", "builtin_scenario", "builtin_scenario_names",
    "check_ambient", "check_color", "check_humidity", "check_temperature",
    "classify_moisture", "default_profile", "initial_state", "list_slots",
    "load_profile", "load_scenario", "make_controller", "on_motion",
    "remove_slot", "request_manual", "run", "sample_sensors", "set_armed",
    "step", "step_decision", "to_document", "validate_scenario",
]
