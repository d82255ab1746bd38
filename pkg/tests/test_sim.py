import math

import pytest

from verdant import (ActuatorCommands, RgbReading, ScenarioError,
                     builtin_scenario, builtin_scenario_names, default_profile,
                     initial_state, load_scenario, run, sample_sensors, step,
                     validate_scenario)
from verdant.sim import scenario_from_dict

PROFILE = default_profile()
START = 6 * 3600  # scenarios below start at 06:00


def make_scenario(**overrides):
    doc = {
        "name": "test",
        "seed": 1,
        "duration_s": 60,
        "tick_s": 1.0,
        "start_time": "06:00",
        "initial": {"soil_moisture": 50},
    }
    doc.update(overrides)
    return load_scenario(doc)


CALM = {"temp_min": 25, "temp_max": 25, "humidity_min": 100, "humidity_max": 100}


def test_step_adds_inflow_when_valve_open():
    # saturated air: evaporation is exactly zero, only the valve acts
    scenario = make_scenario(initial={"soil_moisture": 30}, tick_s=60.0, weather=CALM)
    state = initial_state(scenario)
    expected = 30.0 + scenario.inflow_rate * (60.0 / 60.0)  # independent arithmetic
    assert step(state, True, scenario).soil_moisture == pytest.approx(expected)
    assert expected == 32.0


def test_step_zero_flux_fixed_point():
    scenario = make_scenario(initial={"soil_moisture": 30}, tick_s=60.0, weather=CALM)
    state = initial_state(scenario)
    assert step(state, False, scenario).soil_moisture == 30.0


def test_evaporation_formula():
    # constant 40 C / 50 %: E = e0 * (1 + 20/20) * (1 - 0.5) = e0
    weather = {"temp_min": 40, "temp_max": 40, "humidity_min": 50, "humidity_max": 50}
    scenario = make_scenario(initial={"soil_moisture": 50}, tick_s=60.0, weather=weather)
    state = initial_state(scenario)
    expected = 50.0 - scenario.evaporation_base * 1.0
    assert step(state, False, scenario).soil_moisture == pytest.approx(expected)


def test_moisture_clamps_at_zero():
    weather = {"temp_min": 45, "temp_max": 45, "humidity_min": 0, "humidity_max": 0}
    scenario = make_scenario(initial={"soil_moisture": 0.001}, tick_s=600.0,
                             weather=weather)
    state = initial_state(scenario)
    assert step(state, False, scenario).soil_moisture == 0.0


def test_moisture_clamps_at_hundred():
    scenario = make_scenario(initial={"soil_moisture": 99.99}, tick_s=600.0,
                             weather=CALM)
    state = initial_state(scenario)
    assert step(state, True, scenario).soil_moisture == 100.0


def test_noiseless_frame_equals_ground_truth():
    scenario = make_scenario(weather=CALM)
    state = initial_state(scenario)
    frame = sample_sensors(state, scenario)
    assert frame.soil_moisture == state.soil_moisture
    assert frame.plant_temp == state.plant_temp
    assert frame.plant_humidity == state.plant_humidity
    assert frame.ambient_temp == state.ambient.temperature
    assert frame.ambient_humidity == state.ambient.humidity
    assert frame.leaf_color == state.leaf_color
    assert frame.timestamp == state.sim_clock


def test_noisy_frames_stay_within_amplitude_and_are_seeded():
    scenario = make_scenario(noise_amplitude=2.0)

    def collect():
        state = initial_state(scenario)
        frames = []
        for _ in range(20):
            frames.append(sample_sensors(state, scenario))
            state = step(state, False, scenario)
        return frames

    first, second = collect(), collect()
    assert first == second  # same seed, same sequence
    state = initial_state(scenario)
    for frame in first:
        assert abs(frame.soil_moisture - state.soil_moisture) <= 2.0
        assert abs(frame.ambient_temp - state.ambient.temperature) <= 2.0
        state = step(state, False, scenario)


def test_motion_flag_exactly_at_covering_tick():
    scenario = make_scenario(duration_s=200, motion={"times": [100]})
    state = initial_state(scenario)
    flags = []
    for _ in range(200):
        flags.append(sample_sensors(state, scenario).motion)
        state = step(state, False, scenario)
    assert flags.index(True) == 100
    assert sum(flags) == 1


def test_motion_flag_with_coarse_tick():
    scenario = make_scenario(duration_s=203, tick_s=7.0, motion={"times": [100]})
    state = initial_state(scenario)
    flags = []
    for _ in range(29):
        flags.append(sample_sensors(state, scenario).motion)
        state = step(state, False, scenario)
    # tick 14 covers [98, 105)
    assert flags.index(True) == 14
    assert sum(flags) == 1


def test_poisson_motion_is_seeded_and_inside_duration():
    doc = {"name": "poisson", "seed": 3, "duration_s": 600,
           "motion": {"rate_per_hour": 120}}
    a, b = scenario_from_dict(doc), scenario_from_dict(doc)
    assert a.motion_times == b.motion_times
    assert len(a.motion_times) > 0
    assert all(START <= t < START + 600 for t in a.motion_times)
    different = scenario_from_dict({**doc, "seed": 4})
    assert different.motion_times != a.motion_times


def test_run_entry_count_matches_duration():
    scenario = make_scenario(duration_s=10)
    trace = run(scenario, PROFILE)
    assert len(trace.entries) == 10


def test_dry_start_opens_then_closes():
    trace = run(builtin_scenario("dry-start"), PROFILE)
    valve_kinds = [e["kind"] for e in trace.events if e["kind"].startswith("valve")]
    assert valve_kinds == ["valve_opened", "valve_closed"]


def test_no_motion_events_means_no_detections():
    trace = run(builtin_scenario("dry-start"), PROFILE)
    assert not any(e["kind"] == "motion_detected" for e in trace.events)


def test_trace_is_deterministic():
    scenario = builtin_scenario("intruder-night")
    assert run(scenario, PROFILE).to_ndjson() == run(scenario, PROFILE).to_ndjson()


def test_moisture_stays_in_bounds_and_valve_open_floods():
    class AlwaysOpen:
        def tick(self, frame, clock):
            return ActuatorCommands(valve_open=True, buzzer_on=False, lights_on=False)

    # saturated air: zero evaporation, so the stated flooding bound is exact
    scenario = make_scenario(initial={"soil_moisture": 0}, duration_s=60 * 60,
                             tick_s=60.0, weather=CALM)
    trace = run(scenario, PROFILE, controller=AlwaysOpen())
    moistures = [e["frame"]["soil_moisture"] for e in trace.entries]
    assert all(0 <= m <= 100 for m in moistures)
    bound = math.ceil(100 / (scenario.inflow_rate * 1.0))
    assert moistures[bound] == 100.0


def test_leaf_color_stays_in_baseline_stress_rectangle():
    scenario = builtin_scenario("sick-leaf")
    trace = run(scenario, PROFILE)
    dynamics = scenario.color_dynamics
    for entry in trace.entries:
        color = entry["frame"]["leaf_color"]
        for channel in ("red", "green", "blue"):
            lo = min(getattr(dynamics.baseline, channel), getattr(dynamics.stress, channel))
            hi = max(getattr(dynamics.baseline, channel), getattr(dynamics.stress, channel))
            assert lo <= color[channel] <= hi


def test_prolonged_dryness_drifts_color_toward_stress():
    scenario = make_scenario(
        initial={"soil_moisture": 20},
        duration_s=90 * 60, tick_s=60.0,
        color_dynamics={"stress_delay_min": 30.0, "drift_rate": 10.0},
    )
    state = initial_state(scenario)
    for _ in range(90):
        state = step(state, False, scenario)  # never watered
    baseline = scenario.color_dynamics.baseline
    stress = scenario.color_dynamics.stress
    assert abs(state.leaf_color.red - stress.red) < abs(baseline.red - stress.red)
    assert state.dry_minutes > scenario.color_dynamics.stress_delay_min


def test_scenario_clock_advances_by_tick():
    scenario = make_scenario(tick_s=5.0)
    state = initial_state(scenario)
    assert state.sim_clock == START
    assert step(state, False, scenario).sim_clock == START + 5.0


def test_builtin_scenarios_ship():
    assert builtin_scenario_names() == [
        "dry-start", "hot-dry-ambient", "intruder-night", "saturated", "sick-leaf"]
    with pytest.raises(ScenarioError):
        builtin_scenario("missing")


def test_every_builtin_scenario_validates():
    for name in builtin_scenario_names():
        validate_scenario(builtin_scenario(name), PROFILE)


@pytest.mark.parametrize("doc,field", [
    ({"name": "x", "tick_s": 0}, "tick_s"),
    ({"name": "x", "duration_s": -5}, "duration_s"),
    ({"name": "x", "inflow_rate": 0}, "inflow_rate"),
    ({"name": "x", "initial": {"soil_moisture": 130}}, "initial.soil_moisture"),
    ({"name": "x", "start_time": "26:00"}, "time"),
    ({"name": "x", "bogus": 1}, "bogus"),
    ({"name": "x", "weather": {"temp_min": 30, "temp_max": 20}}, "weather.temp_min"),
    ({"name": "x", "initial": {"leaf_color": [1, 2]}}, "initial.leaf_color"),
    ({"name": "x", "motion": {"rate_per_hour": -1}}, "motion.rate_per_hour"),
    ({}, "name"),
])
def test_scenario_validation_names_offending_field(doc, field):
    with pytest.raises((ScenarioError, ValueError)) as excinfo:
        scenario_from_dict(doc)
    assert field in str(excinfo.value)


def test_unhealthy_baseline_color_rejected():
    scenario = make_scenario(color_dynamics={"baseline": [650, 900, 700]})
    with pytest.raises(ScenarioError, match="baseline"):
        validate_scenario(scenario, PROFILE)


def test_initial_color_outside_rectangle_rejected():
    scenario = make_scenario(initial={"soil_moisture": 50, "leaf_color": [3000, 900, 700]})
    with pytest.raises(ScenarioError, match="leaf_color"):
        validate_scenario(scenario, PROFILE)


def test_load_scenario_from_file(tmp_path):
    path = tmp_path / "s.json"
    path.write_text('{"name": "from-file", "duration_s": 5}')
    assert load_scenario(path).name == "from-file"
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(ScenarioError, match="cannot parse"):
        load_scenario(bad)
