import pytest

from verdant import SecurityConfig, SecurityState, on_motion, set_armed
from verdant.events import EventKind

HOLD = SecurityConfig(deter_hold_seconds=30)


def armed_state():
    state, _ = set_armed(SecurityState(), True, 0.0)
    return state


def test_armed_motion_actuates_and_alerts():
    state, events = on_motion(armed_state(), True, 10.0, HOLD)
    assert state.buzzer_on and state.lights_on
    assert state.deter_until == 40.0
    assert [k for k, _ in events] == [EventKind.MOTION_DETECTED]


def test_disarmed_motion_does_nothing():
    state, events = on_motion(SecurityState(), True, 10.0, HOLD)
    assert not state.buzzer_on and not state.lights_on
    assert events == []


def test_continuous_motion_is_one_event():
    state = armed_state()
    total = []
    for t in (10.0, 11.0, 12.0):
        state, events = on_motion(state, True, t, HOLD)
        total.extend(events)
    assert len(total) == 1
    assert state.deter_until == 42.0  # retrigger extends the hold


def test_separate_edges_are_separate_events():
    state = armed_state()
    state, first = on_motion(state, True, 10.0, HOLD)
    state, none = on_motion(state, False, 11.0, HOLD)
    state, second = on_motion(state, True, 12.0, HOLD)
    assert len(first) == 1 and none == [] and len(second) == 1


def test_deterrence_ends_exactly_at_hold():
    state, _ = on_motion(armed_state(), True, 0.0, HOLD)
    for t in (10.0, 29.0):
        state, _ = on_motion(state, False, t, HOLD)
        assert state.buzzer_on
    state, events = on_motion(state, False, 30.0, HOLD)
    assert not state.buzzer_on and not state.lights_on
    assert state.deter_until is None and events == []


def test_disarm_silences_immediately():
    state, _ = on_motion(armed_state(), True, 0.0, HOLD)
    assert state.buzzer_on
    state, events = set_armed(state, False, 5.0)
    assert not state.buzzer_on and not state.lights_on and state.deter_until is None
    assert [k for k, _ in events] == [EventKind.DISARMED]


def test_arm_is_idempotent_single_event():
    state, first = set_armed(SecurityState(), True, 0.0)
    state, second = set_armed(state, True, 1.0)
    assert [k for k, _ in first] == [EventKind.ARMED]
    assert second == []


def test_arm_then_motion_actuates():
    state, _ = set_armed(SecurityState(), True, 0.0)
    state, events = on_motion(state, True, 1.0, HOLD)
    assert state.buzzer_on and len(events) == 1


def test_motion_while_disarmed_never_alerts_later_retroactively():
    # motion already in progress when armed: actuates, but the edge passed
    state, events = on_motion(SecurityState(), True, 0.0, HOLD)
    assert events == []
    state, _ = set_armed(state, True, 1.0)
    state, events = on_motion(state, True, 2.0, HOLD)
    assert state.buzzer_on and events == []  # no fresh edge
    state, _ = on_motion(state, False, 3.0, HOLD)
    state, events = on_motion(state, True, 4.0, HOLD)
    assert [k for k, _ in events] == [EventKind.MOTION_DETECTED]


def test_state_invariants_enforced():
    with pytest.raises(ValueError):
        SecurityState(armed=False, buzzer_on=True, lights_on=True)
    with pytest.raises(ValueError):
        SecurityState(armed=True, buzzer_on=True, lights_on=False)
