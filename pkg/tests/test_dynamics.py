import numpy as np
import pytest

from padlander.dynamics import (
    ActionBoundError,
    DroneParams,
    DroneState,
    StateCorruptionError,
    apply_setpoint_delta,
    step_drone,
)

DT = 1.0 / 240.0


def test_equilibrium_is_a_fixpoint():
    state = DroneState.at_rest([1.0, 2.0, 3.0])
    params = DroneParams()
    out = state
    for _ in range(100):
        out = step_drone(out, params, np.zeros(3), DT)
    assert np.array_equal(out.position, state.position)
    assert np.array_equal(out.velocity, np.zeros(3))
    assert np.array_equal(out.attitude, np.zeros(3))
    assert np.array_equal(out.angular_velocity, np.zeros(3))


def test_force_integration_matches_f_equals_ma():
    state = DroneState.at_rest([0.0, 0.0, 1.0])
    params = DroneParams(mass=0.027)
    out = step_drone(state, params, np.array([0.005, 0.0, 0.0]), DT)
    assert out.velocity[0] == pytest.approx(0.005 / 0.027 / 240.0, rel=1e-12)
    assert out.velocity[1] == 0.0 and out.velocity[2] == 0.0


def test_velocity_envelope_under_distant_setpoint():
    # Brute-force stepping toward a setpoint 10 m away: vx never exceeds 3.
    state = DroneState.at_rest([0.0, 0.0, 1.0])
    state = DroneState(
        state.position, state.velocity, state.attitude, state.angular_velocity,
        np.array([10.0, 0.0, 1.0]),
    )
    params = DroneParams()
    peak = 0.0
    for _ in range(1000):
        state = step_drone(state, params, np.zeros(3), DT)
        assert abs(state.velocity[0]) <= 3.0 + 1e-12
        peak = max(peak, state.velocity[0])
    assert peak > 2.5  # the cap actually binds during the dash


def test_envelope_property_random_rollouts():
    rng = np.random.default_rng(7)
    params = DroneParams()
    for _ in range(20):
        state = DroneState.at_rest(rng.uniform(-1, 1, 3))
        for _ in range(200):
            if rng.uniform() < 0.1:
                delta = rng.uniform(-0.1, 0.1, 3)
                state = apply_setpoint_delta(state, delta)
            force = rng.uniform(-0.005, 0.005, 3)
            state = step_drone(state, params, force, DT)
            assert abs(state.velocity[0]) <= 3.0 + 1e-12
            assert abs(state.velocity[1]) <= 3.0 + 1e-12
            assert abs(state.velocity[2]) <= 2.0 + 1e-12


def test_determinism():
    rng = np.random.default_rng(3)
    state = DroneState.at_rest(rng.uniform(-1, 1, 3))
    state = apply_setpoint_delta(state, [0.1, -0.05, 0.02])
    params = DroneParams()
    force = np.array([0.003, -0.002, 0.001])
    a = step_drone(state, params, force, DT)
    b = step_drone(state, params, force, DT)
    for f in ("position", "velocity", "attitude", "angular_velocity", "setpoint"):
        assert np.array_equal(getattr(a, f), getattr(b, f))


def test_attitude_stays_below_quarter_turn():
    rng = np.random.default_rng(11)
    params = DroneParams()
    state = DroneState.at_rest([0.0, 0.0, 1.0])
    for _ in range(500):
        state = apply_setpoint_delta(state, rng.uniform(-0.1, 0.1, 3))
        state = step_drone(state, params, rng.uniform(-0.005, 0.005, 3), DT)
        assert abs(state.attitude[0]) < np.pi / 2
        assert abs(state.attitude[1]) < np.pi / 2
        assert state.attitude[2] == 0.0


def test_setpoint_delta_semantics():
    state = DroneState.at_rest([1.0, 1.0, 1.0])
    out = apply_setpoint_delta(state, [0.1, -0.1, 0.0])
    assert np.allclose(out.setpoint, [1.1, 0.9, 1.0])
    assert np.array_equal(out.position, state.position)
    hover = apply_setpoint_delta(state, [0.0, 0.0, 0.0])
    assert np.array_equal(hover.setpoint, state.position)


def test_setpoint_delta_bound_enforced():
    state = DroneState.at_rest([0.0, 0.0, 0.0])
    with pytest.raises(ActionBoundError):
        apply_setpoint_delta(state, [0.2, 0.0, 0.0])


def test_non_finite_inputs_rejected():
    state = DroneState.at_rest([0.0, 0.0, 0.0])
    with pytest.raises(StateCorruptionError):
        step_drone(state, DroneParams(), np.array([np.nan, 0.0, 0.0]), DT)
    bad = DroneState(
        np.array([np.inf, 0.0, 0.0]), np.zeros(3), np.zeros(3), np.zeros(3), np.zeros(3)
    )
    with pytest.raises(StateCorruptionError):
        step_drone(bad, DroneParams(), np.zeros(3), DT)
