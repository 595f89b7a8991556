import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mrf_flock import AgentState, Bounds, integrate_step, is_feasible, predict_state
from mrf_flock.dynamics import integrate_arrays

finite_coord = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def vec(x, y):
    return np.array([x, y], dtype=float)


class TestPredictState:
    def test_hand_evaluated_prediction(self):
        state = AgentState(position=vec(0, 0), velocity=vec(1, 0))
        out = predict_state(state, vec(0, 1), 0.15)
        assert out.position == pytest.approx([0.15, 0.01125], abs=1e-12)
        assert out.velocity == pytest.approx([1.0, 0.15], abs=1e-12)
        assert out.last_input == pytest.approx([0.0, 1.0])

    def test_zero_input_drifts_at_constant_velocity(self):
        state = AgentState(position=vec(0.3, -0.2), velocity=vec(0.1, 0.05))
        out = predict_state(state, vec(0, 0), 0.15)
        assert out.position == pytest.approx(state.position + 0.15 * state.velocity)
        assert out.velocity == pytest.approx(state.velocity)

    def test_rest_stays_at_rest(self):
        state = AgentState(position=vec(1, 2), velocity=vec(0, 0))
        for horizon in (0.05, 0.15, 2.0):
            out = predict_state(state, vec(0, 0), horizon)
            assert out.position == pytest.approx([1.0, 2.0])
            assert out.velocity == pytest.approx([0.0, 0.0])

    def test_rejects_non_finite_input(self):
        state = AgentState(position=vec(0, 0), velocity=vec(0, 0))
        with pytest.raises(ValueError):
            predict_state(state, vec(np.nan, 0), 0.15)
        with pytest.raises(ValueError):
            predict_state(state, vec(np.inf, 0), 0.15)

    def test_rejects_non_positive_horizon(self):
        state = AgentState(position=vec(0, 0), velocity=vec(0, 0))
        for horizon in (0.0, -0.1):
            with pytest.raises(ValueError):
                predict_state(state, vec(0, 0), horizon)

    @given(
        px=finite_coord, py=finite_coord, vx=finite_coord, vy=finite_coord,
        ux=finite_coord, uy=finite_coord, scale=st.floats(-3, 3, allow_nan=False),
    )
    @settings(max_examples=50, deadline=None)
    def test_linearity_in_state_and_input(self, px, py, vx, vy, ux, uy, scale):
        base = AgentState(position=vec(px, py), velocity=vec(vx, vy))
        scaled = AgentState(position=scale * base.position, velocity=scale * base.velocity)
        u = vec(ux, uy)
        out = predict_state(base, u, 0.15)
        out_scaled = predict_state(scaled, scale * u, 0.15)
        assert out_scaled.position == pytest.approx(scale * out.position, abs=1e-9)
        assert out_scaled.velocity == pytest.approx(scale * out.velocity, abs=1e-9)


class TestIntegrateStep:
    def test_hand_evaluated_drift(self):
        state = AgentState(position=vec(0, 0), velocity=vec(0.2, 0))
        out = integrate_step(state, vec(0, 0), 0.05)
        assert out.position == pytest.approx([0.01, 0.0], abs=1e-12)

    def test_zero_input_keeps_velocity(self):
        state = AgentState(position=vec(0.4, 0.1), velocity=vec(-0.02, 0.3))
        for dt in (0.01, 0.05, 0.5):
            assert integrate_step(state, vec(0, 0), dt).velocity == pytest.approx(
                state.velocity
            )

    def test_hand_evaluated_acceleration(self):
        state = AgentState(position=vec(0, 0), velocity=vec(0, 0))
        out = integrate_step(state, vec(0.14, 0), 0.05)
        assert out.velocity == pytest.approx([0.007, 0.0], abs=1e-12)

    def test_composed_zero_input_steps_match_single_long_step(self):
        state = AgentState(position=vec(0.2, -0.5), velocity=vec(0.11, 0.07))
        stepped = state
        for _ in range(8):
            stepped = integrate_step(stepped, vec(0, 0), 0.05)
        direct = integrate_step(state, vec(0, 0), 8 * 0.05)
        assert stepped.position == pytest.approx(direct.position, abs=1e-12)
        assert stepped.velocity == pytest.approx(direct.velocity, abs=1e-12)

    def test_array_form_matches_per_agent_steps(self, rng):
        positions = rng.normal(size=(5, 2))
        velocities = rng.normal(size=(5, 2)) * 0.3
        commands = rng.normal(size=(5, 2)) * 0.5
        p_new, v_new = integrate_arrays(positions, velocities, commands, 0.05)
        for i in range(5):
            ref = integrate_step(
                AgentState(position=positions[i], velocity=velocities[i]),
                commands[i],
                0.05,
            )
            assert p_new[i] == pytest.approx(ref.position, abs=1e-15)
            assert v_new[i] == pytest.approx(ref.velocity, abs=1e-15)


class TestIsFeasible:
    def test_boundary_is_inclusive(self):
        bounds = Bounds(v_max=0.35, u_max=0.7, r_coll=0.12)
        predicted = AgentState(position=vec(0, 0), velocity=vec(0.35, 0))
        assert is_feasible(predicted, vec(0.7, 0), bounds)

    def test_input_over_limit(self):
        bounds = Bounds(v_max=0.35, u_max=0.7, r_coll=0.12)
        predicted = AgentState(position=vec(0, 0), velocity=vec(0.1, 0))
        assert not is_feasible(predicted, vec(0.71, 0), bounds)

    def test_speed_over_limit(self):
        bounds = Bounds(v_max=0.35, u_max=0.7, r_coll=0.12)
        predicted = AgentState(position=vec(0, 0), velocity=vec(0.36, 0))
        assert not is_feasible(predicted, vec(0, 0), bounds)


class TestTypes:
    def test_bounds_must_be_positive(self):
        for bad in (dict(v_max=0), dict(u_max=-1), dict(r_coll=0)):
            kwargs = dict(v_max=0.35, u_max=0.7, r_coll=0.12)
            kwargs.update(bad)
            with pytest.raises(ValueError):
                Bounds(**kwargs)

    def test_agent_state_requires_2d_vectors(self):
        with pytest.raises(ValueError):
            AgentState(position=np.zeros(3), velocity=np.zeros(2))

    def test_agent_state_speed(self):
        assert AgentState(position=vec(0, 0), velocity=vec(3, 4)).speed == pytest.approx(5.0)
