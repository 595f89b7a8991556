import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize_scalar

from mrf_flock import (
    NoMinimumError,
    PotentialParams,
    angle_between,
    desired_distance,
    psi_acc,
    psi_align,
    psi_attract_repulse,
    psi_vel,
)


def minimize_spacing_energy(params):
    """Independent numeric oracle: minimize the spacing energy over (0, 5]."""
    res = minimize_scalar(
        lambda d: psi_attract_repulse(d, params),
        bounds=(1e-6, 5.0),
        method="bounded",
        options={"xatol": 1e-10},
    )
    return res.x


class TestAttractRepulse:
    def test_value_at_zero_distance(self, sim_potentials):
        assert psi_attract_repulse(0.0, sim_potentials) == pytest.approx(2.0)

    def test_decays_to_zero_from_below(self, sim_potentials):
        assert psi_attract_repulse(50.0, sim_potentials) == pytest.approx(0.0, abs=1e-9)
        assert psi_attract_repulse(10.0, sim_potentials) < 0

    def test_minimum_matches_numeric_oracle(self, sim_potentials):
        d_star = minimize_spacing_energy(sim_potentials)
        value = psi_attract_repulse(0.5163, sim_potentials)
        assert abs(value - psi_attract_repulse(d_star, sim_potentials)) < 1e-3

    def test_monotone_down_then_up(self, sim_potentials):
        d_t = desired_distance(sim_potentials)
        below = np.linspace(0.01, d_t - 1e-3, 80)
        above = np.linspace(d_t + 1e-3, 5.0, 80)
        assert np.all(np.diff(psi_attract_repulse(below, sim_potentials)) < 0)
        assert np.all(np.diff(psi_attract_repulse(above, sim_potentials)) > 0)

    def test_rejects_negative_distance(self, sim_potentials):
        with pytest.raises(ValueError):
            psi_attract_repulse(-0.1, sim_potentials)

    def test_broadcasts_over_arrays(self, sim_potentials):
        d = np.array([[0.2, 0.5], [1.0, 2.0]])
        out = psi_attract_repulse(d, sim_potentials)
        assert out.shape == (2, 2)


class TestDesiredDistance:
    def test_simulation_parameters(self, sim_potentials):
        assert desired_distance(sim_potentials) == pytest.approx(0.5163, abs=0.001)

    def test_experiment_parameters(self):
        params = PotentialParams(
            a=8, b=10, k_a=1.5, k_r=0.27, k_l=4, k_c=7, k_d=2, k_v=1, t_p=0.1
        )
        assert desired_distance(params) == pytest.approx(0.6381, abs=0.001)

    def test_stationary_point(self, sim_potentials):
        d_t = desired_distance(sim_potentials)
        h = 1e-6
        slope = (
            psi_attract_repulse(d_t + h, sim_potentials)
            - psi_attract_repulse(d_t - h, sim_potentials)
        ) / (2 * h)
        assert abs(slope) < 1e-6

    def test_agrees_with_numeric_minimization_on_random_draws(self, rng):
        for _ in range(100):
            a = rng.uniform(1, 20)
            b = rng.uniform(1, 20)
            k_r = rng.uniform(0.05, 0.5)
            k_a = k_r + rng.uniform(0.2, 2.0)
            if not a * k_r < b * k_a:
                continue
            params = PotentialParams(
                a=a, b=b, k_a=k_a, k_r=k_r, k_l=4, k_c=7, k_d=15, k_v=2, t_p=0.15
            )
            closed = desired_distance(params)
            if not 1e-4 < closed < 4.9:
                continue
            assert closed == pytest.approx(minimize_spacing_energy(params), abs=1e-6)

    def test_no_minimum_raises(self):
        params = PotentialParams(
            a=1, b=10, k_a=0.2, k_r=1.5, k_l=4, k_c=7, k_d=15, k_v=2, t_p=0.15
        )
        with pytest.raises(NoMinimumError):
            desired_distance(params)


class TestAlign:
    def test_identical_velocities_cost_one(self, sim_potentials):
        v = np.array([0.2, 0.1])
        assert psi_align(v, v, sim_potentials) == pytest.approx(1.0)

    def test_opposed_velocities_hand_value(self, sim_potentials):
        v_i = np.array([0.35, 0.0])
        v_j = np.array([-0.35, 0.0])
        assert psi_align(v_i, v_j, sim_potentials) == pytest.approx(1.0421, abs=5e-5)

    def test_zero_velocity_is_neutral(self, sim_potentials):
        zero = np.zeros(2)
        for v_j in (np.array([0.3, 0.0]), np.array([-0.1, 0.2]), zero):
            assert psi_align(zero, v_j, sim_potentials) == pytest.approx(1.0)

    def test_at_least_one(self, sim_potentials, rng):
        for _ in range(50):
            v_i, v_j = rng.normal(size=2), rng.normal(size=2)
            assert psi_align(v_i, v_j, sim_potentials) >= 1.0


class TestAcc:
    def test_both_zero(self, sim_potentials):
        zero = np.zeros(2)
        assert psi_acc(zero, zero, sim_potentials) == pytest.approx(2.0)

    def test_repeated_full_input(self, sim_potentials):
        u = np.array([0.7, 0.0])
        assert psi_acc(u, u, sim_potentials) == pytest.approx(2.1052, abs=1e-4)

    def test_perpendicular_turn(self, sim_potentials):
        u = np.array([0.14, 0.0])
        u_last = np.array([0.0, 0.14])
        assert psi_acc(u, u_last, sim_potentials) == pytest.approx(2.1305, abs=2e-4)

    def test_at_least_two(self, sim_potentials, rng):
        for _ in range(50):
            u, u_last = rng.normal(size=2) * 0.5, rng.normal(size=2) * 0.5
            assert psi_acc(u, u_last, sim_potentials) >= 2.0


class TestVel:
    def test_matching_leader_velocity(self, sim_potentials):
        v = np.array([0.2, 0.0])
        assert psi_vel(v, v, sim_potentials) == pytest.approx(1.0)

    def test_hand_value(self, sim_potentials):
        assert psi_vel(
            np.array([0.2, 0.0]), np.array([0.0, 0.0]), sim_potentials
        ) == pytest.approx(1.1052, abs=1e-4)

    def test_monotone_in_mismatch(self, sim_potentials):
        v_l = np.array([0.2, 0.0])
        mismatches = [psi_vel(v_l + np.array([d, 0]), v_l, sim_potentials) for d in (0, 0.05, 0.1, 0.2)]
        assert np.all(np.diff(mismatches) > 0)
        for val in mismatches:
            assert val >= 1.0


class TestAngleBetween:
    @given(
        ax=st.floats(-5, 5), ay=st.floats(-5, 5),
        bx=st.floats(-5, 5), by=st.floats(-5, 5),
    )
    @settings(max_examples=80, deadline=None)
    def test_symmetric(self, ax, ay, bx, by):
        a, b = np.array([ax, ay]), np.array([bx, by])
        assert angle_between(a, b) == pytest.approx(angle_between(b, a), abs=1e-12)

    def test_clamps_rounding_overshoot(self):
        v = np.array([0.1, 0.2])
        assert angle_between(v, 3.0 * v) == pytest.approx(0.0, abs=1e-7)
        assert angle_between(v, -2.0 * v) == pytest.approx(np.pi, abs=1e-7)

    def test_broadcasting_against_candidate_table(self):
        v = np.array([1.0, 0.0])
        table = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]])
        out = angle_between(v, table)
        assert out == pytest.approx([0.0, np.pi / 2, np.pi])


class TestParamsValidation:
    def test_rejects_non_positive(self):
        with pytest.raises(ValueError):
            PotentialParams(a=0, b=10, k_a=1.5, k_r=0.2, k_l=4, k_c=7, k_d=15, k_v=2, t_p=0.15)

    def test_rejects_wellless_combination(self):
        with pytest.raises(ValueError):
            PotentialParams(a=10, b=1, k_a=0.2, k_r=1.5, k_l=4, k_c=7, k_d=15, k_v=2, t_p=0.15)
