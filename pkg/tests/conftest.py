import numpy as np
import pytest

from mrf_flock import Bounds, ControllerConfig, DiscretizationConfig, PotentialParams


@pytest.fixture
def sim_potentials():
    """Simulation-column potential parameters."""
    return PotentialParams(a=8, b=10, k_a=1.5, k_r=0.2, k_l=4, k_c=7, k_d=15, k_v=2, t_p=0.15)


@pytest.fixture
def sim_bounds():
    return Bounds(v_max=0.35, u_max=0.7, r_coll=0.12)


@pytest.fixture
def sim_discretization():
    return DiscretizationConfig(n_a=6, delta_u=0.14, u_max=0.7, t_p=0.15)


@pytest.fixture
def controller_config(sim_potentials, sim_bounds):
    def make(prediction_steps=1, k=2, alpha=0.8, iterations=3, epsilon=1e-4):
        disc = DiscretizationConfig(
            n_a=6, delta_u=0.14, u_max=0.7, t_p=0.15, prediction_steps=prediction_steps
        )
        return ControllerConfig(
            k=k,
            alpha=alpha,
            discretization=disc,
            potentials=sim_potentials,
            bounds=sim_bounds,
            iterations=iterations,
            epsilon_converge=epsilon,
        )

    return make


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
