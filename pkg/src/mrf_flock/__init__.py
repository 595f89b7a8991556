"""Distributed predictive flocking control via mean-field screening of
discretized control inputs, with a deterministic simulation harness."""

from .config_io import DEFAULTS, ConfigError, load_scenario, parse_config_file, scenario_from_mapping
from .control_space import (
    CandidateSet,
    ControlCandidate,
    DiscretizationConfig,
    InfeasibleStateError,
    enumerate_inputs,
    generate_candidates,
)
from .controller import (
    Belief,
    ControllerConfig,
    NeighborGraph,
    NumericFailureError,
    build_neighbor_graph,
    candidate_energy,
    control_step,
    init_beliefs,
    leader_candidate_set,
    mean_field_sweep,
    select_input,
    smooth_input,
    velocity_command,
)
from .dynamics import AgentState, Bounds, integrate_step, is_feasible, predict_state
from .metrics import (
    MetricsRecord,
    UndefinedMetricError,
    collision_check,
    control_efficiency,
    distance_metrics,
    order_metric,
    trajectory_length,
)
from .potentials import (
    NoMinimumError,
    PotentialParams,
    angle_between,
    desired_distance,
    psi_acc,
    psi_align,
    psi_attract_repulse,
    psi_vel,
)
from .sim import (
    InfeasibleScenarioError,
    ScenarioConfig,
    SimulationLog,
    SimulationSummary,
    leader_reference,
    leader_trajectory,
    run_simulation,
    spawn_followers,
)

__version__ = "0.1.0"

__all__ = [
    "AgentState",
    "Belief",
    "Bounds",
    "CandidateSet",
    "ConfigError",
    "ControlCandidate",
    "ControllerConfig",
    "DEFAULTS",
    "DiscretizationConfig",
    "InfeasibleScenarioError",
    "InfeasibleStateError",
    "MetricsRecord",
    "NeighborGraph",
    "NoMinimumError",
    "NumericFailureError",
    "PotentialParams",
    "ScenarioConfig",
    "SimulationLog",
    "SimulationSummary",
    "UndefinedMetricError",
    "angle_between",
    "build_neighbor_graph",
    "candidate_energy",
    "collision_check",
    "control_efficiency",
    "control_step",
    "desired_distance",
    "distance_metrics",
    "enumerate_inputs",
    "generate_candidates",
    "init_beliefs",
    "integrate_step",
    "is_feasible",
    "leader_candidate_set",
    "leader_reference",
    "leader_trajectory",
    "load_scenario",
    "mean_field_sweep",
    "order_metric",
    "parse_config_file",
    "predict_state",
    "psi_acc",
    "psi_align",
    "psi_attract_repulse",
    "psi_vel",
    "run_simulation",
    "scenario_from_mapping",
    "select_input",
    "smooth_input",
    "spawn_followers",
    "trajectory_length",
    "velocity_command",
]
