"""Scenario construction and the deterministic simulation loop.

Agent 0 is the leader. It tracks an S-shaped reference (sinusoidal heading)
kinematically after an initial gather phase at the origin; followers spawn
scattered at rest in an annulus and are driven by the screening controller.
Replaying the same config (including the seed) reproduces the log
bit-for-bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .control_space import InfeasibleStateError  # noqa: F401  (re-export for callers)
from .controller import (
    ControllerConfig,
    NeighborGraph,
    build_neighbor_graph,
    control_step,
    control_step_arrays,
)
from .dynamics import AgentState, integrate_arrays, integrate_step
from .metrics import (
    MetricsRecord,
    collision_check,
    control_efficiency,
    metrics_record,
    trajectory_length,
)
from .potentials import desired_distance

LEADER_INDEX = 0

_MAX_SPAWN_REJECTIONS = 10_000


class InfeasibleScenarioError(RuntimeError):
    """The scenario cannot be set up (e.g. followers cannot be placed)."""


@dataclass(frozen=True)
class ScenarioConfig:
    """Scenario geometry, timing, and the controller configuration."""

    controller: ControllerConfig
    n_agents: int = 7
    dt: float = 0.05
    steps: int = 1400
    gather_duration: float = 10.0
    leader_speed: float = 0.2
    s_curve_amplitude: float = 0.9
    s_curve_period: float = 25.0
    spawn_radius: float = 2.5
    rng_seed: int = 1

    def __post_init__(self):
        if self.n_agents < 2:
            raise ValueError("n_agents must be >= 2")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.dt > self.controller.discretization.t_p:
            raise ValueError("dt must not exceed the planning horizon t_p")
        if self.steps < 0:
            raise ValueError("steps must be >= 0")
        if self.gather_duration < 0:
            raise ValueError("gather_duration must be >= 0")
        if self.leader_speed < 0:
            raise ValueError("v_leader must be >= 0")
        if self.s_curve_amplitude < 0:
            raise ValueError("s_curve_amplitude must be >= 0")
        if not self.s_curve_period > 0:
            raise ValueError("s_curve_period must be positive")
        if not self.spawn_radius > 0:
            raise ValueError("spawn_radius must be positive")


@dataclass
class SimulationSummary:
    """Per-agent mean input magnitude, path length, and the collision flag."""

    u_avg: np.ndarray
    trajectory_length: np.ndarray
    collision_free: bool


@dataclass
class SimulationLog:
    """Complete record of one run: snapshot 0 plus one record per tick.

    Row ``k`` holds the state at time ``k * dt``; ``inputs[k]`` is the
    command applied over the tick that *ended* at that time (row 0 is all
    zeros). Metrics are evaluated on each snapshot.
    """

    config: ScenarioConfig
    times: np.ndarray       # (steps + 1,)
    positions: np.ndarray   # (steps + 1, n_agents, 2)
    velocities: np.ndarray  # (steps + 1, n_agents, 2)
    inputs: np.ndarray      # (steps + 1, n_agents, 2)
    metrics: list[MetricsRecord]
    collisions: np.ndarray  # (steps + 1,) bool, True where spacing is safe
    summary: SimulationSummary

    @property
    def n_agents(self) -> int:
        return self.positions.shape[1]


def leader_trajectory(config: ScenarioConfig, n_ticks: int):
    """Leader reference sampled on the tick grid: ((n+1, 2) positions, velocities).

    Stationary at the origin until ``gather_duration``; afterwards constant
    speed with heading A * sin(2*pi * tau / P). Positions accumulate the
    velocity samples with forward Euler, so the path is exactly reproducible
    at tick resolution.
    """
    t = np.arange(n_ticks + 1) * config.dt
    tau = t - config.gather_duration
    moving = tau >= 0
    theta = config.s_curve_amplitude * np.sin(
        2.0 * np.pi * tau / config.s_curve_period
    )
    velocities = config.leader_speed * np.column_stack([np.cos(theta), np.sin(theta)])
    velocities[~moving] = 0.0
    positions = np.vstack(
        [np.zeros((1, 2)), np.cumsum(velocities[:-1] * config.dt, axis=0)]
    )
    return positions, velocities


def leader_reference(t: float, config: ScenarioConfig) -> AgentState:
    """Leader state at time ``t`` (evaluated at tick resolution)."""
    if t < 0:
        raise ValueError("t must be >= 0")
    k = int(round(t / config.dt))
    positions, velocities = leader_trajectory(config, k)
    return AgentState(position=positions[k], velocity=velocities[k])


def spawn_followers(config: ScenarioConfig) -> list[AgentState]:
    """Place n_agents - 1 followers at rest in an annulus around the origin.

    The annulus spans [2 * desired distance, spawn_radius]; pairwise spacing
    of at least 2 * r_coll is enforced by rejection sampling. Deterministic
    per seed.
    """
    d_t = desired_distance(config.controller.potentials)
    inner = 2.0 * d_t
    outer = config.spawn_radius
    if inner > outer:
        raise InfeasibleScenarioError(
            f"spawn annulus is empty: 2 * desired distance {inner:.3f} m "
            f"exceeds spawn_radius {outer:.3f} m"
        )
    min_sep = 2.0 * config.controller.bounds.r_coll
    rng = np.random.default_rng(config.rng_seed)
    placed: list[np.ndarray] = []
    rejections = 0
    while len(placed) < config.n_agents - 1:
        radius = float(np.sqrt(rng.uniform(inner * inner, outer * outer)))
        phi = float(rng.uniform(0.0, 2.0 * np.pi))
        point = radius * np.array([np.cos(phi), np.sin(phi)])
        if all(np.linalg.norm(point - q) >= min_sep for q in placed):
            placed.append(point)
        else:
            rejections += 1
            if rejections > _MAX_SPAWN_REJECTIONS:
                raise InfeasibleScenarioError(
                    f"could not place {config.n_agents - 1} followers with "
                    f"spacing >= {min_sep:.3f} m after {rejections} rejections"
                )
    return [AgentState(position=p, velocity=np.zeros(2)) for p in placed]


def _snapshot(states: list[AgentState]):
    pos = np.stack([s.position for s in states])
    vel = np.stack([s.velocity for s in states])
    return pos, vel


def run_simulation(config: ScenarioConfig) -> SimulationLog:
    """Run the scenario and return the complete log.

    Per tick: the controller screens candidates against the current
    neighbor graph, followers integrate the filtered commands, the leader
    advances along its reference, and states/inputs/metrics are recorded.
    Collision events are recorded, not fatal.
    """
    ctrl = config.controller
    n = config.n_agents
    lead_p, lead_v = leader_trajectory(config, config.steps)
    followers = spawn_followers(config)

    pos = np.vstack([lead_p[0][None, :], [f.position for f in followers]])
    vel = np.vstack([lead_v[0][None, :], [f.velocity for f in followers]])
    last = np.zeros((n, 2))

    n_rows = config.steps + 1
    times = np.arange(n_rows) * config.dt
    positions = np.empty((n_rows, n, 2))
    velocities = np.empty((n_rows, n, 2))
    inputs = np.zeros((n_rows, n, 2))
    collisions = np.empty(n_rows, dtype=bool)
    metrics: list[MetricsRecord] = []

    graph = build_neighbor_graph(pos, ctrl.k, LEADER_INDEX)
    positions[0], velocities[0] = pos, vel
    metrics.append(metrics_record(times[0], pos, vel, inputs[0], graph))
    collisions[0] = collision_check(pos, ctrl.bounds.r_coll)

    for k in range(config.steps):
        commands = control_step_arrays(pos, vel, last, graph, vel[LEADER_INDEX], ctrl)
        pos[1:], vel[1:] = integrate_arrays(pos[1:], vel[1:], commands, config.dt)
        last[1:] = commands
        pos[LEADER_INDEX], vel[LEADER_INDEX] = lead_p[k + 1], lead_v[k + 1]

        graph = build_neighbor_graph(pos, ctrl.k, LEADER_INDEX)
        positions[k + 1], velocities[k + 1] = pos, vel
        inputs[k + 1, 1:] = commands
        metrics.append(metrics_record(times[k + 1], pos, vel, inputs[k + 1], graph))
        collisions[k + 1] = collision_check(pos, ctrl.bounds.r_coll)

    if config.steps >= 1:
        u_avg = np.array([control_efficiency(inputs[1:, i]) for i in range(n)])
        lengths = np.array([trajectory_length(positions[:, i]) for i in range(n)])
    else:
        u_avg = np.zeros(n)
        lengths = np.zeros(n)
    summary = SimulationSummary(
        u_avg=u_avg,
        trajectory_length=lengths,
        collision_free=bool(collisions.all()),
    )
    return SimulationLog(
        config=config,
        times=times,
        positions=positions,
        velocities=velocities,
        inputs=inputs,
        metrics=metrics,
        collisions=collisions,
        summary=summary,
    )
