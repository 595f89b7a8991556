"""Double-integrator agent state and forward Euler prediction.

Each agent is a planar point mass driven by an acceleration command:

    p' = p + v*t + u*t^2/2
    v' = v + u*t

The same update serves both the controller's forward prediction (over the
planning horizon) and the simulator tick (over dt).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Slack for comparisons against the speed/input bounds: the top rung of the
# input ladder lands on u_max only up to float rounding (5 * 0.14 != 0.7
# exactly in binary), and direction unit vectors carry ulp-level norm error.
FEASIBILITY_EPS = 1e-9


def _vec2(value) -> np.ndarray:
    v = np.array(value, dtype=float)
    if v.shape != (2,):
        raise ValueError(f"expected a 2-vector, got shape {v.shape}")
    return v


@dataclass
class AgentState:
    """Position [m], velocity [m/s], and last applied input [m/s^2]."""

    position: np.ndarray
    velocity: np.ndarray
    last_input: np.ndarray = field(default_factory=lambda: np.zeros(2))

    def __post_init__(self):
        self.position = _vec2(self.position)
        self.velocity = _vec2(self.velocity)
        self.last_input = _vec2(self.last_input)

    @property
    def speed(self) -> float:
        return float(np.linalg.norm(self.velocity))

    def is_finite(self) -> bool:
        return bool(
            np.all(np.isfinite(self.position))
            and np.all(np.isfinite(self.velocity))
            and np.all(np.isfinite(self.last_input))
        )


@dataclass(frozen=True)
class Bounds:
    """Hard limits: maximum speed, maximum input, and the safety radius.

    Two agents collide when their distance drops below 2 * r_coll.
    """

    v_max: float
    u_max: float
    r_coll: float

    def __post_init__(self):
        for name in ("v_max", "u_max", "r_coll"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")


def predict_state(state: AgentState, u, horizon: float) -> AgentState:
    """Predict the state after holding acceleration ``u`` for ``horizon`` seconds.

    Args:
        state: current agent state
        u: acceleration command, shape (2,)
        horizon: prediction interval, must be > 0

    Returns:
        The predicted state; its ``last_input`` is ``u``.
    """
    u = _vec2(u)
    if not np.all(np.isfinite(u)):
        raise ValueError("control input must be finite")
    if not horizon > 0:
        raise ValueError("horizon must be positive")
    position = state.position + state.velocity * horizon + u * (horizon * horizon / 2.0)
    velocity = state.velocity + u * horizon
    return AgentState(position=position, velocity=velocity, last_input=u)


def integrate_step(state: AgentState, u, dt: float) -> AgentState:
    """Advance the plant one simulator tick (same Euler form as predict_state)."""
    return predict_state(state, u, dt)


def integrate_arrays(positions, velocities, u, dt: float):
    """Batched integrate_step over stacked (N, 2) arrays; same update rule."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    positions = positions + velocities * dt + u * (dt * dt / 2.0)
    velocities = velocities + u * dt
    return positions, velocities


def is_feasible(predicted: AgentState, u, bounds: Bounds) -> bool:
    """True iff ``u`` and the predicted speed respect the bounds (inclusive)."""
    u = np.asarray(u, dtype=float)
    return bool(
        np.linalg.norm(u) <= bounds.u_max + FEASIBILITY_EPS
        and np.linalg.norm(predicted.velocity) <= bounds.v_max + FEASIBILITY_EPS
    )
