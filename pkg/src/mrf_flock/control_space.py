"""Discretized control-input set and feasible candidate generation.

The input space is a zero command plus a polar grid: ``n_a`` directions
uniformly spaced by 2*pi/n_a, and magnitudes on an arithmetic ladder
``delta_u, 2*delta_u, ...`` capped at ``u_max``. Each input is screened by
predicting the state at the planning horizon and checking the speed/input
bounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .dynamics import FEASIBILITY_EPS, AgentState, Bounds


class InfeasibleStateError(RuntimeError):
    """No candidate input can reduce the speed of an over-limit state."""


@dataclass(frozen=True)
class DiscretizationConfig:
    """Input-grid geometry and the forward-prediction interval.

    ``prediction_steps`` sets how many Euler steps of ``t_p`` the candidate
    input is held for; for a double integrator the rollout collapses to a
    single prediction over ``horizon = prediction_steps * t_p``.
    """

    n_a: int
    delta_u: float
    u_max: float
    t_p: float
    prediction_steps: int = 1

    def __post_init__(self):
        if self.n_a < 1:
            raise ValueError("n_a must be >= 1")
        if not 0 < self.delta_u <= self.u_max:
            raise ValueError("delta_u must satisfy 0 < delta_u <= u_max")
        if not self.t_p > 0:
            raise ValueError("t_p must be positive")
        if self.prediction_steps < 1:
            raise ValueError("prediction_steps must be >= 1")

    @property
    def horizon(self) -> float:
        return self.t_p * self.prediction_steps

    @property
    def n_magnitudes(self) -> int:
        # u_max/delta_u can round just below an integer (0.7/0.14 < 5 in
        # binary); nudge before flooring so the top rung is kept.
        return int(np.floor(self.u_max / self.delta_u + 1e-9))


@dataclass(frozen=True)
class ControlCandidate:
    """One discretized input together with its predicted state."""

    input: np.ndarray
    predicted: AgentState


@dataclass
class CandidateSet:
    """Feasible candidates for one agent, stored column-wise for speed.

    Row ``i`` of each array describes one candidate; indexing returns the
    corresponding :class:`ControlCandidate`. Order follows the input
    enumeration (zero first, then ascending magnitude, then direction).
    """

    inputs: np.ndarray      # (C, 2) accelerations
    positions: np.ndarray   # (C, 2) predicted positions
    velocities: np.ndarray  # (C, 2) predicted velocities

    def __len__(self) -> int:
        return self.inputs.shape[0]

    def __getitem__(self, i: int) -> ControlCandidate:
        predicted = AgentState(
            position=self.positions[i],
            velocity=self.velocities[i],
            last_input=self.inputs[i],
        )
        return ControlCandidate(input=np.array(self.inputs[i]), predicted=predicted)

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]


@lru_cache(maxsize=32)
def _enumerate_cached(n_a: int, delta_u: float, u_max: float) -> np.ndarray:
    n_mag = int(np.floor(u_max / delta_u + 1e-9))
    theta = 2.0 * np.pi / n_a * np.arange(1, n_a + 1)
    directions = np.column_stack([np.sin(theta), np.cos(theta)])
    magnitudes = delta_u * np.arange(1, n_mag + 1)
    nonzero = (magnitudes[:, None, None] * directions[None, :, :]).reshape(-1, 2)
    inputs = np.vstack([np.zeros((1, 2)), nonzero])
    inputs.setflags(write=False)
    return inputs


def enumerate_inputs(config: DiscretizationConfig) -> np.ndarray:
    """Return the discretized input set, shape (1 + n_a * n_magnitudes, 2).

    Ordering is deterministic: the zero input first, then ascending
    magnitude, then ascending direction index (angle k * 2*pi/n_a mapped to
    [sin, cos]).
    """
    return _enumerate_cached(config.n_a, config.delta_u, config.u_max).copy()


def _predict_batch(positions, velocities, inputs, horizon):
    """Predict all inputs for a batch of agents; returns (P, V) of shape (A, M, 2)."""
    p = positions[:, None, :] + velocities[:, None, :] * horizon
    p = p + inputs[None, :, :] * (horizon * horizon / 2.0)
    v = velocities[:, None, :] + inputs[None, :, :] * horizon
    return p, v


def _feasible_mask(inputs, pred_velocities, bounds: Bounds) -> np.ndarray:
    input_ok = np.linalg.norm(inputs, axis=-1) <= bounds.u_max + FEASIBILITY_EPS
    speed_ok = np.linalg.norm(pred_velocities, axis=-1) <= bounds.v_max + FEASIBILITY_EPS
    return input_ok & speed_ok


def _braking_fallback(pred_speeds, current_speed: float) -> int:
    """Index of the candidate that maximally reduces speed; error if none can."""
    best = int(np.argmin(pred_speeds))
    if pred_speeds[best] >= current_speed:
        raise InfeasibleStateError(
            f"speed {current_speed:.4f} m/s exceeds the limit and no candidate "
            "input reduces it within the prediction horizon"
        )
    return best


def generate_candidates(
    state: AgentState, config: DiscretizationConfig, bounds: Bounds
) -> CandidateSet:
    """Enumerate inputs, predict each at the horizon, and keep the feasible ones.

    The zero input survives whenever the current speed is in bounds, so the
    result is normally non-empty. If the current speed already exceeds
    ``v_max`` (possible through command filtering) and nothing brings it back
    within one horizon, the single candidate that maximally reduces speed is
    kept instead; :class:`InfeasibleStateError` is raised only when not even
    that is possible.
    """
    if not state.is_finite():
        raise ValueError("agent state must be finite")
    inputs = _enumerate_cached(config.n_a, config.delta_u, config.u_max)
    pred_p, pred_v = _predict_batch(
        state.position[None, :], state.velocity[None, :], inputs, config.horizon
    )
    pred_p, pred_v = pred_p[0], pred_v[0]
    mask = _feasible_mask(inputs, pred_v, bounds)
    if not mask.any():
        best = _braking_fallback(np.linalg.norm(pred_v, axis=-1), state.speed)
        mask = np.zeros(len(inputs), dtype=bool)
        mask[best] = True
    return CandidateSet(
        inputs=inputs[mask].copy(),
        positions=pred_p[mask],
        velocities=pred_v[mask],
    )
