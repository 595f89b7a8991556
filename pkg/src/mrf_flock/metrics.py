"""Flight-performance metrics: order, distance triple, input efficiency,
trajectory length, and collision detection."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .controller import NeighborGraph
from .potentials import ZERO_NORM_EPS


class UndefinedMetricError(ValueError):
    """The metric is undefined for the given inputs (too few agents/samples)."""


@dataclass(frozen=True)
class MetricsRecord:
    """Per-tick metric sample."""

    t: float
    order: float
    d_min: float
    d_max: float
    d_avg: float
    input_magnitudes: np.ndarray  # (n_agents,) applied |u| this tick


def _pairwise_cosines(velocities: np.ndarray) -> np.ndarray:
    """(N, N) velocity cosines; pairs with a near-zero member contribute 0."""
    norms = np.linalg.norm(velocities, axis=-1)
    dots = velocities @ velocities.T
    denom = np.outer(norms, norms)
    ok = (norms[:, None] >= ZERO_NORM_EPS) & (norms[None, :] >= ZERO_NORM_EPS)
    return np.where(ok, dots / np.where(ok, denom, 1.0), 0.0)


def order_metric(velocities, graph: NeighborGraph) -> float:
    """Mean neighbor velocity correlation, in [-1, 1].

    Per agent: the mean cosine between its velocity and each neighbor's;
    agents with empty neighbor lists (the leader) are left out of the outer
    mean. Zero-velocity members contribute 0 to their pair terms so the
    metric stays defined at rest.
    """
    velocities = np.asarray(velocities, dtype=float)
    if velocities.ndim != 2 or velocities.shape[0] < 2:
        raise ValueError("need velocities for at least two agents")
    cos = _pairwise_cosines(velocities)
    padded = graph.as_padded()
    if padded.shape[1] == 0:
        return 0.0
    present = padded >= 0
    degrees = present.sum(axis=1)
    included = degrees > 0
    if not included.any():
        return 0.0
    gathered = np.where(present, cos[np.arange(len(cos))[:, None], np.where(present, padded, 0)], 0.0)
    per_agent = gathered.sum(axis=1)[included] / degrees[included]
    return float(per_agent.mean())


def nearest_neighbor_distances(positions: np.ndarray) -> np.ndarray:
    """Per-agent distance to its closest other agent."""
    positions = np.asarray(positions, dtype=float)
    diff = positions[:, None, :] - positions[None, :, :]
    dist = np.linalg.norm(diff, axis=-1)
    np.fill_diagonal(dist, np.inf)
    return dist.min(axis=1)


def distance_metrics(positions) -> tuple[float, float, float]:
    """(min, max, mean) of the per-agent nearest-neighbor distances."""
    positions = np.asarray(positions, dtype=float)
    if positions.ndim != 2 or positions.shape[0] < 2:
        raise UndefinedMetricError("distance metrics need at least two agents")
    d = nearest_neighbor_distances(positions)
    return float(d.min()), float(d.max()), float(d.mean())


def control_efficiency(input_history) -> float:
    """Mean input magnitude over the recorded command ticks."""
    inputs = np.asarray(input_history, dtype=float)
    if inputs.ndim != 2 or inputs.shape[0] < 1:
        raise UndefinedMetricError("control efficiency needs at least one tick")
    return float(np.linalg.norm(inputs, axis=-1).mean())


def trajectory_length(position_history) -> float:
    """Total path length: sum of successive displacement magnitudes."""
    positions = np.asarray(position_history, dtype=float)
    if positions.ndim != 2 or positions.shape[0] < 2:
        raise UndefinedMetricError("trajectory length needs at least two samples")
    return float(np.linalg.norm(np.diff(positions, axis=0), axis=-1).sum())


def collision_check(positions, r_coll: float) -> bool:
    """True iff every pairwise distance is at least 2 * r_coll."""
    if not r_coll > 0:
        raise ValueError("r_coll must be positive")
    positions = np.asarray(positions, dtype=float)
    if positions.shape[0] < 2:
        return True
    return bool(nearest_neighbor_distances(positions).min() >= 2.0 * r_coll)


def metrics_record(t, positions, velocities, inputs, graph: NeighborGraph) -> MetricsRecord:
    """Assemble the per-tick record from one state snapshot."""
    d_min, d_max, d_avg = distance_metrics(positions)
    return MetricsRecord(
        t=float(t),
        order=order_metric(velocities, graph),
        d_min=d_min,
        d_max=d_max,
        d_avg=d_avg,
        input_magnitudes=np.linalg.norm(np.asarray(inputs, dtype=float), axis=-1),
    )
